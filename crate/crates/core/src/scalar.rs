//! Generic scalar abstraction for the numerical kernels.
//!
//! Everything in this crate is written against [`Scalar`], a bundle of the
//! `num-traits` float traits plus the few special functions the analytics
//! need (`erf`, `erfc`, `ln_gamma`), backed by `libm` so that results are
//! identical across platforms. `f64` is the working type everywhere that
//! tight tolerances matter; `f32` is supported for cheap exploratory runs.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar with the special functions used by the crate.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn erf(self) -> Self;
    fn erfc(self) -> Self;
    fn ln_gamma(self) -> Self;
}

impl Scalar for f64 {
    fn erf(self) -> Self {
        libm::erf(self)
    }
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
    fn ln_gamma(self) -> Self {
        libm::lgamma(self)
    }
}

impl Scalar for f32 {
    fn erf(self) -> Self {
        libm::erff(self)
    }
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
    fn ln_gamma(self) -> Self {
        libm::lgammaf(self)
    }
}

/// Shorthand for lifting an `f64` literal into a generic scalar.
#[inline]
pub(crate) fn lit<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("literal representable in scalar type")
}

/// Standard normal CDF, accurate in both tails.
#[inline]
pub fn normal_cdf<F: Scalar>(z: F) -> F {
    let half = lit::<F>(0.5);
    half * (-z / F::SQRT_2()).erfc()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_reference_values() {
        assert!((normal_cdf(0.0_f64) - 0.5).abs() < 1e-16);
        // Phi(0.25) from high-precision tables.
        assert!((normal_cdf(0.25_f64) - 0.598_706_325_682_923_7).abs() < 1e-15);
        // Deep tails must not saturate early.
        assert!(normal_cdf(-8.0_f64) > 0.0);
        assert!(normal_cdf(-8.0_f64) < 1e-15);
        assert!((normal_cdf(8.0_f64) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn f32_special_functions_work() {
        assert!((1.0_f32.erf() - 0.842_700_8).abs() < 1e-6);
        assert!((5.0_f32.ln_gamma() - 24.0_f32.ln()).abs() < 1e-5);
    }
}
