//! Isotropic Gaussian laws and the three distances to equilibrium.
//!
//! A law here is `N(m, s^2 I_d)` with a vector mean and one scalar variance,
//! which is exactly the family visited by an Ornstein-Uhlenbeck diffusion
//! started from a point. Against a stationary law `N(m0, sigma^2 I_d)` the
//! module computes
//!
//! * relative entropy  `Ent = E_p[log f]`, `f = dp/dq`,
//! * varentropy        `Varent = Var_p[log f]`,
//! * total variation   `TV = P_p(f > 1) - P_q(f > 1)`,
//!
//! all in closed form except the unequal-variance TV, which is reduced to a
//! one-dimensional integral: the log likelihood ratio depends on `x` only
//! through the projection `y` on the mean-offset direction and the orthogonal
//! radius `rho`, the `y`-probability of the quadratic event is exact in the
//! normal CDF, and the `rho`-average is a chi-distribution quadrature. This
//! stays accurate and cheap in any dimension.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;
use crate::scalar::{lit, normal_cdf, Scalar};

/// Absolute tolerance for the total-variation quadrature.
pub const TV_QUAD_TOL: f64 = 1e-9;

/// Bhattacharyya coefficient below which two laws are numerically singular
/// and `TV = 1 - BC` is exact to well beyond every tolerance in this crate.
const SINGULAR_BC: f64 = 1e-15;

/// Negative values above this threshold are treated as round-off and clipped.
const ROUNDOFF_CLIP: f64 = -1e-12;

/// An isotropic Gaussian law `N(mean, variance * I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianLaw<F> {
    mean: Vec<F>,
    variance: F,
}

impl<F: Scalar> GaussianLaw<F> {
    pub fn new(mean: Vec<F>, variance: F) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if !(variance.is_finite() && variance > F::zero()) {
            return Err(Error::NonPositiveVariance(variance.to_f64().unwrap_or(f64::NAN)));
        }
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite("law mean"));
        }
        Ok(Self { mean, variance })
    }

    /// Standard normal in `dim` dimensions.
    pub fn standard(dim: usize) -> Result<Self> {
        Self::new(vec![F::zero(); dim], F::one())
    }

    pub fn mean(&self) -> &[F] {
        &self.mean
    }

    pub fn variance(&self) -> F {
        self.variance
    }

    pub fn dimension(&self) -> usize {
        self.mean.len()
    }

    /// Squared Euclidean distance between the means of two laws.
    fn mean_offset_sq(&self, other: &Self) -> F {
        self.mean
            .iter()
            .zip(&other.mean)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum()
    }

    /// `log (dp/dq)(x)` for `p = self` against `q = stationary`.
    pub fn log_density_ratio(&self, stationary: &Self, x: &[F]) -> Result<F> {
        check_pair(self, stationary)?;
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch(self.dimension(), x.len()));
        }
        let half = lit::<F>(0.5);
        let d = lit::<F>(self.dimension() as f64);
        let mut qp = F::zero();
        let mut qq = F::zero();
        for i in 0..x.len() {
            let dp = x[i] - self.mean[i];
            let dq = x[i] - stationary.mean[i];
            qp = qp + dp * dp;
            qq = qq + dq * dq;
        }
        Ok(half * (qq / stationary.variance - qp / self.variance)
            + half * d * (stationary.variance / self.variance).ln())
    }
}

/// The three distances between a law and equilibrium at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceTriple<F> {
    pub tv: F,
    pub ent: F,
    pub varent: F,
}

impl<F: Scalar> DistanceTriple<F> {
    /// Validates ranges; negative values within round-off are clipped to 0,
    /// `tv` slightly above 1 is clipped to 1.
    pub fn new(tv: F, ent: F, varent: F) -> Result<Self> {
        let tv = clip_unit(tv).ok_or(Error::TvOutOfRange(tv.to_f64().unwrap_or(f64::NAN)))?;
        let ent =
            clip_nonneg(ent).ok_or(Error::NegativeEntropy(ent.to_f64().unwrap_or(f64::NAN)))?;
        let varent = clip_nonneg(varent)
            .ok_or(Error::NegativeVarentropy(varent.to_f64().unwrap_or(f64::NAN)))?;
        Ok(Self { tv, ent, varent })
    }
}

fn clip_nonneg<F: Scalar>(x: F) -> Option<F> {
    if !x.is_finite() || x < lit(ROUNDOFF_CLIP) {
        None
    } else {
        Some(x.max(F::zero()))
    }
}

fn clip_unit<F: Scalar>(x: F) -> Option<F> {
    let x = clip_nonneg(x)?;
    if x > F::one() - lit(ROUNDOFF_CLIP) {
        None
    } else {
        Some(x.min(F::one()))
    }
}

fn check_pair<F: Scalar>(p: &GaussianLaw<F>, q: &GaussianLaw<F>) -> Result<()> {
    if p.dimension() != q.dimension() {
        return Err(Error::DimensionMismatch(p.dimension(), q.dimension()));
    }
    Ok(())
}

/// Relative entropy `Ent(p | stationary)` in nats.
///
/// Closed form for isotropic Gaussians:
/// `d/2 (r - 1 - log r) + |m - m0|^2 / (2 sigma^2)` with `r = s^2 / sigma^2`.
pub fn relative_entropy<F: Scalar>(p: &GaussianLaw<F>, stationary: &GaussianLaw<F>) -> Result<F> {
    check_pair(p, stationary)?;
    let d = lit::<F>(p.dimension() as f64);
    let half = lit::<F>(0.5);
    let e = p.variance / stationary.variance - F::one();
    // e - ln(1 + e) is the cancellation-safe form of r - 1 - ln r.
    let ratio_term = e - e.ln_1p();
    let offset = p.mean_offset_sq(stationary);
    Ok((half * d * ratio_term + half * offset / stationary.variance).max(F::zero()))
}

/// Varentropy `Var_p[log dp/dq]` in nats^2.
///
/// Per coordinate `(r - 1)^2 / 2 + m_i^2 s^2 / sigma^4`, summed; the mean
/// offsets add through the squared norm.
pub fn varentropy<F: Scalar>(p: &GaussianLaw<F>, stationary: &GaussianLaw<F>) -> Result<F> {
    check_pair(p, stationary)?;
    let d = lit::<F>(p.dimension() as f64);
    let half = lit::<F>(0.5);
    let r = p.variance / stationary.variance;
    let e = r - F::one();
    let offset = p.mean_offset_sq(stationary);
    Ok(half * d * e * e + offset * p.variance / (stationary.variance * stationary.variance))
}

/// Total variation distance `(1/2) integral |dp - dq|` in `[0, 1]`.
///
/// Uses the default quadrature tolerance [`TV_QUAD_TOL`].
pub fn total_variation<F: Scalar>(p: &GaussianLaw<F>, stationary: &GaussianLaw<F>) -> Result<F> {
    total_variation_with_tol(p, stationary, lit(TV_QUAD_TOL))
}

/// Total variation with an explicit absolute quadrature tolerance.
pub fn total_variation_with_tol<F: Scalar>(
    p: &GaussianLaw<F>,
    q: &GaussianLaw<F>,
    tol: F,
) -> Result<F> {
    check_pair(p, q)?;
    let s2 = p.variance;
    let g2 = q.variance;
    let a2 = p.mean_offset_sq(q);
    let a = a2.sqrt();

    if a2 == F::zero() && s2 == g2 {
        return Ok(F::zero());
    }

    // Nearly mutually singular laws: 1 - BC <= TV <= 1 - BC^2/2, so for
    // tiny BC the lower end is exact far beyond quadrature accuracy, and it
    // keeps TV strictly below 1 in floating point.
    let d = lit::<F>(p.dimension() as f64);
    let half = lit::<F>(0.5);
    let two = lit::<F>(2.0);
    let bc = (two * (s2 * g2).sqrt() / (s2 + g2)).powf(half * d)
        * (-a2 / (lit::<F>(4.0) * (s2 + g2))).exp();
    if bc < lit(SINGULAR_BC) {
        return Ok(F::one() - bc);
    }

    // Equal variances: the likelihood ratio is linear and TV is exact.
    if (s2 - g2).abs() <= lit::<F>(1e-14) * s2.max(g2) {
        let sigma = g2.sqrt();
        return Ok(two * normal_cdf(a / (two * sigma)) - F::one());
    }

    // log(dp/dq)(x) = beta (y^2 + rho^2) + alpha y + c in the coordinates
    // (y, rho) aligned with the mean offset (q centered at the origin).
    let beta = half * (F::one() / g2 - F::one() / s2);
    let alpha = a / s2;
    let c = -a2 / (two * s2) + half * d * (g2 / s2).ln();

    if p.dimension() == 1 {
        let tv = prob_quadratic_positive(beta, alpha, c, a, s2.sqrt())
            - prob_quadratic_positive(beta, alpha, c, F::zero(), g2.sqrt());
        return Ok(tv.max(F::zero()).min(F::one()));
    }

    // rho = s * V under p and sigma * V under q with V chi-distributed on
    // d - 1 degrees of freedom; average the exact y-probabilities over V.
    let k = p.dimension() - 1;
    let ln_norm = (F::one() - half * lit::<F>(k as f64)) * two.ln()
        - (half * lit::<F>(k as f64)).ln_gamma();
    let chi_pdf = |v: F| -> F {
        if v <= F::zero() {
            if k == 1 {
                (two / F::PI()).sqrt()
            } else {
                F::zero()
            }
        } else {
            (ln_norm + lit::<F>((k - 1) as f64) * v.ln() - half * v * v).exp()
        }
    };
    let sqrt_k = lit::<F>(k as f64).sqrt();
    let lo = (sqrt_k - lit::<F>(12.0)).max(F::zero());
    let hi = sqrt_k + lit::<F>(13.0);
    let s = s2.sqrt();
    let g = g2.sqrt();
    let integrand = |v: F| {
        let w = v * v;
        let hp = prob_quadratic_positive(beta, alpha, c + beta * s2 * w, a, s);
        let hq = prob_quadratic_positive(beta, alpha, c + beta * g2 * w, F::zero(), g);
        (hp - hq) * chi_pdf(v)
    };
    let quad = adaptive_simpson(integrand, lo, hi, tol)?;
    Ok(quad.value.max(F::zero()).min(F::one()))
}

/// `P(beta y^2 + alpha y + c > 0)` for `y ~ N(mu, sd^2)`.
fn prob_quadratic_positive<F: Scalar>(beta: F, alpha: F, c: F, mu: F, sd: F) -> F {
    if beta == F::zero() {
        if alpha == F::zero() {
            return if c > F::zero() { F::one() } else { F::zero() };
        }
        let crossing = -c / alpha;
        let z = (crossing - mu) / sd;
        return if alpha > F::zero() {
            normal_cdf(-z)
        } else {
            normal_cdf(z)
        };
    }
    let four = lit::<F>(4.0);
    let disc = alpha * alpha - four * beta * c;
    if disc <= F::zero() {
        return if beta > F::zero() { F::one() } else { F::zero() };
    }
    let sq = disc.sqrt();
    // Citardauq-style root extraction avoids cancellation for small beta.
    let qv = if alpha >= F::zero() {
        -(alpha + sq) * lit::<F>(0.5)
    } else {
        -(alpha - sq) * lit::<F>(0.5)
    };
    let (r_lo, r_hi) = if qv == F::zero() {
        (F::zero(), F::zero())
    } else {
        let r1 = qv / beta;
        let r2 = c / qv;
        (r1.min(r2), r1.max(r2))
    };
    let p_inside = normal_cdf((r_hi - mu) / sd) - normal_cdf((r_lo - mu) / sd);
    let p_inside = p_inside.max(F::zero()).min(F::one());
    if beta > F::zero() {
        F::one() - p_inside
    } else {
        p_inside
    }
}

/// All three distances between `p` and the stationary law.
pub fn distance_triple<F: Scalar>(
    p: &GaussianLaw<F>,
    stationary: &GaussianLaw<F>,
) -> Result<DistanceTriple<F>> {
    let tv = total_variation(p, stationary)?;
    let ent = relative_entropy(p, stationary)?;
    let varent = varentropy(p, stationary)?;
    DistanceTriple::new(tv, ent, varent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law(mean: f64, var: f64) -> GaussianLaw<f64> {
        GaussianLaw::new(vec![mean], var).unwrap()
    }

    #[test]
    fn rejects_bad_laws() {
        assert!(GaussianLaw::<f64>::new(vec![], 1.0).is_err());
        assert!(GaussianLaw::new(vec![0.0], 0.0).is_err());
        assert!(GaussianLaw::new(vec![0.0], -1.0).is_err());
        assert!(GaussianLaw::new(vec![f64::NAN], 1.0).is_err());
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let p = GaussianLaw::new(vec![0.0, 0.0], 1.0).unwrap();
        let q = law(0.0, 1.0);
        assert!(relative_entropy(&p, &q).is_err());
        assert!(varentropy(&p, &q).is_err());
        assert!(total_variation(&p, &q).is_err());
    }

    #[test]
    fn entropy_of_law_against_itself_is_zero() {
        let q = law(0.3, 2.0);
        assert_eq!(relative_entropy(&q, &q).unwrap(), 0.0);
        assert_eq!(varentropy(&q, &q).unwrap(), 0.0);
        assert_eq!(total_variation(&q, &q).unwrap(), 0.0);
    }

    #[test]
    fn entropy_closed_form_reference_case() {
        // Ent(N(0.5, 0.75) | N(0, 1)) = ln(4/3)/2.
        let got = relative_entropy(&law(0.5, 0.75), &law(0.0, 1.0)).unwrap();
        let want = 0.5 * (4.0f64 / 3.0).ln();
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        // Tensorizes to 3x over three independent coordinates.
        let p3 = GaussianLaw::new(vec![0.5; 3], 0.75).unwrap();
        let q3 = GaussianLaw::standard(3).unwrap();
        let got3 = relative_entropy(&p3, &q3).unwrap();
        assert!((got3 - 3.0 * want).abs() < 1e-14);
    }

    #[test]
    fn varentropy_closed_form_reference_case() {
        let got = varentropy(&law(0.5, 0.75), &law(0.0, 1.0)).unwrap();
        assert!((got - 0.21875).abs() < 1e-15);
        let p2 = GaussianLaw::new(vec![0.5; 2], 0.75).unwrap();
        let q2 = GaussianLaw::standard(2).unwrap();
        assert!((varentropy(&p2, &q2).unwrap() - 0.4375).abs() < 1e-15);
    }

    #[test]
    fn tv_equal_variance_closed_form() {
        // TV(N(0.5,1), N(0,1)) = 2 Phi(1/4) - 1.
        let got = total_variation(&law(0.5, 1.0), &law(0.0, 1.0)).unwrap();
        let want = 2.0 * normal_cdf(0.25) - 1.0;
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        assert!((got - 0.197_412_651_365_847_4).abs() < 1e-12);
    }

    #[test]
    fn tv_of_concentrated_law_is_nearly_one() {
        let got = total_variation(&law(0.0, 1e-8), &law(0.0, 1.0)).unwrap();
        assert!(got > 0.999, "{got}");
        assert!(got < 1.0);
        // And truly singular pairs saturate to 1 - BC, still below 1.
        let far = total_variation(&law(80.0, 1e-12), &law(0.0, 1.0)).unwrap();
        assert!(far < 1.0 && far > 1.0 - 1e-14);
    }

    #[test]
    fn log_density_ratio_matches_direct_evaluation() {
        let p = law(0.5, 0.75);
        let q = law(0.0, 1.0);
        let x = [0.8];
        let lp = -0.5 * (0.8f64 - 0.5).powi(2) / 0.75 - 0.5 * (2.0 * std::f64::consts::PI * 0.75).ln();
        let lq = -0.5 * 0.8f64.powi(2) - 0.5 * (2.0 * std::f64::consts::PI).ln();
        let got = p.log_density_ratio(&q, &x).unwrap();
        assert!((got - (lp - lq)).abs() < 1e-14);
    }

    #[test]
    fn triple_clips_roundoff_and_rejects_garbage() {
        let t = DistanceTriple::new(-1e-14_f64, -1e-13, 0.0).unwrap();
        assert_eq!(t.tv, 0.0);
        assert_eq!(t.ent, 0.0);
        assert!(DistanceTriple::new(1.5_f64, 0.0, 0.0).is_err());
        assert!(DistanceTriple::new(0.5_f64, -1.0, 0.0).is_err());
        assert!(DistanceTriple::new(0.5_f64, 0.0, -1.0).is_err());
    }
}
