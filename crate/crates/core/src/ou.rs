//! Ornstein-Uhlenbeck analytics: the diffusion `dX = -theta X dt + sqrt(2) dB`
//! in `d` dimensions, i.e. the Langevin diffusion for `U(x) = theta |x|^2 / 2`.
//!
//! Everything is in closed form: the time-`t` law is Gaussian, the spectral
//! gap and the curvature both equal `theta`, and the distance curves
//! tensorize over coordinates. Mixing times come from bracketed bisection on
//! the TV curve, with a runtime monotonicity guard since the root finder
//! assumes a decreasing curve.

use rayon::prelude::*;

use crate::bounds::{MixingProfile, MixingTimesMethod, MixingTimesReport, ProfileSource};
use crate::error::{Error, Result};
use crate::gaussian::{distance_triple, GaussianLaw};
use crate::scalar::{lit, Scalar};

/// Ornstein-Uhlenbeck model with drift rate `theta`, started at the
/// deterministic point `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct OuModel<F> {
    theta: F,
    start: Vec<F>,
}

impl<F: Scalar> OuModel<F> {
    pub fn new(theta: F, start: Vec<F>) -> Result<Self> {
        if !(theta.is_finite() && theta > F::zero()) {
            return Err(Error::NonPositiveRate(theta.to_f64().unwrap_or(f64::NAN)));
        }
        if start.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if start.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("start point"));
        }
        Ok(Self { theta, start })
    }

    /// All coordinates started at the same value.
    pub fn with_uniform_start(theta: F, dimension: usize, value: F) -> Result<Self> {
        Self::new(theta, vec![value; dimension.max(1)])
    }

    pub fn theta(&self) -> F {
        self.theta
    }

    pub fn start(&self) -> &[F] {
        &self.start
    }

    pub fn dimension(&self) -> usize {
        self.start.len()
    }

    /// Spectral gap of the generator; equals `theta` for this family.
    pub fn spectral_gap(&self) -> F {
        self.theta
    }

    /// Curvature lower bound of the potential; equals `theta`.
    pub fn curvature(&self) -> F {
        self.theta
    }

    pub fn start_norm_sq(&self) -> F {
        self.start.iter().map(|&x| x * x).sum()
    }

    /// Stationary law `N(0, I / theta)`.
    pub fn stationary_law(&self) -> GaussianLaw<F> {
        GaussianLaw::new(vec![F::zero(); self.dimension()], F::one() / self.theta)
            .expect("theta validated at construction")
    }

    /// Law of `X_t`: `N(x0 e^{-theta t}, (1 - e^{-2 theta t}) / theta * I)`.
    ///
    /// Rejected at `t <= 0`: the point-mass start has no density and every
    /// downstream functional diverges there.
    pub fn law_at(&self, t: F) -> Result<GaussianLaw<F>> {
        if !t.is_finite() {
            return Err(Error::NonFinite("time"));
        }
        if t <= F::zero() {
            return Err(Error::DegenerateStart(t.to_f64().unwrap_or(f64::NAN)));
        }
        let decay = (-self.theta * t).exp();
        let mean: Vec<F> = self.start.iter().map(|&x| x * decay).collect();
        // 1 - e^{-2 theta t} via expm1 to keep small times accurate.
        let variance = -(-lit::<F>(2.0) * self.theta * t).exp_m1() / self.theta;
        GaussianLaw::new(mean, variance)
    }

    /// Analytic `d/dt Ent(X_t)`, differentiating the Gaussian closed form.
    ///
    /// With `u = e^{-2 theta t}`:
    /// `dEnt/dt = -d theta u^2 / (1 - u) - theta^2 |x0|^2 u`.
    pub fn entropy_derivative_at(&self, t: F) -> Result<F> {
        if !(t.is_finite() && t > F::zero()) {
            return Err(Error::DegenerateStart(t.to_f64().unwrap_or(f64::NAN)));
        }
        let two = lit::<F>(2.0);
        let u = (-two * self.theta * t).exp();
        let one_minus_u = -(-two * self.theta * t).exp_m1();
        let d = lit::<F>(self.dimension() as f64);
        Ok(-d * self.theta * u * u / one_minus_u - self.theta * self.theta * self.start_norm_sq() * u)
    }

    /// Distance triple of `X_t` against equilibrium.
    pub fn distances_at(&self, t: F) -> Result<crate::gaussian::DistanceTriple<F>> {
        distance_triple(&self.law_at(t)?, &self.stationary_law())
    }

    /// Sampled profile of the distance curves along a strictly increasing
    /// positive time grid. Per-time work is independent and runs in
    /// parallel; the output order follows the grid.
    pub fn profile(&self, times: &[F]) -> Result<MixingProfile<F>> {
        if times.is_empty()
            || times[0] <= F::zero()
            || times.windows(2).any(|w| w[1] <= w[0])
            || times.iter().any(|t| !t.is_finite())
        {
            return Err(Error::BadTimeGrid);
        }
        let stationary = self.stationary_law();
        let rows: Vec<Result<_>> = times
            .par_iter()
            .map(|&t| {
                let triple = distance_triple(&self.law_at(t)?, &stationary)?;
                let dent = self.entropy_derivative_at(t)?;
                Ok((triple, dent))
            })
            .collect();
        let mut triples = Vec::with_capacity(times.len());
        let mut dent_dt = Vec::with_capacity(times.len());
        for row in rows {
            let (triple, dent) = row?;
            triples.push(triple);
            dent_dt.push(dent);
        }
        MixingProfile::new(
            times.to_vec(),
            triples,
            dent_dt,
            self.spectral_gap(),
            self.curvature(),
            ProfileSource::AnalyticOu {
                theta: self.theta.to_f64().unwrap_or(f64::NAN),
                dimension: self.dimension(),
            },
        )
    }

    /// TV distance to equilibrium at time `t`.
    pub fn tv_at(&self, t: F) -> Result<F> {
        crate::gaussian::total_variation(&self.law_at(t)?, &self.stationary_law())
    }

    /// `inf { t : TV(X_t) <= epsilon }` by bracket expansion and bisection.
    ///
    /// The TV curve is expected to decrease in `t` but that is never assumed
    /// silently: 64 samples across the bracket are checked at runtime and a
    /// violation aborts with [`Error::NonMonotoneTv`].
    pub fn mixing_time(&self, epsilon: F, bracket_hint: Option<F>) -> Result<F> {
        if !(epsilon > F::zero() && epsilon < F::one()) {
            return Err(Error::EpsilonOutOfRange {
                value: epsilon.to_f64().unwrap_or(f64::NAN),
                lo: 0.0,
                hi: 1.0,
            });
        }
        let two = lit::<F>(2.0);
        let mut hi = bracket_hint
            .filter(|h| h.is_finite() && *h > F::zero())
            .unwrap_or(F::one() / self.theta);
        let mut tv_hi = self.tv_at(hi)?;
        let mut expansions = 0;
        while tv_hi > epsilon {
            hi = hi * two;
            tv_hi = self.tv_at(hi)?;
            expansions += 1;
            if expansions > 200 {
                return Err(Error::BracketFailure {
                    t: hi.to_f64().unwrap_or(f64::NAN),
                    tv: tv_hi.to_f64().unwrap_or(f64::NAN),
                    target: epsilon.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let mut lo = hi;
        loop {
            lo = lo * lit::<F>(0.5);
            if lo < lit::<F>(1e-14) {
                // TV is already at or below epsilon arbitrarily close to 0;
                // the infimum is 0+.
                return Ok(lo);
            }
            if self.tv_at(lo)? >= epsilon {
                break;
            }
        }

        // Runtime guard: the bisection below is only meaningful on a
        // decreasing curve.
        let samples = 64;
        let mut prev = self.tv_at(lo)?;
        let slack = lit::<F>(4e-9);
        for i in 1..=samples {
            let t = lo + (hi - lo) * lit::<F>(i as f64 / samples as f64);
            let tv = self.tv_at(t)?;
            if tv > prev + slack {
                return Err(Error::NonMonotoneTv {
                    t0: (lo + (hi - lo) * lit::<F>((i - 1) as f64 / samples as f64))
                        .to_f64()
                        .unwrap_or(f64::NAN),
                    tv0: prev.to_f64().unwrap_or(f64::NAN),
                    t1: t.to_f64().unwrap_or(f64::NAN),
                    tv1: tv.to_f64().unwrap_or(f64::NAN),
                });
            }
            prev = tv;
        }

        for _ in 0..200 {
            if hi - lo <= lit::<F>(1e-12) * hi.max(F::one()) {
                break;
            }
            let mid = (lo + hi) * lit::<F>(0.5);
            if self.tv_at(mid)? <= epsilon {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((lo + hi) * lit::<F>(0.5))
    }

    /// Mixing-times report at precision `epsilon in (0, 1/2)` via bisection.
    pub fn mixing_times(&self, epsilon: F) -> Result<MixingTimesReport<F>> {
        let t_late = self.mixing_time(epsilon, None)?;
        let t_early = self.mixing_time(F::one() - epsilon, Some(t_late))?;
        MixingTimesReport::new(epsilon, t_early, t_late, MixingTimesMethod::ClosedFormBisection)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{relative_entropy, total_variation, varentropy};

    #[test]
    fn rejects_bad_models_and_times() {
        assert!(OuModel::new(0.0_f64, vec![1.0]).is_err());
        assert!(OuModel::new(-1.0_f64, vec![1.0]).is_err());
        assert!(OuModel::new(1.0_f64, vec![]).is_err());
        let m = OuModel::new(1.0_f64, vec![1.0]).unwrap();
        assert!(m.law_at(0.0).is_err());
        assert!(m.law_at(-1.0).is_err());
        assert!(m.law_at(f64::NAN).is_err());
        assert!(m.law_at(f64::INFINITY).is_err());
    }

    #[test]
    fn law_at_reference_values() {
        // theta = 1, x0 = 1, t = ln 2: mean 1/2, variance 3/4.
        let m = OuModel::new(1.0_f64, vec![1.0]).unwrap();
        let law = m.law_at(2.0_f64.ln()).unwrap();
        assert!((law.mean()[0] - 0.5).abs() < 1e-15);
        assert!((law.variance() - 0.75).abs() < 1e-15);

        // Long horizon relaxes to the stationary law.
        let m0 = OuModel::new(1.0_f64, vec![0.0]).unwrap();
        let law = m0.law_at(50.0).unwrap();
        assert!(law.mean()[0].abs() < 1e-15);
        assert!((law.variance() - 1.0).abs() < 1e-15);

        // theta = 2, d = 3, x0 = (1,1,1), t = 1.
        let m3 = OuModel::new(2.0_f64, vec![1.0; 3]).unwrap();
        let law = m3.law_at(1.0).unwrap();
        for &mu in law.mean() {
            assert!((mu - (-2.0_f64).exp()).abs() < 1e-15);
        }
        assert!((law.variance() - (1.0 - (-4.0_f64).exp()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_derivative_matches_finite_differences() {
        let m = OuModel::new(1.3_f64, vec![0.7, -0.4]).unwrap();
        let q = m.stationary_law();
        for &t in &[0.05_f64, 0.3, 1.0, 3.0] {
            let h = 1e-6 * t;
            let ent = |tt: f64| relative_entropy(&m.law_at(tt).unwrap(), &q).unwrap();
            let fd = (ent(t + h) - ent(t - h)) / (2.0 * h);
            let exact = m.entropy_derivative_at(t).unwrap();
            assert!(
                (fd - exact).abs() < 1e-6 * (1.0 + exact.abs()),
                "t={t}: fd {fd} vs exact {exact}"
            );
        }
    }

    #[test]
    fn distances_are_symmetric_in_start_sign() {
        let plus = OuModel::new(0.8_f64, vec![1.7, -0.3]).unwrap();
        let minus = OuModel::new(0.8_f64, vec![-1.7, 0.3]).unwrap();
        let q = plus.stationary_law();
        for &t in &[0.1_f64, 0.7, 2.5] {
            let lp = plus.law_at(t).unwrap();
            let lm = minus.law_at(t).unwrap();
            assert!((relative_entropy(&lp, &q).unwrap() - relative_entropy(&lm, &q).unwrap())
                .abs()
                < 1e-15);
            assert!((varentropy(&lp, &q).unwrap() - varentropy(&lm, &q).unwrap()).abs() < 1e-15);
            assert!(
                (total_variation(&lp, &q).unwrap() - total_variation(&lm, &q).unwrap()).abs()
                    < 1e-12
            );
        }
    }

    #[test]
    fn profile_is_monotone_and_decays() {
        let m = OuModel::new(1.0_f64, vec![0.0]).unwrap();
        let times: Vec<f64> = (1..=40).map(|i| 0.1 * i as f64).collect();
        let p = m.profile(&times).unwrap();
        let triples = p.triples();
        for w in triples.windows(2) {
            assert!(w[1].tv <= w[0].tv + 4e-9);
            assert!(w[1].ent <= w[0].ent + 1e-12);
        }
        let last = triples.last().unwrap();
        assert!(last.tv < 1e-2 && last.ent < 1e-3 && last.varent < 1e-3);
    }

    #[test]
    fn near_stationary_start_has_tiny_distances() {
        let m = OuModel::new(1.0_f64, vec![0.0]).unwrap();
        let tr = m.distances_at(40.0).unwrap();
        assert!(tr.tv < 1e-12 && tr.ent < 1e-12 && tr.varent < 1e-12);
    }

    #[test]
    fn profile_rejects_bad_grids() {
        let m = OuModel::new(1.0_f64, vec![1.0]).unwrap();
        assert!(m.profile(&[]).is_err());
        assert!(m.profile(&[0.0, 1.0]).is_err());
        assert!(m.profile(&[1.0, 1.0]).is_err());
        assert!(m.profile(&[2.0, 1.0]).is_err());
    }

    #[test]
    fn mixing_time_trivial_epsilon_near_one() {
        let m = OuModel::new(1.0_f64, vec![0.0]).unwrap();
        let t = m.mixing_time(0.999, None).unwrap();
        assert!(t < 1e-6, "t = {t}");
        assert!(m.mixing_time(0.0, None).is_err());
        assert!(m.mixing_time(1.0, None).is_err());
    }

    #[test]
    fn mixing_time_scaling_law() {
        // Doubling theta halves t_mix when x0 sqrt(theta) is held fixed.
        let y0 = 2.0_f64;
        let eps = 0.25;
        let base = OuModel::new(1.0_f64, vec![y0]).unwrap().mixing_time(eps, None).unwrap();
        for &theta in &[0.5_f64, 2.0, 4.0] {
            let m = OuModel::new(theta, vec![y0 / theta.sqrt()]).unwrap();
            let t = m.mixing_time(eps, None).unwrap();
            assert!(
                (t * theta - base).abs() < 1e-7,
                "theta={theta}: {t} * theta vs {base}"
            );
        }
    }

    #[test]
    fn mixing_times_report_is_ordered() {
        let m = OuModel::new(1.0_f64, vec![5.0]).unwrap();
        let r = m.mixing_times(0.25).unwrap();
        assert!(r.t_early < r.t_late);
        assert!((r.window - (r.t_late - r.t_early)).abs() < 1e-15);
        // The bisection root actually sits on the curve.
        let tv = m.tv_at(r.t_late).unwrap();
        assert!((tv - 0.25).abs() < 1e-7, "tv at root: {tv}");
    }
}
