//! The bound engine: reverse Pinsker, spectral-gap and curvature mixing
//! estimates, the entropy-varentropy differential margins, integrated
//! entropy bounds, window bounds, and cutoff diagnostics.
//!
//! Everything operates on a [`MixingProfile`]: a sampled curve
//! `t -> (tv, ent, varent, dEnt/dt)` together with the spectral gap and the
//! curvature of the model that produced it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::DistanceTriple;
use crate::scalar::{lit, Scalar};

/// Where a profile's numbers came from; carried into reports for provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ProfileSource {
    /// Closed-form Ornstein-Uhlenbeck analytics.
    AnalyticOu { theta: f64, dimension: usize },
    /// Grid Fokker-Planck solve at the recorded resolution.
    FokkerPlanck { n: usize, dx: f64, delta: f64 },
}

impl ProfileSource {
    pub fn tag(&self) -> &'static str {
        match self {
            ProfileSource::AnalyticOu { .. } => "analytic-ou",
            ProfileSource::FokkerPlanck { .. } => "fokker-planck",
        }
    }
}

/// Sampled distance-to-equilibrium curves plus model constants.
#[derive(Debug, Clone)]
pub struct MixingProfile<F> {
    times: Vec<F>,
    triples: Vec<DistanceTriple<F>>,
    dent_dt: Vec<F>,
    lambda: F,
    kappa: F,
    source: ProfileSource,
}

/// Slack allowed between a certified curvature and a numerical spectral gap.
pub const GAP_VS_KAPPA_TOL: f64 = 1e-3;

impl<F: Scalar> MixingProfile<F> {
    pub fn new(
        times: Vec<F>,
        triples: Vec<DistanceTriple<F>>,
        dent_dt: Vec<F>,
        lambda: F,
        kappa: F,
        source: ProfileSource,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != triples.len() || times.len() != dent_dt.len() {
            return Err(Error::BadProfile("times/triples/dent_dt lengths differ or empty"));
        }
        if times[0] <= F::zero() || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadProfile("times must be strictly increasing and positive"));
        }
        if !(lambda.is_finite() && lambda > F::zero()) {
            return Err(Error::GapNotPositive(lambda.to_f64().unwrap_or(f64::NAN)));
        }
        if !(kappa.is_finite() && kappa >= F::zero()) {
            return Err(Error::NegativeKappa(kappa.to_f64().unwrap_or(f64::NAN)));
        }
        if lambda < kappa - lit(GAP_VS_KAPPA_TOL) {
            return Err(Error::BadProfile("spectral gap below certified curvature"));
        }
        Ok(Self { times, triples, dent_dt, lambda, kappa, source })
    }

    pub fn times(&self) -> &[F] {
        &self.times
    }

    pub fn triples(&self) -> &[DistanceTriple<F>] {
        &self.triples
    }

    pub fn dent_dt(&self) -> &[F] {
        &self.dent_dt
    }

    pub fn lambda(&self) -> F {
        self.lambda
    }

    pub fn kappa(&self) -> F {
        self.kappa
    }

    pub fn source(&self) -> &ProfileSource {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// How a pair of mixing times was extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MixingTimesMethod {
    ClosedFormBisection,
    ProfileInterpolation,
}

/// `t_mix(1 - eps)`, `t_mix(eps)` and the window between them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingTimesReport<F> {
    pub epsilon: F,
    pub t_early: F,
    pub t_late: F,
    pub window: F,
    pub method: MixingTimesMethod,
}

impl<F: Scalar> MixingTimesReport<F> {
    pub fn new(epsilon: F, t_early: F, t_late: F, method: MixingTimesMethod) -> Result<Self> {
        check_epsilon_half(epsilon)?;
        if !(t_early.is_finite() && t_late.is_finite()) || t_early < F::zero() {
            return Err(Error::NonFinite("mixing times"));
        }
        if t_early > t_late {
            return Err(Error::BadProfile("t_early exceeds t_late"));
        }
        Ok(Self { epsilon, t_early, t_late, window: t_late - t_early, method })
    }
}

/// One checked inequality: what was measured, what the bound was, and the
/// signed margin `bound - measured`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub label: String,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub provenance: Provenance,
}

/// Context attached to a [`BoundReport`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct Provenance {
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl BoundReport {
    pub fn new(
        label: impl Into<String>,
        measured: f64,
        bound: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        let margin = bound - measured;
        Self {
            label: label.into(),
            measured,
            bound,
            margin,
            passed: margin >= -tolerance,
            tolerance,
            provenance,
        }
    }
}

fn check_epsilon_half<F: Scalar>(epsilon: F) -> Result<()> {
    if !(epsilon > F::zero() && epsilon < lit::<F>(0.5)) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon.to_f64().unwrap_or(f64::NAN),
            lo: 0.0,
            hi: 0.5,
        });
    }
    Ok(())
}

fn check_epsilon_unit<F: Scalar>(epsilon: F) -> Result<()> {
    if !(epsilon > F::zero() && epsilon < F::one()) {
        return Err(Error::EpsilonOutOfRange {
            value: epsilon.to_f64().unwrap_or(f64::NAN),
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

/// Reverse Pinsker upper bound on entropy: `(1 + sqrt(varent)) / (1 - tv)`.
pub fn reverse_pinsker_bound<F: Scalar>(varent: F, tv: F) -> Result<F> {
    if !(tv >= F::zero() && tv < F::one()) {
        return Err(Error::TvOutOfRange(tv.to_f64().unwrap_or(f64::NAN)));
    }
    if !(varent >= F::zero()) {
        return Err(Error::NegativeVarentropy(varent.to_f64().unwrap_or(f64::NAN)));
    }
    Ok((F::one() + varent.sqrt()) / (F::one() - tv))
}

/// Spectral-gap mixing estimate propagated to time `t`:
/// `t_mix(eps) <= t + (1 + Ent(X_t)) / (lambda eps)`.
pub fn gap_mixing_bound<F: Scalar>(ent_at_t: F, t: F, lambda: F, epsilon: F) -> Result<F> {
    check_epsilon_unit(epsilon)?;
    if !(lambda > F::zero()) {
        return Err(Error::GapNotPositive(lambda.to_f64().unwrap_or(f64::NAN)));
    }
    if !(ent_at_t >= F::zero()) {
        return Err(Error::NegativeEntropy(ent_at_t.to_f64().unwrap_or(f64::NAN)));
    }
    if !(t >= F::zero()) {
        return Err(Error::NonFinite("time"));
    }
    Ok(t + (F::one() + ent_at_t) / (lambda * epsilon))
}

/// Margins of the point-start differential inequality under non-negative
/// curvature: `m(t) = dEnt/dt + Varent / (2t)`, nonpositive when it holds.
pub fn differential_margins<F: Scalar>(profile: &MixingProfile<F>) -> Vec<F> {
    profile
        .times
        .iter()
        .zip(&profile.triples)
        .zip(&profile.dent_dt)
        .map(|((&t, tri), &de)| de + tri.varent / (lit::<F>(2.0) * t))
        .collect()
}

/// Margins of the time-uniform variant under positive curvature:
/// `m(t) = dEnt/dt + kappa * Varent`; requires `kappa > 0`.
pub fn differential_margins_positive<F: Scalar>(profile: &MixingProfile<F>) -> Result<Vec<F>> {
    if !(profile.kappa > F::zero()) {
        return Err(Error::KappaNotPositive(profile.kappa.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(profile
        .triples
        .iter()
        .zip(&profile.dent_dt)
        .map(|(tri, &de)| de + profile.kappa * tri.varent)
        .collect())
}

/// Which integrated entropy bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvatureFlavor<F> {
    NonNegative,
    Positive { kappa: F },
}

/// Entropy bound after integrating the differential inequality from
/// `t0 = t_mix(1 - eps)`:
/// non-negative curvature gives `1/eps + 2 / (eps^2 log(t/t0))`,
/// positive curvature `kappa` gives `1/eps + 1 / (eps^2 kappa (t - t0))`.
pub fn integrated_entropy_bound<F: Scalar>(
    epsilon: F,
    t0: F,
    t: F,
    flavor: CurvatureFlavor<F>,
) -> Result<F> {
    check_epsilon_half(epsilon)?;
    if !(t0 > F::zero() && t.is_finite()) || t <= t0 {
        return Err(Error::BadIntegrationWindow {
            t: t.to_f64().unwrap_or(f64::NAN),
            t0: t0.to_f64().unwrap_or(f64::NAN),
        });
    }
    let one = F::one();
    let eps2 = epsilon * epsilon;
    match flavor {
        CurvatureFlavor::NonNegative => {
            Ok(one / epsilon + lit::<F>(2.0) / (eps2 * (t / t0).ln()))
        }
        CurvatureFlavor::Positive { kappa } => {
            if !(kappa > F::zero()) {
                return Err(Error::KappaNotPositive(kappa.to_f64().unwrap_or(f64::NAN)));
            }
            Ok(one / epsilon + one / (eps2 * kappa * (t - t0)))
        }
    }
}

/// Window bound from the spectral gap:
/// `w_mix(eps) <= 3/(lambda eps^3) + 3 sqrt(t_early / (lambda eps^3))`.
pub fn window_bound_spectral_gap<F: Scalar>(lambda: F, epsilon: F, t_early: F) -> Result<F> {
    check_epsilon_half(epsilon)?;
    if !(lambda > F::zero()) {
        return Err(Error::GapNotPositive(lambda.to_f64().unwrap_or(f64::NAN)));
    }
    if !(t_early >= F::zero() && t_early.is_finite()) {
        return Err(Error::NonFinite("t_early"));
    }
    let three = lit::<F>(3.0);
    let le3 = lambda * epsilon * epsilon * epsilon;
    Ok(three / le3 + three * (t_early / le3).sqrt())
}

/// Window bound from positive curvature: `w_mix(eps) <= 3 / (kappa eps^2)`.
pub fn window_bound_curvature<F: Scalar>(kappa: F, epsilon: F) -> Result<F> {
    check_epsilon_half(epsilon)?;
    if !(kappa > F::zero()) {
        return Err(Error::KappaNotPositive(kappa.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(lit::<F>(3.0) / (kappa * epsilon * epsilon))
}

/// Slack tolerated in the sampled-monotonicity guard; covers the quadrature
/// tolerance of the TV evaluations feeding the profile.
const MONOTONE_SLACK: f64 = 4e-9;

fn verify_tv_monotone<F: Scalar>(times: &[F], tvs: &[F]) -> Result<()> {
    for i in 1..tvs.len() {
        if tvs[i] > tvs[i - 1] + lit(MONOTONE_SLACK) {
            return Err(Error::NonMonotoneTv {
                t0: times[i - 1].to_f64().unwrap_or(f64::NAN),
                tv0: tvs[i - 1].to_f64().unwrap_or(f64::NAN),
                t1: times[i].to_f64().unwrap_or(f64::NAN),
                tv1: tvs[i].to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(())
}

/// First-crossing time of a threshold on the sampled, verified-monotone TV
/// curve, by piecewise-linear interpolation.
fn first_crossing<F: Scalar>(times: &[F], tvs: &[F], threshold: F) -> Result<F> {
    let min = tvs.iter().cloned().fold(F::infinity(), F::min);
    let max = tvs[0];
    if tvs[0] <= threshold || min > threshold {
        return Err(Error::ThresholdNotBracketed {
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
            min: min.to_f64().unwrap_or(f64::NAN),
            max: max.to_f64().unwrap_or(f64::NAN),
        });
    }
    for i in 1..tvs.len() {
        if tvs[i] <= threshold {
            let run = tvs[i - 1] - tvs[i];
            let frac = if run > F::zero() {
                (tvs[i - 1] - threshold) / run
            } else {
                F::zero()
            };
            return Ok(times[i - 1] + frac * (times[i] - times[i - 1]));
        }
    }
    unreachable!("bracketing checked above");
}

/// Mixing times `t_mix(1 - eps)` and `t_mix(eps)` from a sampled profile.
pub fn mixing_times_from_profile<F: Scalar>(
    profile: &MixingProfile<F>,
    epsilon: F,
) -> Result<MixingTimesReport<F>> {
    check_epsilon_half(epsilon)?;
    let tvs: Vec<F> = profile.triples.iter().map(|t| t.tv).collect();
    verify_tv_monotone(&profile.times, &tvs)?;
    let t_early = first_crossing(&profile.times, &tvs, F::one() - epsilon)?;
    let t_late = first_crossing(&profile.times, &tvs, epsilon)?;
    MixingTimesReport::new(epsilon, t_early, t_late, MixingTimesMethod::ProfileInterpolation)
}

/// The product-condition statistic `lambda * t_mix`.
pub fn product_condition_stat<F: Scalar>(lambda: F, t_mix_value: F) -> F {
    lambda * t_mix_value
}

/// Cutoff diagnostics `t_early / t_late` per report, each in `(0, 1]`.
pub fn cutoff_ratio<F: Scalar>(reports: &[MixingTimesReport<F>]) -> Result<Vec<F>> {
    if reports.is_empty() {
        return Err(Error::EmptyReports);
    }
    reports
        .iter()
        .map(|r| {
            if r.t_late <= F::zero() {
                Err(Error::BadProfile("t_late must be positive"))
            } else {
                Ok(r.t_early / r.t_late)
            }
        })
        .collect()
}

/// Entrywise maxima of the mixing times over a set of start points.
pub fn worst_case_over_starts<F: Scalar>(
    reports: &[MixingTimesReport<F>],
) -> Result<MixingTimesReport<F>> {
    let first = reports.first().ok_or(Error::EmptyReports)?;
    let mut t_early = first.t_early;
    let mut t_late = first.t_late;
    let mut method = first.method;
    for r in &reports[1..] {
        if r.epsilon != first.epsilon {
            return Err(Error::MixedEpsilons(
                first.epsilon.to_f64().unwrap_or(f64::NAN),
                r.epsilon.to_f64().unwrap_or(f64::NAN),
            ));
        }
        t_early = t_early.max(r.t_early);
        if r.t_late > t_late {
            t_late = r.t_late;
            method = r.method;
        }
    }
    MixingTimesReport::new(first.epsilon, t_early, t_late, method)
}
