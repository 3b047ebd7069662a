//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the numerical kernels.
///
/// Every precondition named in a constructor or operation maps to one
/// variant here; messages carry the offending values so callers can report
/// them without re-deriving context.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // -- Gaussian laws and OU analytics ------------------------------------
    #[error("law dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("variance must be positive and finite, got {0}")]
    NonPositiveVariance(f64),
    #[error("law dimension must be >= 1")]
    EmptyDimension,
    #[error("time must be positive and finite (the law at t = 0 is a point mass), got {0}")]
    DegenerateStart(f64),
    #[error("drift rate theta must be positive and finite, got {0}")]
    NonPositiveRate(f64),
    #[error("input must be finite: {0}")]
    NonFinite(&'static str),
    #[error("epsilon must lie in ({lo}, {hi}), got {value}")]
    EpsilonOutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("total-variation curve is not monotone on the bracket: tv({t0}) = {tv0} < tv({t1}) = {tv1}")]
    NonMonotoneTv { t0: f64, tv0: f64, t1: f64, tv1: f64 },
    #[error("bracket expansion failed: tv({t}) = {tv} never crossed {target}")]
    BracketFailure { t: f64, tv: f64, target: f64 },

    // -- quadrature ---------------------------------------------------------
    #[error("quadrature did not converge: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    // -- grid / Fokker-Planck ------------------------------------------------
    #[error("potential not certified convex: U''({x}) = {value} < kappa = {kappa} at node {node}")]
    ConvexityViolated { node: usize, x: f64, value: f64, kappa: f64 },
    #[error("curvature bound kappa must be >= 0, got {0}")]
    NegativeKappa(f64),
    #[error("grid needs at least {min} nodes, got {n}")]
    GridTooCoarse { n: usize, min: usize },
    #[error("half-width R must be positive and finite, got {0}")]
    BadHalfWidth(f64),
    #[error("stationary mass outside [-R, R] is {mass:.3e}, above the hard limit {limit:.3e}; enlarge R")]
    TruncatedMassTooLarge { mass: f64, limit: f64 },
    #[error("grid weights underflowed to zero (potential range too large for the scalar type); reduce R")]
    WeightUnderflow,
    #[error("bump at x0 = {x0} with width {delta} violates placement: {reason}")]
    BadBump { x0: f64, delta: f64, reason: &'static str },
    #[error("density has entry {value:.3e} below the clip tolerance {tol:.3e} at node {node}")]
    NegativeDensity { node: usize, value: f64, tol: f64 },
    #[error("density vector length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("mass drifted by {drift:.3e} in one step (limit {limit:.3e}) at t = {t}")]
    MassDrift { drift: f64, limit: f64, t: f64 },
    #[error("output times must be finite, nonnegative and strictly increasing")]
    BadTimeGrid,
    #[error("nonpositive density {value:.3e} at node {node} (weight {weight:.3e}) where the logarithm is required")]
    LogOfNonPositive { node: usize, value: f64, weight: f64 },
    #[error("eigensolver failed: {0}")]
    Eigensolver(&'static str),
    #[error("tridiagonal solve failed: zero pivot at row {0}")]
    SingularSolve(usize),

    // -- Monte Carlo ----------------------------------------------------------
    #[error("state became non-finite at step {step} (path {path}); drift blow-up")]
    NonFiniteState { step: usize, path: usize },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("sample set is empty")]
    EmptySamples,
    #[error("sde config invalid: {0}")]
    BadSdeConfig(&'static str),

    // -- mixing bounds ----------------------------------------------------------
    #[error("total variation must lie in [0, 1), got {0} (bound vacuous at tv >= 1)")]
    TvOutOfRange(f64),
    #[error("varentropy must be nonnegative, got {0}")]
    NegativeVarentropy(f64),
    #[error("entropy must be nonnegative, got {0}")]
    NegativeEntropy(f64),
    #[error("curvature must be positive for this bound, got {0}")]
    KappaNotPositive(f64),
    #[error("spectral gap must be positive, got {0}")]
    GapNotPositive(f64),
    #[error("need t > t0, got t = {t}, t0 = {t0}")]
    BadIntegrationWindow { t: f64, t0: f64 },
    #[error("profile invalid: {0}")]
    BadProfile(&'static str),
    #[error("threshold {threshold} not bracketed by the sampled tv curve (range [{min}, {max}]); widen the time grid")]
    ThresholdNotBracketed { threshold: f64, min: f64, max: f64 },
    #[error("mixing reports mix epsilon values: {0} vs {1}")]
    MixedEpsilons(f64, f64),
    #[error("report list is empty")]
    EmptyReports,
}

pub type Result<T> = std::result::Result<T, Error>;
