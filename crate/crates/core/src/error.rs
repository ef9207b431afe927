use thiserror::Error;

/// Error type shared by every module in this crate.
///
/// Variants are grouped by the stage that raises them; the CLI maps them to
/// exit codes (input/validation problems vs. unsupported classifications vs.
/// numeric failures), so keep new variants in the right group.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // ---- input / validation ----
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("failed to parse {what}: {detail}")]
    Parse { what: String, detail: String },
    #[error("target precision must be at least 1 digit")]
    InvalidPrecision,
    #[error("max_term_log10 must be finite, got {0}")]
    NonFiniteMagnitude(f64),
    #[error("sampled grid must be strictly increasing (violated at index {0})")]
    GridNotIncreasing(usize),
    #[error("sampled grid needs at least {need} points, got {got}")]
    GridTooShort { need: usize, got: usize },

    // ---- classification / structure ----
    #[error("origin is an irregular singular point; series construction is not supported")]
    IrregularSingularPoint,
    #[error("operation requires {required} at the origin, found {found}")]
    WrongClassification { required: String, found: String },
    #[error("index shift by {nu} is invalid: {reason}")]
    InvalidShift { nu: String, reason: String },
    #[error("indicial discriminant is not a real rational; roots are not representable exactly")]
    IndicialNotReal,
    #[error("recursion denominator vanished at m={m}; classification and recursion disagree")]
    RecursionBreakdown { m: usize },
    #[error("the requested solution does not exist for this indicial case: {0}")]
    NoSuchSolution(String),

    // ---- numeric failures ----
    #[error("evaluation point |z| = {abs_z:.6e} is not strictly inside the convergence disc (radius {radius:.6e})")]
    OutsideConvergenceDisc { abs_z: f64, radius: f64 },
    #[error("series did not reach the stopping criterion within {cap} terms")]
    Divergence { cap: usize },
    #[error("evaluation at the expansion point is only defined for plain power series")]
    CenterEvaluationUnsupported,
    #[error("continuation step {step} lands on or within 10% of the local convergence radius of a singular point")]
    StepNearSingularity { step: usize },
    #[error("input is not convex: second difference is non-positive at index {index}")]
    NonConvex { index: usize },
    #[error("turning point within {tol:.1e} of the integration ray toward z = {z}")]
    PathObstruction { z: String, tol: f64 },
    #[error("phase scan failed after {retries} perturbation retries: {reason}")]
    PhaseScanFailed { retries: usize, reason: String },
    #[error("S''(u) is not positive at interior grid index {index}")]
    ProfileNotConvex { index: usize },
    #[error("m_bar(u) is not strictly increasing at grid index {index}")]
    MbarNotMonotone { index: usize },
    #[error("requested m = {m:.3} is outside the tabulated range [{lo:.3}, {hi:.3}]")]
    ExtrapolationOutOfRange { m: f64, lo: f64, hi: f64 },
    #[error("stopping criterion is not reached within the tabulated curve range")]
    CriterionUnreachable,
    #[error("log-bearing series have no single growth profile; estimation refused")]
    LogSeriesUnsupported,
}

pub type Result<T> = std::result::Result<T, Error>;
