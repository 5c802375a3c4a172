use thiserror::Error;

/// Errors raised by the optimization building blocks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at component {index}")]
    NonFinite { index: usize },

    #[error("component {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("invalid bounds at component {index}: lower {lower} > upper {upper}")]
    InvalidBounds { index: usize, lower: f64, upper: f64 },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("problem {name} needs n >= {min}, got {n}")]
    UnsupportedDimension { name: String, min: usize, n: usize },

    #[error("dual solver did not converge within {iterations} iterations (gap {gap:e})")]
    DualNonConvergence { iterations: usize, gap: f64 },

    #[error("objective subset is empty or out of range")]
    InvalidSubset,

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("search direction is not a descent direction (D = {d_value})")]
    NotDescent { d_value: f64 },

    #[error("no candidate reference point is weakly worse than the current point")]
    NoEligibleReference,

    #[error("line search exhausted {max_backtracks} backtracks")]
    MaxBacktracks { max_backtracks: usize },

    #[error("crowding cap must be at least 2, got {0}")]
    InvalidCap(usize),

    #[error("hypervolume is implemented for 1 to 3 objectives, got {0}")]
    UnsupportedObjectives(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
