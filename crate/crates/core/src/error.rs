use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition has crossing blocks {0:?} and {1:?}")]
    Crossing(Vec<usize>, Vec<usize>),

    #[error("partition has an outer singleton {{{0}}}")]
    OuterSingleton(usize),

    #[error("pair partitions need an even ground set, got p = {0}")]
    OddPairSize(usize),

    #[error("inadmissible sign sequence: {0}")]
    InadmissibleEpsilon(String),

    #[error("unsupported cone {0}")]
    UnsupportedCone(String),

    #[error("point {point} does not belong to cone {cone}")]
    PointOutsideCone { cone: String, point: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("infeasible: {what} needs about {estimate} units of work, cap is {cap}")]
    Infeasible { what: String, estimate: f64, cap: f64 },

    #[error("integer overflow while counting {0}")]
    Overflow(String),

    #[error("pole of {function} at x = {location}")]
    Pole { function: String, location: String },

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("independent computations disagree: {0}")]
    OracleMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
