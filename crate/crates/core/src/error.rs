use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bias p must lie in the open interval (0, 1), got {0}")]
    InvalidBias(f64),
    #[error("dimension {n} out of range (supported: 1..={max})")]
    Dimension { n: usize, max: usize },
    #[error("point index {x} out of range for dimension {n}")]
    PointIndex { x: u64, n: usize },
    #[error("table length {got} does not match 2^{n} = {expected}")]
    TableLength {
        n: usize,
        got: usize,
        expected: usize,
    },
    #[error("non-finite value at point {0}")]
    NonFinite(usize),
    #[error("negative value {value} at point {x}; a nonnegative function is required")]
    Negative { x: usize, value: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("exponent {got} out of range: {expected}")]
    Exponent { got: f64, expected: &'static str },
    #[error("argument {got} outside [0, 1]")]
    Unit { got: f64 },
    #[error("smoothing width must be positive, got {0}")]
    Smoothing(f64),
    #[error("malformed truth table: {0}")]
    Parse(String),
    #[error("grid needs at least {min} points, got {got}")]
    Grid { got: usize, min: usize },
    #[error("function has zero variance")]
    Degenerate,
    #[error("exhaustive search is limited to n <= {max}, got {n}")]
    ExhaustiveTooLarge { n: usize, max: usize },
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("threshold must be finite, got {0}")]
    Threshold(f64),
    #[error("coordinate {coord} out of range for dimension {n}")]
    Coordinate { coord: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
