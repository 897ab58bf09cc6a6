use crate::arith::Point;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {0} does not lie in the complex")]
    NotInComplex(Point),

    #[error("simplex is not regular")]
    NotRegular,

    #[error("vertex {vertex} has denominator not divisible by that of its target {target}")]
    DivisibilityViolation { vertex: Point, target: Point },

    #[error("join of {apex} with a simplex is degenerate")]
    DegenerateJoin { apex: Point },

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("complex has dimension {0}, at most 1 is supported here")]
    DimensionTooHigh(usize),

    #[error("pieces disagree at shared vertex {0}")]
    Discontinuous(Point),

    #[error("image point {0} is not covered by the target domain")]
    ImageNotContained(Point),

    #[error("pair is not a free face / coface pair of the complex")]
    NotFreePair,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("search budget of {0} states exhausted")]
    BudgetExhausted(u64),

    #[error("desingularization strategy did not terminate within {0} blow-ups")]
    StrategyGap(u64),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
