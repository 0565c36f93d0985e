use thiserror::Error;

/// Failure modes shared by the distribution functions and the test routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("all paired differences are zero")]
    AllZeroDifferences,
    #[error("no observation unit has a value under every condition")]
    NoCompleteUnits,
    #[error("factorial design cell ({0}, {1}) has no observations")]
    EmptyCell(usize, usize),
    #[error("contingency table has a zero row or column total")]
    ZeroMargin,
    #[error("expected a 2x2 table, got {rows}x{cols}")]
    NotTwoByTwo { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, StatsError>;
