use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level {level} out of range (supported levels are {min}..={max})")]
    LevelOutOfRange { level: u32, min: u32, max: u32 },

    #[error("residue levels differ: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },

    #[error("enumeration budget exceeded: level {level} > limit {limit}")]
    BudgetExceeded { level: u32, limit: u32 },

    #[error("polynomial degree {degree} is below the required minimum {required}")]
    DegreeTooLow { degree: i64, required: i64 },

    #[error("invalid Chebyshev index {m}: {reason}")]
    InvalidIndex { m: u64, reason: &'static str },

    #[error("budget {budget} too small, at least {required} needed")]
    BudgetTooSmall { budget: u32, required: u32 },

    #[error("points do not form a cycle of the induced map at level {level}")]
    NotACycle { level: u32 },

    #[error("b_n is only defined for cycles with odd a_n")]
    EvenMultiplier,

    #[error("invalid ball: {0}")]
    InvalidBall(String),

    #[error("internal consistency fault: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
