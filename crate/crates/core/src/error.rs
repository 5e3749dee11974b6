use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidSpec(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("instance too large for exhaustive enumeration: more than {cap} feasible sets")]
    TooLarge { cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The optimal-strategy polytope was empty, so the supplied value is not
    /// the value of the game.
    #[error("no hider strategy holds every row at {0}; value is not the game value")]
    InconsistentValue(Rational),

    #[error("value decreased from {} to {} at budget {}", .0.previous, .0.value, .0.k)]
    NotMonotone(Box<MonotoneViolation>),

    #[error("no equilibrium found: {0}")]
    NoEquilibrium(String),
}

/// A budget at which the game value dropped below the previous budget's.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneViolation {
    pub k: Rational,
    pub previous: Rational,
    pub value: Rational,
}
