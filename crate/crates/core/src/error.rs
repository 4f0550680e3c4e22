use thiserror::Error;

/// Errors raised by the algebraic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial of degree {degree} exceeds the factorization bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("monoid is not integral: {0}")]
    NotIntegral(String),
    #[error("denominator {0} is not sent to a unit")]
    NotInvertibleDenominator(String),
    #[error("morphism is not a monomorphism")]
    NotMono,
    #[error("morphism is not an epimorphism")]
    NotEpi,
    #[error("rational map is not dominant: open {open} pulls back to Spec(0)")]
    NotDominant { open: String },
    #[error("every chart of the diagram is trivial")]
    AllChartsTrivial,
    #[error("chart {0} carries no finite-type certificate")]
    NonFiniteType(String),
    #[error("monoid axiom fails: {0}")]
    AxiomFailure(String),
    #[error("morphism is not well defined: {0}")]
    NotWellDefined(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("undecided within stage bound {bound}: {what}")]
    Undecided { what: String, bound: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
