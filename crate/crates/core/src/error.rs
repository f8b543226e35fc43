use thiserror::Error;

/// Errors raised by the population, series and evaluation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty range: limit {0} is below the smallest prime")]
    EmptyRange(u64),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("list constraint violated: first index {r0} exceeds reason {r}")]
    ListConstraint { r0: u64, r: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument {value} is outside the tabulated range [1, {bound}]")]
    OutOfRange { value: f64, bound: u64 },

    #[error("primes are materialized up to {have}, but {need} is required")]
    InsufficientMaterialization { have: u64, need: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("interleaving violated at pair {index}: {detail}")]
    Interleaving { index: usize, detail: String },

    #[error("path too coarse between points {from} and {to}: log jump {jump:.3}")]
    PathTooCoarse { from: usize, to: usize, jump: f64 },

    #[error("zeta estimate vanishes on the path at point {0}")]
    SingularPath(usize),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("operation requires an arithmetical list with a reason, got {0}")]
    NotArithmetical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
