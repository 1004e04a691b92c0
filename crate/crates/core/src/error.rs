use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operation needs a cyclic domain, got a line kernel (wrap it first)")]
    NeedsCyclic,
    #[error("operation needs a line domain")]
    NeedsLine,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("kernel is not even: |p(k) - p(-k)| = {asymmetry:e} at k = {index}")]
    NotEven { index: usize, asymmetry: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },
    #[error("dimension {dim} exceeds the enumeration limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("simplex iteration cap {0} reached; result unresolved")]
    IterationLimit(usize),
    #[error("result unresolved: {0}")]
    Unresolved(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("no sign change of feasibility on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("quadrature error estimate {estimate:e} above tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },
    #[error("kernel is not the chain potential V; the cutting certificate is specific to it")]
    NotChainPotential,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
