use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An offspring law failed one of its invariants.
    #[error("invalid law: {0}")]
    Validation(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A sum or derivative could not be evaluated to finite precision.
    #[error("divergence: {0}")]
    Divergence(String),
    /// Power-series division was not defined.
    #[error("series division: {0}")]
    Division(String),
    /// Argument sits on a pole of a special function.
    #[error("pole of {0}")]
    Pole(String),
    /// The tree size cannot occur for this law.
    #[error("size {n} is not attainable for a law with span {span}")]
    Unattainable { n: usize, span: u64 },
    /// A complexity or size guard was exceeded.
    #[error("guard: {0}")]
    Guard(String),
    /// The sampler gave up.
    #[error("sampling: {0}")]
    Sampling(String),
    /// A descriptor or spec string could not be parsed.
    #[error("parse: {0}")]
    Parse(String),
    /// A theorem hypothesis required by the operation is not met.
    #[error("precondition: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
