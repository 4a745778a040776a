use thiserror::Error;

/// Errors produced by evaluators, means and the search machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("incompatible domains: {0}")]
    Incompatible(String),

    #[error("degenerate hypothesis: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("search failed: {0}")]
    Search(String),
}

pub type Result<T> = std::result::Result<T, Error>;
