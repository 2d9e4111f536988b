use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {got} is out of range: {what}")]
    Dimension { got: usize, what: &'static str },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("indices must be distinct (got {0} twice)")]
    SameIndex(usize),

    #[error("vector {0} does not lie in the sum-zero hyperplane")]
    NotSumZero(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("polytope is degenerate: {0}")]
    Degenerate(String),

    #[error("Voronoi cell did not converge below radius^2 cap {cap}")]
    NoConvergence { cap: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Errors caused by caller input rather than by the computation itself.
    pub fn is_domain_error(&self) -> bool {
        !matches!(self, Error::NoConvergence { .. } | Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
