use alloc::string::String;

/// Errors produced by the algebra, circuit and dense layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right} sites")]
    LengthMismatch { left: usize, right: usize },
    #[error("site {site} out of range for a {len}-site system")]
    SiteOutOfRange { site: usize, len: usize },
    #[error("{sites} sites exceed the backend limit of {limit}")]
    SizeOverflow { sites: usize, limit: usize },
    #[error("local operator is singular or its inverse does not match")]
    Singular,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("iterative eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("generators have no common +1 eigenvector")]
    NoFixedPoint,
    #[error("fixed space is not unique (dimension {0})")]
    NonUniqueFixedPoint(usize),
    #[error("state is not normalized (norm {0})")]
    Unnormalized(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
