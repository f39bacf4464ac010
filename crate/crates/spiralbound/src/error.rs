use thiserror::Error;

/// Errors produced by geometry construction, bound evaluation and the
/// eigensolver.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A query lies outside the cached/tabulated range.
    #[error("range error: {0}")]
    Range(String),

    /// A numerical procedure failed to reach its target tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The requested geometric construction does not exist (e.g. the inward
    /// normal misses the previous coil).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// The profile violates the standing regularity/shrinking assumptions.
    #[error("assumption violated: {0}")]
    Assumption(String),

    /// The spiral is not simple (non-monotone width function).
    #[error("not a simple spiral: {0}")]
    NotSimple(String),

    /// Eigensolver failure (non-convergence, factorization breakdown).
    #[error("eigensolver error: {0}")]
    Solver(String),

    /// Eigenvalue count disagrees with the inertia count.
    #[error("eigenvalue count mismatch: expected {expected}, found {found}")]
    CountMismatch { expected: usize, found: usize },

    /// Run configuration is invalid.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
