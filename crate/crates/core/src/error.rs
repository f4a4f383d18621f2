use thiserror::Error;

/// Errors raised by the numerical core.
#[allow(missing_docs)]
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size limit: {qubits} qubits exceeds the maximum of {max}")]
    SizeLimit { qubits: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("subsystem is empty")]
    EmptySubsystem,

    #[error("subsystem covers every qubit, no bipartition")]
    FullSubsystem,

    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("degenerate chain: {sites} sites is too short for {what}")]
    DegenerateChain { sites: usize, what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("cluster size {m} out of range for {sites} sites")]
    ClusterSize { m: usize, sites: usize },

    #[error("time grid is empty")]
    EmptyGrid,

    #[error("time grid must be ascending and start at t >= 0")]
    InvalidGrid,

    #[error("averaging window [{tau}, {t_max}] holds fewer than two grid points")]
    WindowTooShort { tau: f64, t_max: f64 },

    #[error("degenerate trajectory: zero time average on the window")]
    DegenerateTrajectory,
}

/// Result alias for the core crate.
pub type Result<T> = core::result::Result<T, Error>;
