use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} is not a power of two up to 1024")]
    BadDimension(usize),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse Pauli string {0:?}")]
    PauliParse(String),
    #[error("invalid stabilizer group: {0}")]
    InvalidGroup(String),
    #[error("invalid probe: {0}")]
    InvalidProbe(String),
    #[error("unknown probe {0:?}")]
    UnknownProbe(String),
    #[error("invalid noise probabilities: {0}")]
    InvalidNoise(String),
    #[error("calibration target {target} not reachable for Delta in [0, 0.5]")]
    CalibrationUnreachable { target: f64 },
    #[error("response curve is not strictly monotone near phi = {0}")]
    NonMonotone(f64),
    #[error("dominant eigenvalue is degenerate (gap {0:.3e})")]
    DegenerateDominant(f64),
    #[error("Tr[rho^n] = {0:.3e} is too small")]
    TraceTooSmall(f64),
    #[error("derivative {0:.3e} too small at the evaluation point")]
    NonIdentifiable(f64),
    #[error("scaling fit needs at least 5 usable points, got {0}")]
    TooFewPoints(usize),
    #[error("QEC: {0}")]
    Qec(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::UnknownProbe(_)
            | Error::PauliParse(_)
            | Error::InvalidProbe(_)
            | Error::InvalidGroup(_)
            | Error::InvalidNoise(_)
            | Error::InvalidArgument(_)
            | Error::Json(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
