use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Io(String),

    #[error("simulation error: {0}")]
    Simulation(#[from] qauction::Error),

    #[error("verification failed: distance {distance:e} exceeds {tolerance:e}")]
    VerificationFailed {
        distance: f64,
        tolerance: f64,
        /// Report to print before failing.
        report: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Simulation(_) | CliError::VerificationFailed { .. } => 2,
        }
    }
}
