use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(qutrit::Error),
    #[error("cross-check discrepancy {discrepancy:e} exceeds {tolerance:e}")]
    CrossCheck { discrepancy: f64, tolerance: f64 },
    #[error("identity verification failed (worst residual {0:e})")]
    IdentityFailure(f64),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::CrossCheck { .. } => 4,
            CliError::IdentityFailure(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<qutrit::Error> for CliError {
    fn from(e: qutrit::Error) -> Self {
        use qutrit::Error as E;
        match e {
            E::StepSizeUnderflow { .. }
            | E::MaxStepsExceeded(_)
            | E::OverflowRisk { .. }
            | E::DenominatorVanished(_)
            | E::NonFinite(_) => CliError::Numerical(e),
            other => CliError::Config(other.to_string()),
        }
    }
}
