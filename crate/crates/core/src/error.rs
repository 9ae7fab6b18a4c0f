use thiserror::Error;

/// Errors raised by the qutrit engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NonHermitianInput(f64),
    #[error("matrix trace is {0} instead of 1")]
    NonUnitTrace(f64),
    #[error("matrix norm {norm} exceeds the exponential bound {bound}; shrink the time step")]
    OverflowRisk { norm: f64, bound: f64 },
    #[error("Bloch vector lies outside the state space")]
    InvalidState,
    #[error("no closed-form solution for the general (a, b) case")]
    UnsupportedCase,
    #[error("linearization denominator vanished (phi = {0:e})")]
    DenominatorVanished(f64),
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("maximum number of integrator steps ({0}) exceeded")]
    MaxStepsExceeded(usize),
    #[error("argument outside its domain: {0}")]
    DomainError(String),
    #[error("point is not stationary (residual {0:e})")]
    NotStationary(f64),
    #[error("trajectory lies in the section hyperplane")]
    DegenerateSection,
    #[error("trajectory span {span} is shorter than the required {required}")]
    InsufficientSpan { span: f64, required: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
