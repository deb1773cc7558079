use thiserror::Error;

/// Errors raised by the solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("precision budget exceeded: {0}")]
    Precision(String),
    #[error("no closed-form phase registered for this coefficient")]
    UnsupportedExact,
    #[error("back-transformed W vector is not real (imaginary residue {residue:.3e})")]
    Reality { residue: f64 },
    #[error("scaling denominator vanishes ({0:.3e})")]
    SingularAlpha(f64),
    #[error("matching determinant vanishes ({0:.3e})")]
    SingularMatch(f64),
    #[error("step size underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Assumption(_) => 2,
            Error::Precision(_) => 3,
            _ => 1,
        }
    }
}
