use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("jet degree {degree} outside supported range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("form of order {order} needs {order} arguments, got {got}")]
    ArityMismatch { order: usize, got: usize },

    #[error("singular matrix: pivot {pivot} has magnitude {magnitude:e}")]
    Singular { pivot: usize, magnitude: f64 },

    #[error("resolvent {shift} I - A is singular: {shift} is (close to) an eigenvalue of A")]
    SingularResolvent { shift: num_complex::Complex64 },

    #[error("bordered system not solvable: |<p, rhs>| = {residual:e} exceeds {tolerance:e}")]
    Solvability { residual: f64, tolerance: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("eigenvalue search near i*{guess} failed: {reason}")]
    Eigen { guess: f64, reason: String },

    #[error("invalid Hopf frame: {0}")]
    InvalidFrame(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("trajectory left the phase domain at t = {t}: state ({}, {}, {})", state[0], state[1], state[2])]
    DomainExit { t: f64, state: [f64; 3] },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::DegreeOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::ArityMismatch { .. }
            | Error::Parse(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
