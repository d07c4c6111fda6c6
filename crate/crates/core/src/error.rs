use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("wave speed {0} is outside (0, 1)")]
    InvalidSpeed(f64),
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("evaluation point ({x}, {t}) is outside the domain x >= 0, t >= 0")]
    OutOfDomain { x: f64, t: f64 },
    #[error("time {t} exceeds the available horizon {horizon}")]
    HorizonExceeded { t: f64, horizon: f64 },
    #[error("time step {dt} is larger than the smallest delay {min_delay}")]
    StepTooCoarse { dt: f64, min_delay: f64 },
    #[error("invalid horizon {0}: must be positive")]
    InvalidHorizon(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unstable step: Courant number {courant} exceeds 1")]
    UnstableStep { courant: f64 },
    #[error("time series do not overlap")]
    NoOverlap,
    #[error("no peaks found")]
    EmptyPeaks,
    #[error("invalid peaks: {0}")]
    InvalidPeaks(String),
    #[error("infeasible reconstruction: {0}")]
    Infeasible(String),
    #[error("invalid total length {0}: must be positive")]
    InvalidLength(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors caused by malformed or inconsistent user input, as opposed to
    /// numerical failures or infeasible data.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidScene(_)
                | Error::InvalidSpeed(_)
                | Error::InvalidPulse(_)
                | Error::OutOfDomain { .. }
                | Error::InvalidHorizon(_)
                | Error::Unsupported(_)
                | Error::EmptyPeaks
                | Error::InvalidPeaks(_)
                | Error::InvalidLength(_)
                | Error::InvalidInput(_)
                | Error::Parse(_)
        )
    }
}
