use std::path::PathBuf;

/// Errors produced anywhere in the identification pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("signal length {0} is invalid: must be even and at least 2")]
    InvalidLength(usize),

    #[error("sample rate {0} Hz is invalid: must be positive and finite")]
    InvalidSampleRate(f64),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("spectrum is not hermitian (bin {bin}, deviation {deviation:e}); its inverse would not be real")]
    NonHermitian { bin: usize, deviation: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid band: {0}")]
    InvalidBand(String),

    #[error("invalid duration: {0}")]
    InvalidDuration(String),

    #[error("invalid frequency range: {0}")]
    InvalidRange(String),

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("invalid phase curve: {0}")]
    InvalidPhase(String),

    #[error("signal has zero energy")]
    ZeroSignal,

    #[error("capture set is empty")]
    EmptySet,

    #[error("division by zero-magnitude reference at {} bin(s)", bins.len())]
    DivisionBlowup { bins: Vec<usize> },

    #[error("guard bins consume the whole band")]
    EmptyBand,

    #[error("sample {value} at index {index} is outside [-1, 1] for a PCM container")]
    Clipping { index: usize, value: f64 },

    #[error("{path}: parse error: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: unsupported format: {message}")]
    UnsupportedFormat { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
