use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A sliding window was queried before holding enough samples.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Fewer than two maxima have been seen.
    #[error("not ready: {0}")]
    NotReady(&'static str),

    #[error("recorded reference exhausted at t = {t} s (trace covers [{start}, {end}] s)")]
    ExhaustedReference { t: f64, start: f64, end: f64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("inadmissible gains K_P = {kp}, K_D = {kd}: s^2 + K_D s + K_P is not Hurwitz")]
    InadmissibleGains { kp: f64, kd: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("numerical divergence at t = {t} s: {detail}")]
    Divergence { t: f64, detail: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record {}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for errors caused by a bad scenario description rather than by
    /// the run itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config { .. }
                | Error::InadmissibleGains { .. }
                | Error::InvalidParameter { .. }
                | Error::InvalidWindow(_)
        )
    }
}
