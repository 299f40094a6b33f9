use thiserror::Error;

use crate::matcore::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    /// An iterative method stopped without meeting its tolerance. `best`
    /// carries the best value found when one exists.
    #[error("numerical failure: {msg}")]
    Numerical { msg: String, best: Option<f64> },

    #[error("resolvent undefined: λ = {lambda} lies in the spectrum (distance {distance:e})")]
    Singular { lambda: C64, distance: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("support sweep failed at angle index {index}: {source}")]
    Sweep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// The semigroup envelope and the pairing bound disagree. One of the two
    /// estimators is wrong.
    #[error("stability check disagreement: envelope_ok={envelope_ok}, pairing_ok={pairing_ok} (μ = {lognorm}, worst t = {worst_t})")]
    Disagreement {
        envelope_ok: bool,
        pairing_ok: bool,
        lognorm: f64,
        worst_t: f64,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>, best: Option<f64>) -> Self {
        Error::Numerical { msg: msg.into(), best }
    }

    /// Process exit code used by the command-line frontend and the C ABI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Json { .. } | Error::Io(_) => 2,
            Error::Sweep { source, .. } => source.exit_code(),
            Error::Numerical { .. } | Error::Singular { .. } | Error::Geometry(_) | Error::Disagreement { .. } => 4,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}
