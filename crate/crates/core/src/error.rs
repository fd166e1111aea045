use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no standing wave: {0}")]
    NotFound(String),

    /// The profile sits on the nonexistence curve; `sign` is the sign of the blow-up.
    #[error("stability functional diverges ({}∞) on the nonexistence curve", if *.sign > 0.0 { "+" } else { "-" })]
    Diverging { sign: f64 },

    #[error("gamma = {gamma} is not on the nonexistence curve")]
    NotOnCurve { gamma: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("finite difference of the mass is inconsistent: {0}")]
    Inconsistent(String),

    #[error("failed to write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {}: {reason}", path.display())]
    Parse { path: PathBuf, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
