use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("graph is disconnected: vertex {vertex} is not reachable from vertex 0 ({components} components)")]
    Disconnected { vertex: usize, components: usize },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("ratio undefined: equilibrium value is zero")]
    UndefinedRatio,

    #[error("enumeration needs {required} labelings, cap is {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input rather than a bug.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Construction(_) | Error::Invariant(_))
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}
