use std::path::PathBuf;

use magic_meter_core::Error as CoreError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Syntax(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Semantic(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for malformed input, 3 for requests the library
    /// refuses, 4 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Syntax(_) | Error::Core(CoreError::Encoding(_)) => 2,
            Error::Core(_) | Error::Semantic(_) => 3,
            Error::Io { .. } | Error::Csv(_) => 4,
            Error::Json(e) if e.is_io() => 4,
            Error::Json(_) => 2,
        }
    }
}
