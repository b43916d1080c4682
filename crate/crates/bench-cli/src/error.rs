use thiserror::Error;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Input {
        path: String,
        source: fairorient::Error,
    },

    #[error(transparent)]
    Engine(#[from] fairorient::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },

    #[error("{0}")]
    Table(String),
}

impl BenchError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        BenchError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn csv(path: impl Into<String>, source: csv::Error) -> Self {
        BenchError::Csv {
            path: path.into(),
            source,
        }
    }
}
