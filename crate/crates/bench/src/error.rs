use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    /// Bad configuration or command-line values.
    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Network {
        path: PathBuf,
        #[source]
        source: reliacut::Error,
    },

    #[error("{context}: {source}")]
    Estimation {
        context: String,
        #[source]
        source: reliacut::Error,
    },

    #[error("statistics: {0}")]
    Stats(String),

    #[error("report: {0}")]
    Report(String),
}

impl BenchError {
    /// 1 for usage and configuration problems, 2 for bad input data.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 1,
            BenchError::Estimation {
                source: reliacut::Error::BudgetTooSmall { .. } | reliacut::Error::Domain(_),
                ..
            } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
