use thiserror::Error;

use wnet::distributions::DistError;
use wnet::graph::GraphError;
use wnet::ingest::IngestError;
use wnet::stats::StatsError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{context}: {source}")]
    Ingest {
        context: String,
        #[source]
        source: IngestError,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("data error: {0}")]
    Data(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 validation, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Ingest { .. } | Self::Graph(_) | Self::Data(_) => 2,
            Self::Internal(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Internal(e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        Self::Internal(e.to_string())
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        match e {
            DistError::InvalidParameter(msg) => Self::Validation(msg),
            other => Self::Data(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Internal(e.to_string())
    }
}
