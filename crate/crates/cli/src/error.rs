use murmur_core::{ExperimentError, IngestError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("{0}")]
    Resource(String),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    /// 0 success, 2 validation, 3 resource, 4 unresolved ξ, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Schema { .. } => 2,
            CliError::Resource(_) => 3,
            CliError::Experiment(e) => match e {
                ExperimentError::UnresolvedXi { .. } => 4,
                ExperimentError::Resource(_) => 3,
                ExperimentError::Ingest(i) => ingest_code(i),
                ExperimentError::Arith(murmur_core::ArithError::Resource { .. }) => 3,
                ExperimentError::Arith(murmur_core::ArithError::UnresolvedXi { .. }) => 4,
                _ => 2,
            },
            CliError::Ingest(i) => ingest_code(i),
            CliError::Io { .. } => 1,
        }
    }
}

fn ingest_code(e: &IngestError) -> i32 {
    match e {
        IngestError::Io(_) => 1,
        _ => 2,
    }
}
