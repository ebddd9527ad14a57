//! Dataset ingestion, verdict assembly, and report emission around the
//! rqfermat core.

pub mod dataset;
pub mod fetch;
pub mod reconstruct;
pub mod report;
pub mod sturm;

/// Errors surfaced by dataset handling and orchestration.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("core: {0}")]
    Core(#[from] rqfermat::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("hecke bound violated: {0}")]
    HeckeBound(String),
    #[error("transport: {0}")]
    Transport(String),
}

pub type Result<T> = std::result::Result<T, PipelineError>;
