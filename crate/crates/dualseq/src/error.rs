use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: {source}")]
    Invalid {
        line: usize,
        col: usize,
        source: dualseq_core::Error,
    },
    #[error("{0}")]
    Core(#[from] dualseq_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 when a stabilization bound was hit, 1 for every other failure.
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Invalid { source, .. } => Some(source),
            CliError::Core(e) => Some(e),
            _ => None,
        };
        match core {
            Some(dualseq_core::Error::StabilizationDepthExceeded { .. }) => 2,
            _ => 1,
        }
    }
}
