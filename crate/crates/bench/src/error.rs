use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Solver(#[from] cwyinvit::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl BenchError {
    /// Whether the error stems from bad user input rather than the run.
    pub fn is_usage(&self) -> bool {
        matches!(self, BenchError::Config(_) | BenchError::Solver(cwyinvit::Error::InvalidArgument(_)))
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
