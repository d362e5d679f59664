use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("oracle refused: {0}")]
    OracleRefused(String),

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("infeasible plan: {0}")]
    InfeasiblePlan(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("incomplete run in {}: no #SUMMARY line", .0.display())]
    IncompleteRun(PathBuf),

    #[error("record file {} failed integrity check: {reason}", .path.display())]
    Tamper { path: PathBuf, reason: String },

    #[error("seed range {start}..={end} overlaps a final run recorded in the seed ledger")]
    SeedReuse { start: u64, end: u64 },

    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
