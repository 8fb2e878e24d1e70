use std::path::PathBuf;

use crate::manifest::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Image {
        path: PathBuf,
        source: image::ImageError,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
    #[error(transparent)]
    Kernel(#[from] gauge_dehaze_core::Error),
    #[error("manifest has {} violation(s); first: {}", .0.len(), .0[0])]
    InvalidManifest(Vec<Violation>),
    #[error("test split is empty")]
    EmptyTestSplit,
    #[error("no file in {} matches a test-split image", dir.display())]
    NoExternalMatches { dir: PathBuf },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for validation problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::InvalidManifest(_) | Self::Usage(_) => 2,
            _ => 1,
        }
    }
}
