use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("image must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },
    #[error("buffer length {len} does not match {width}x{height}x{channels}")]
    BufferLength {
        len: usize,
        width: usize,
        height: usize,
        channels: usize,
    },
    #[error("value {value} at index {index} is outside [0, 1] or not finite")]
    OutOfRange { index: usize, value: f32 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("non-positive depth {value} at index {index}")]
    NonPositiveDepth { index: usize, value: f32 },
    #[error("image {width}x{height} is smaller than the {window}x{window} window")]
    ImageTooSmall {
        width: usize,
        height: usize,
        window: usize,
    },
    #[error("levels must be strictly increasing in base extinction (level {index})")]
    NonMonotoneLevels { index: usize },
    #[error("solver produced a non-finite value at outer iteration {iteration} (penalty {penalty})")]
    NonFinite { iteration: usize, penalty: f64 },
    #[error("cannot split {groups} groups into non-empty train/val/test partitions")]
    TooFewGroups { groups: usize },
}

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}
