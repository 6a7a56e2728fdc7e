use crate::memory::ItemId;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum MemError {
    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("content must not be empty")]
    EmptyContent,
    #[error("cosine undefined for a zero vector")]
    ZeroVector,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown item {0}")]
    UnknownItem(ItemId),
    #[error("unknown flag `{0}`")]
    UnknownFlag(String),
    #[error("unknown event kind `{0}`")]
    UnknownEvent(String),
    #[error("item {0} is outside its lability window")]
    NotLabile(ItemId),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
}

pub type Result<T> = std::result::Result<T, MemError>;

pub(crate) fn ensure(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(MemError::InvalidArgument(msg.into()))
    }
}
