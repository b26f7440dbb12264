use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid decoration {label}: alphabet is 1..={alphabet}")]
    Decoration { label: u32, alphabet: u32 },
    #[error("multi-index {0} is not populated")]
    NotPopulated(String),
    #[error("shorthand {text:?} has {count} valid segmentations")]
    Ambiguous { text: String, count: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
