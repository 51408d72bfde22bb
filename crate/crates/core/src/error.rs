use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph has no root")]
    Unrooted,
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size cap exceeded: {needed} vertices needed, cap is {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
