use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("not pruned")]
    NotPruned,
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("vertex ({level}, {index}) is not a leaf")]
    NotALeaf { level: usize, index: usize },
    #[error("level {level} out of range for depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("depth mismatch: {0} vs {1}")]
    DepthMismatch(usize, usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("size cap exceeded: {size} > {cap}")]
    SizeCap { size: u128, cap: u128 },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid ordinal map: {0}")]
    InvalidMap(String),
    #[error("color mismatch: {0}")]
    ColorMismatch(String),
    #[error("invalid label system: {0}")]
    InvalidSystem(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
