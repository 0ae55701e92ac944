use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    InvalidField(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid sequence: {0}")]
    InvalidSeq(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("complex fails validation at degree {degree}: {reason}")]
    ValidationFailed { degree: i64, reason: String },
    #[error("sequence is not exact at degree {degree}: {reason}")]
    NotExact { degree: i64, reason: String },
    #[error("object is not h-projective: {0}")]
    NotHProjective(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("no stabilization within depth {depth}")]
    StabilizationDepthExceeded { depth: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
