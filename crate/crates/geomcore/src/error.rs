use crate::class::StandardClass;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("no face with id {0}")]
    NoSuchFace(u32),
    #[error("distance query needs two distinct faces (got face {0} twice)")]
    SameFace(u32),
    #[error("unknown size key {size:?} for {class:?}")]
    UnknownSize { class: StandardClass, size: String },
    #[error("{class:?} cannot be generated from a size key (use the random generator)")]
    NotGenerable { class: StandardClass },
    #[error("size key {size:?}: {reason}")]
    BadSizeKey { size: String, reason: String },
    #[error("dimension table: {0}")]
    Table(String),
    #[error("part document: {0}")]
    Document(String),
}
