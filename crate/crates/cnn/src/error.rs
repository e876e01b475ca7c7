use thiserror::Error;

#[derive(Debug, Error)]
pub enum CnnError {
    /// A tensor fed into or produced by `layer` does not have the shape the
    /// network spec demands. Layer 0 is the network input itself.
    #[error("layer {layer}: {detail}")]
    Shape { layer: usize, detail: String },

    /// NaN or infinity crossed a layer boundary.
    #[error("layer {layer}: non-finite values at layer boundary")]
    NonFinite { layer: usize },

    /// The optimizer was handed a NaN or infinite gradient.
    #[error("non-finite gradient for parameter {index} of layer {layer}")]
    NonFiniteGradient { layer: usize, index: usize },
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,

    #[error("unsupported checkpoint version {0}")]
    Version(u32),

    #[error("checkpoint file is truncated")]
    Truncated,

    #[error("malformed checkpoint: {0}")]
    Malformed(&'static str),

    /// The checkpointed network wants a different input resolution than the
    /// caller is about to feed it.
    #[error("checkpoint expects {expected}^3 inputs but {requested}^3 was requested")]
    ResolutionMismatch { expected: usize, requested: usize },

    #[error("checkpoint spec is inconsistent: {0}")]
    Spec(#[from] CnnError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
