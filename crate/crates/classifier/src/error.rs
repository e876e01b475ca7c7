use crate::train::CurvePoint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("bad dataset spec: {0}")]
    BadSpec(String),
    #[error("part synthesis: {0}")]
    Geom(#[from] geomcore::GeomError),
    #[error("tessellation: {0}")]
    Mesh(#[from] meshkit::MeshError),
    #[error("voxelization: {0}")]
    Voxel(#[from] voxelizer::VoxelError),
    #[error("voxel file: {0}")]
    Dense(#[from] voxelizer::DenseError),
    #[error("shard manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("{0}")]
    Cnn(#[from] cnn::CnnError),
    #[error(
        "training diverged at step {step} (loss {loss}) with learning rate {learning_rate}; \
         try a lower learning rate"
    )]
    Diverged {
        step: usize,
        loss: f64,
        learning_rate: f64,
        /// Accuracy curve up to the point of divergence.
        curve: Vec<CurvePoint>,
    },
    #[error(
        "shard resolution {shard}^3 does not match the configuration's {config}^3"
    )]
    ResolutionMismatch { shard: usize, config: usize },
    #[error("cannot train on an empty shard")]
    EmptyShard,
    #[error("accuracy curve line {line}: {reason}")]
    Curve { line: usize, reason: String },
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("voxelization: {0}")]
    Voxel(#[from] voxelizer::VoxelError),
    #[error("{0}")]
    Cnn(#[from] cnn::CnnError),
}
