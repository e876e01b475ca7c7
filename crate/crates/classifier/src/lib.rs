//! Shape classification over voxelized parts: dataset synthesis with
//! orientation augmentation, training orchestration for the reference
//! network configurations, evaluation, and multi-orientation voting.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod train;
pub mod vote;

pub use dataset::{
    build_dataset, load_shard, one_hot, shard_checksum, synth_variant, DatasetPaths, DatasetSpec,
    LoadedShard, ShardSample,
};
pub use error::{ClassifyError, DatasetError, TrainError};
pub use eval::{evaluate, Confusion, EvalMode, EvalReport};
pub use train::{
    curve_from_text, curve_to_text, train, CurvePoint, TrainEvent, TrainOutcome, EVAL_EVERY,
};
pub use vote::{classify_votes, decide, ClassDecision, VoteColumn, VoteMatrix};
