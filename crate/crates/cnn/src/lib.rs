//! From-scratch dense 3D convolutional networks.
//!
//! The stack is deliberately small: 3^3 convolutions (stride 1, padding 1),
//! 2^3 max pooling, fully connected layers, ReLU / leaky ReLU, a quartic
//! cost against one-hot targets, and bias-corrected ADAM. Everything is
//! generic over `f32` (training speed) and `f64` (verification); all
//! computation orders are fixed, so double-precision runs are
//! bit-reproducible and checkpoints round-trip exactly.
//!
//! The expected input is a voxel occupancy grid as a 1-channel `Tensor4`;
//! raw 10-class scores come out (no softmax — the quartic cost compares
//! scores directly against the one-hot encoding).

pub mod adam;
pub mod checkpoint;
pub mod error;
pub mod gradcheck;
pub mod loss;
mod ops;
pub mod spec;
pub mod tensor;

mod net;

pub use adam::AdamState;
pub use error::{CheckpointError, CnnError};
pub use gradcheck::{check_against, gradient_check, GradCheckReport, ParamRef};
pub use loss::{loss_quartic, loss_quartic_grad};
pub use net::{Cache, Gradients, Network, ParamBlock};
pub use spec::{Activation, LayerSpec, NetworkSpec, Stage, TrainConfig, LEAKY_SLOPE};
pub use tensor::{Scalar, Tensor4};

use crate::error::CnnError as E;

/// Mean-gradient optimizer step over one batch: forward + backward per
/// sample (in order), gradients averaged, one ADAM update. Returns the mean
/// loss. Training repeats this `passes_per_batch` times per batch.
pub fn batch_step<F: Scalar>(
    net: &mut Network<F>,
    adam: &mut AdamState,
    batch: &[(&Tensor4<F>, &[F])],
) -> Result<f64, E> {
    assert!(!batch.is_empty(), "batch must hold at least one sample");
    let mut grads = Gradients::zeros_of(net);
    let mut total = 0.0f64;
    for (x, t) in batch {
        let cache = net.forward_cached(x)?;
        total += net.accumulate_backward(&cache, t, &mut grads)?.f64();
    }
    grads.scale(F::of(1.0 / batch.len() as f64));
    adam.step(net, &grads)?;
    Ok(total / batch.len() as f64)
}
