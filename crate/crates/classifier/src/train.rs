//! Training loop: seeded batches, periodic test evaluation, best-checkpoint
//! tracking, and divergence reporting.

use cnn::{batch_step, AdamState, CnnError, Network, Scalar, Tensor4, TrainConfig};
use geomcore::rng::{below_u64, seeded};

use crate::dataset::{sub_seed, LoadedShard};
use crate::error::TrainError;
use crate::eval::{evaluate, EvalMode};

/// Test accuracy is measured every this many steps (and always at step 0
/// and the final step).
pub const EVAL_EVERY: usize = 250;

const DOMAIN_INIT: u64 = 10;
const DOMAIN_BATCH: u64 = 11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub step: usize,
    pub accuracy: f64,
}

/// Progress callbacks during training. `Batch` fires every optimizer step
/// with the mean batch loss; `Eval` fires on the evaluation schedule.
#[derive(Debug, Clone, Copy)]
pub enum TrainEvent {
    Batch { step: usize, loss: f64 },
    Eval { step: usize, accuracy: f64 },
}

#[derive(Debug, Clone)]
pub struct TrainOutcome<F> {
    /// Parameters at the best test evaluation seen.
    pub model: Network<F>,
    /// Optimizer state at that same evaluation (so the checkpoint can
    /// resume exactly where the best model stood).
    pub adam: AdamState,
    /// (step, per-invariant test accuracy) at every evaluation.
    pub curve: Vec<CurvePoint>,
    pub best: CurvePoint,
}

/// Train a network per `cfg` on `train_shard`, evaluating per-invariant
/// accuracy on `test_shard` every [`EVAL_EVERY`] steps. Batches are drawn
/// uniformly with replacement from the training shard and each batch is
/// stepped `cfg.passes_per_batch` consecutive times. Test data never feeds
/// a gradient. Deterministic in (shards, cfg, seed).
pub fn train<F: Scalar>(
    train_shard: &LoadedShard,
    test_shard: &LoadedShard,
    cfg: &TrainConfig,
    seed: u64,
    mut log: impl FnMut(TrainEvent),
) -> Result<TrainOutcome<F>, TrainError> {
    if train_shard.is_empty() || test_shard.is_empty() {
        return Err(TrainError::EmptyShard);
    }
    for shard in [train_shard, test_shard] {
        if shard.resolution != cfg.resolution {
            return Err(TrainError::ResolutionMismatch {
                shard: shard.resolution,
                config: cfg.resolution,
            });
        }
    }

    let spec = cfg.network();
    let mut net: Network<F> = Network::init(spec, sub_seed(seed, DOMAIN_INIT, 0))?;
    let mut adam = AdamState::new(net.param_count(), cfg.learning_rate);
    let mut rng = seeded(sub_seed(seed, DOMAIN_BATCH, 0));

    let eval_acc = |net: &Network<F>| -> Result<f64, CnnError> {
        Ok(evaluate(net, test_shard, EvalMode::PerInvariant)?.accuracy)
    };

    let acc0 = eval_acc(&net)?;
    let mut curve = vec![CurvePoint { step: 0, accuracy: acc0 }];
    let mut best = curve[0];
    let mut best_model = net.clone();
    let mut best_adam = adam.clone();
    log(TrainEvent::Eval { step: 0, accuracy: acc0 });

    let mut batch: Vec<(Tensor4<F>, Vec<F>)> = Vec::new();
    for step in 1..=cfg.steps {
        if (step - 1) % cfg.passes_per_batch.max(1) == 0 || batch.is_empty() {
            batch.clear();
            for _ in 0..cfg.batch_size {
                let i = below_u64(&mut rng, train_shard.len() as u64) as usize;
                batch.push((train_shard.tensor(i), train_shard.target(i)));
            }
        }
        let refs: Vec<(&Tensor4<F>, &[F])> =
            batch.iter().map(|(t, y)| (t, y.as_slice())).collect();
        let loss = match batch_step(&mut net, &mut adam, &refs) {
            Ok(l) => l,
            Err(CnnError::NonFiniteGradient { .. }) | Err(CnnError::NonFinite { .. }) => {
                return Err(TrainError::Diverged {
                    step,
                    loss: f64::NAN,
                    learning_rate: cfg.learning_rate,
                    curve,
                })
            }
            Err(e) => return Err(e.into()),
        };
        if !loss.is_finite() {
            return Err(TrainError::Diverged {
                step,
                loss,
                learning_rate: cfg.learning_rate,
                curve,
            });
        }
        log(TrainEvent::Batch { step, loss });

        if step % EVAL_EVERY == 0 || step == cfg.steps {
            let accuracy = eval_acc(&net)?;
            curve.push(CurvePoint { step, accuracy });
            log(TrainEvent::Eval { step, accuracy });
            if accuracy > best.accuracy {
                best = CurvePoint { step, accuracy };
                best_model = net.clone();
                best_adam = adam.clone();
            }
        }
    }

    Ok(TrainOutcome { model: best_model, adam: best_adam, curve, best })
}

/// Plain-text accuracy curve: one `step<TAB>accuracy` line per evaluation.
pub fn curve_to_text(curve: &[CurvePoint]) -> String {
    let mut s = String::from("# accuracy-curve v1\n");
    for p in curve {
        s.push_str(&format!("{}\t{}\n", p.step, p.accuracy));
    }
    s
}

pub fn curve_from_text(text: &str) -> Result<Vec<CurvePoint>, TrainError> {
    let bad = |line: usize, reason: String| TrainError::Curve { line, reason };
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        let mut it = line.split('\t');
        let step = it
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| bad(idx + 1, "bad step".into()))?;
        let accuracy = it
            .next()
            .and_then(|t| t.parse::<f64>().ok())
            .ok_or_else(|| bad(idx + 1, "bad accuracy".into()))?;
        if it.next().is_some() {
            return Err(bad(idx + 1, "trailing columns".into()));
        }
        out.push(CurvePoint { step, accuracy });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_text_round_trips_including_full_precision() {
        let curve = vec![
            CurvePoint { step: 0, accuracy: 0.1 },
            CurvePoint { step: 250, accuracy: 0.8333333333333334 },
        ];
        let text = curve_to_text(&curve);
        assert_eq!(curve_from_text(&text).unwrap(), curve);
    }

    #[test]
    fn curve_parser_reports_the_offending_line() {
        let err = curve_from_text("# accuracy-curve v1\n10\tnot-a-number\n").unwrap_err();
        match err {
            TrainError::Curve { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
