//! Training-loop mechanics on tiny in-memory shards: schedules, determinism,
//! divergence reporting. Accuracy targets live in the workspace-level
//! acceptance suite, not here.

use classifier::{train, DatasetSpec, LoadedShard, ShardSample, TrainError, TrainEvent};
use cnn::{Activation, TrainConfig};
use geomcore::rng::seeded;
use rand_core::RngCore;

fn tiny_config(steps: usize, learning_rate: f64) -> TrainConfig {
    TrainConfig {
        config_id: None,
        resolution: 8,
        conv_layers: 2,
        base_width: 2,
        hidden: Activation::Relu,
        learning_rate,
        batch_size: 4,
        steps,
        passes_per_batch: 3,
    }
}

/// A shard of seeded random occupancy blobs; class c gets a c-dependent
/// fill bias so the task is not degenerate.
fn synthetic_shard(resolution: usize, per_class: usize, seed: u64) -> LoadedShard {
    let mut rng = seeded(seed);
    let mut samples = Vec::new();
    let mut voxels = Vec::new();
    for class in 1..=10u8 {
        for v in 0..per_class {
            let mut buf = vec![0u8; resolution.pow(3)];
            for b in buf.iter_mut() {
                *b = u8::from(rng.next_u64() % 100 < 20 + 6 * class as u64);
            }
            samples.push(ShardSample {
                file: String::new(),
                class,
                variant: (class as u32) * 1000 + v as u32,
                invariant: 0,
                part_seed: seed,
                orient_seed: seed,
            });
            voxels.push(buf);
        }
    }
    LoadedShard::from_parts(resolution, samples, voxels)
}

#[test]
fn zero_step_budget_returns_the_initial_model_and_one_curve_point() {
    let tr = synthetic_shard(8, 2, 1);
    let te = synthetic_shard(8, 1, 2);
    let out = train::<f64>(&tr, &te, &tiny_config(0, 1e-3), 9, |_| {}).unwrap();
    assert_eq!(out.curve.len(), 1);
    assert_eq!(out.curve[0].step, 0);
    assert_eq!(out.best.step, 0);
    assert_eq!(out.adam.moments().0.len(), out.model.param_count());
}

#[test]
fn identical_seeds_give_identical_curves_and_parameters() {
    let tr = synthetic_shard(8, 3, 10);
    let te = synthetic_shard(8, 1, 11);
    let cfg = tiny_config(30, 1e-3);
    let a = train::<f64>(&tr, &te, &cfg, 77, |_| {}).unwrap();
    let b = train::<f64>(&tr, &te, &cfg, 77, |_| {}).unwrap();
    assert_eq!(a.curve, b.curve);
    assert_eq!(a.model.blocks(), b.model.blocks());

    let c = train::<f64>(&tr, &te, &cfg, 78, |_| {}).unwrap();
    assert_ne!(a.model.blocks(), c.model.blocks(), "seed must matter");
}

#[test]
fn evaluation_schedule_hits_zero_every_250_and_the_end() {
    let tr = synthetic_shard(8, 2, 20);
    let te = synthetic_shard(8, 1, 21);
    let mut evals = Vec::new();
    let out = train::<f32>(&tr, &te, &tiny_config(260, 1e-3), 5, |e| {
        if let TrainEvent::Eval { step, .. } = e {
            evals.push(step);
        }
    })
    .unwrap();
    assert_eq!(evals, vec![0, 250, 260]);
    assert_eq!(out.curve.len(), 3);
}

#[test]
fn absurd_learning_rate_reports_divergence_with_the_partial_curve() {
    let tr = synthetic_shard(8, 2, 30);
    let te = synthetic_shard(8, 1, 31);
    let err = train::<f32>(&tr, &te, &tiny_config(200, 1e25), 3, |_| {}).unwrap_err();
    match err {
        TrainError::Diverged { step, learning_rate, curve, .. } => {
            assert!(step >= 1);
            assert_eq!(learning_rate, 1e25);
            assert_eq!(curve[0].step, 0, "the step-0 evaluation is preserved");
        }
        other => panic!("expected divergence, got {other:?}"),
    }
    let msg = train::<f32>(&tr, &te, &tiny_config(200, 1e25), 3, |_| {})
        .unwrap_err()
        .to_string();
    assert!(msg.contains("lower learning rate"), "{msg}");
}

#[test]
fn shard_resolution_must_match_the_config() {
    let tr = synthetic_shard(16, 1, 1);
    let te = synthetic_shard(16, 1, 2);
    let err = train::<f64>(&tr, &te, &tiny_config(1, 1e-3), 1, |_| {}).unwrap_err();
    assert!(matches!(err, TrainError::ResolutionMismatch { shard: 16, config: 8 }));
}

#[test]
fn desk_spec_invariant_counts_flow_into_the_plan() {
    // Companion arithmetic check kept next to the training tests: the desk
    // dataset the acceptance run trains on has 2600 samples, 800 of them
    // the catch-all class.
    let spec = DatasetSpec::desk(1);
    assert_eq!(spec.total_samples(), 2600);
    assert_eq!(spec.other_variants * spec.invariants, 800);
}
