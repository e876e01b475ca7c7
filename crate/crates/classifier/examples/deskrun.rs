//! Desk-scale training driver for tuning: builds (or reuses) a dataset and
//! trains one configuration, printing the accuracy curve.
//!
//! Usage: deskrun <master_seed> <lr> <steps> <batch> <width> \
//!            [variants_per_class] [invariants] [other_variants] [resolution]

use std::path::PathBuf;
use std::time::Instant;

use classifier::{build_dataset, load_shard, train, DatasetSpec, TrainEvent};
use cnn::{Activation, TrainConfig};

fn main() {
    let a: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| a.get(i).map(|s| s.parse::<f64>().expect("number")).unwrap_or(d);
    let master_seed = num(0, 1.0) as u64;
    let lr = num(1, 5e-4);
    let steps = num(2, 4000.0) as usize;
    let batch = num(3, 8.0) as usize;
    let width = num(4, 4.0) as usize;
    let spec = DatasetSpec {
        variants_per_class: num(5, 20.0) as usize,
        invariants: num(6, 10.0) as usize,
        other_variants: num(7, 80.0) as usize,
        resolution: num(8, 32.0) as usize,
        test_fraction: 0.2,
        master_seed,
    };

    let root = PathBuf::from(format!(
        "/tmp/deskdata-{}-{}-{}x{}x{}",
        master_seed, spec.resolution, spec.variants_per_class, spec.invariants, spec.other_variants
    ));
    let t0 = Instant::now();
    let paths = if root.join("train/manifest.tsv").exists() {
        classifier::DatasetPaths {
            root: root.clone(),
            train: root.join("train"),
            test: root.join("test"),
        }
    } else {
        build_dataset(&spec, &root).expect("dataset build")
    };
    let tr = load_shard(&paths.train).expect("train shard");
    let te = load_shard(&paths.test).expect("test shard");
    println!(
        "# data ready in {:.1}s: train {} / test {} at {}^3",
        t0.elapsed().as_secs_f64(),
        tr.len(),
        te.len(),
        tr.resolution
    );

    let cfg = TrainConfig {
        config_id: None,
        resolution: spec.resolution,
        conv_layers: 8,
        base_width: width,
        hidden: Activation::Relu,
        learning_rate: lr,
        batch_size: batch,
        steps,
        passes_per_batch: 3,
    };
    let t1 = Instant::now();
    let mut last_loss = 0.0;
    let out = train::<f32>(&tr, &te, &cfg, master_seed, |e| match e {
        TrainEvent::Batch { step, loss } => {
            last_loss = loss;
            if step % 250 == 0 {
                println!("# step {step} loss {loss:.4} ({:.1}s)", t1.elapsed().as_secs_f64());
            }
        }
        TrainEvent::Eval { step, accuracy } => println!("{step}\t{accuracy:.4}"),
    });
    match out {
        Ok(out) => println!(
            "# best {:.4} at step {} | wall {:.1}s",
            out.best.accuracy,
            out.best.step,
            t1.elapsed().as_secs_f64()
        ),
        Err(e) => println!("# failed: {e}"),
    }
}
