//! Measures wall-clock cost of one optimizer step (forward + backward +
//! Adam) per sample for the reference network shapes at several widths.
//! Run with `cargo run --release -p cnn --example stepbench`.

use std::time::Instant;

use cnn::{batch_step, Activation, AdamState, Network, NetworkSpec, Tensor4};

fn time_case(resolution: usize, convs: usize, width: usize, reps: usize) {
    let act = Activation::leaky();
    let spec = NetworkSpec::conv_stack(resolution, convs, width, act);
    let mut net = Network::<f32>::init(spec, 42).expect("valid stack");
    let mut adam = AdamState::new(net.param_count(), 1e-3);
    let mut x = Tensor4::<f32>::zeros([1, resolution, resolution, resolution]);
    for (i, v) in x.data_mut().iter_mut().enumerate() {
        *v = ((i * 2654435761) % 2) as f32;
    }
    let target = {
        let mut t = vec![0.0f32; 10];
        t[3] = 1.0;
        t
    };

    let mut per_sample = Vec::new();
    for _ in 0..reps {
        let t0 = Instant::now();
        batch_step(&mut net, &mut adam, &[(&x, &target[..])]).expect("step");
        per_sample.push(t0.elapsed().as_secs_f64());
    }
    let best = per_sample.iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "r={resolution:>3} convs={convs} width={width:>2} params={:>9} step/sample = {:>8.3} s  (all: {:?})",
        net.param_count(),
        best,
        per_sample.iter().map(|t| (t * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
    );
}

fn main() {
    println!("one sample per step; batch-B training costs ~B x this per step");
    for width in [2usize, 4, 8] {
        time_case(32, 8, width, 3);
    }
    time_case(32, 8, 16, 1);
    time_case(64, 8, 2, 2);
    time_case(64, 8, 4, 1);
    time_case(128, 8, 1, 2);
    time_case(128, 8, 2, 1);
}
