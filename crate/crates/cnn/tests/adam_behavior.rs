//! Long-horizon properties of the optimizer update.

use cnn::{Activation, AdamState, Gradients, LayerSpec, Network, NetworkSpec};

fn scalar_net() -> Network<f64> {
    let spec = NetworkSpec {
        resolution: 1,
        layers: vec![LayerSpec::Fc {
            inputs: 1,
            outputs: 1,
            act: Activation::Linear,
        }],
    };
    let mut net = Network::init(spec, 0).unwrap();
    net.blocks_mut()[0].w[0] = 5.0;
    net.blocks_mut()[0].b[0] = 0.0;
    net
}

#[test]
fn constant_gradient_drives_per_step_magnitude_to_alpha() {
    // With g constant, m_hat -> g and v_hat -> g^2, so the step magnitude
    // approaches alpha * g / (|g| + eps) ~= alpha, whatever the gradient's
    // scale. Checked numerically over 10^4 steps for two very different
    // gradient magnitudes.
    for g in [0.37, 220.0] {
        let mut net = scalar_net();
        let alpha = 0.001;
        let mut adam = AdamState::new(net.param_count(), alpha);
        let mut grads = Gradients::zeros_of(&net);
        grads.blocks[0].w[0] = g;
        let mut prev = net.blocks()[0].w[0];
        let mut last_step = 0.0;
        for _ in 0..10_000 {
            adam.step(&mut net, &grads).unwrap();
            let cur = net.blocks()[0].w[0];
            last_step = prev - cur;
            prev = cur;
        }
        assert!(
            (last_step / alpha - 1.0).abs() < 1e-3,
            "g = {g}: per-step magnitude {last_step} should be ~{alpha}"
        );
        // The parameter marched steadily downhill the whole run.
        assert!(net.blocks()[0].w[0] < 5.0 - 0.9 * alpha * 10_000.0 * 0.9);
    }
}

#[test]
fn bias_correction_makes_early_steps_full_size() {
    // Without bias correction the first step would be tiny (m starts at 0);
    // with it, every one of the first ten steps is already ~alpha.
    let mut net = scalar_net();
    let alpha = 0.01;
    let mut adam = AdamState::new(net.param_count(), alpha);
    let mut grads = Gradients::zeros_of(&net);
    grads.blocks[0].w[0] = 3.0;
    let mut prev = net.blocks()[0].w[0];
    for step in 1..=10 {
        adam.step(&mut net, &grads).unwrap();
        let cur = net.blocks()[0].w[0];
        let moved = prev - cur;
        assert!(
            (moved / alpha - 1.0).abs() < 1e-6,
            "step {step} moved {moved}, wanted ~{alpha}"
        );
        prev = cur;
    }
}

#[test]
fn optimizer_is_stateful_across_sign_flips() {
    // Momentum: after many +g steps, a single -g step does not immediately
    // reverse the parameter's direction of travel.
    let mut net = scalar_net();
    let mut adam = AdamState::new(net.param_count(), 0.001);
    let mut grads = Gradients::zeros_of(&net);
    grads.blocks[0].w[0] = 1.0;
    for _ in 0..100 {
        adam.step(&mut net, &grads).unwrap();
    }
    let before = net.blocks()[0].w[0];
    grads.blocks[0].w[0] = -1.0;
    adam.step(&mut net, &grads).unwrap();
    let after = net.blocks()[0].w[0];
    assert!(
        after < before,
        "one opposing gradient should not overcome accumulated momentum"
    );
}
