//! Checkpoint round-trips and failure modes.

use cnn::checkpoint::{load, load_expecting, save};
use cnn::{
    batch_step, Activation, AdamState, CheckpointError, LayerSpec, Network, NetworkSpec, Tensor4,
};
use geomcore::rng::{range_f64, seeded};

fn small_net(seed: u64) -> Network<f64> {
    let spec = NetworkSpec {
        resolution: 4,
        layers: vec![
            LayerSpec::Conv {
                in_ch: 1,
                out_ch: 2,
                act: Activation::leaky(),
            },
            LayerSpec::Pool,
            LayerSpec::Fc {
                inputs: 16,
                outputs: 10,
                act: Activation::Linear,
            },
        ],
    };
    Network::init(spec, seed).unwrap()
}

fn probe() -> Tensor4<f64> {
    let mut rng = seeded(31);
    let mut x = Tensor4::zeros([1, 4, 4, 4]);
    for v in x.data_mut() {
        *v = range_f64(&mut rng, 0.0, 1.0).round();
    }
    x
}

/// Train a few steps so the optimizer moments are non-trivial.
fn trained() -> (Network<f64>, AdamState) {
    let mut net = small_net(17);
    let mut adam = AdamState::new(net.param_count(), 1e-3);
    let x = probe();
    let mut t = vec![0.0; 10];
    t[2] = 1.0;
    for _ in 0..5 {
        batch_step(&mut net, &mut adam, &[(&x, t.as_slice())]).unwrap();
    }
    (net, adam)
}

#[test]
fn double_precision_round_trip_is_bit_identical() {
    let (net, adam) = trained();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.ckpt");
    save(&path, &net, Some(&adam)).unwrap();
    let (loaded, loaded_adam) = load::<f64>(&path).unwrap();
    let loaded_adam = loaded_adam.expect("optimizer state was saved");

    assert_eq!(loaded.spec(), net.spec());
    for (a, b) in net.blocks().iter().zip(loaded.blocks()) {
        for (x, y) in a.w.iter().zip(&b.w) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        for (x, y) in a.b.iter().zip(&b.b) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    assert_eq!(loaded_adam, adam);

    // Identical forward outputs on a fixed probe input, bit for bit.
    let x = probe();
    let a = net.forward(&x).unwrap();
    let b = loaded.forward(&x).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.to_bits(), y.to_bits());
    }

    // Saving the loaded net again reproduces the same bytes.
    let path2 = dir.path().join("net2.ckpt");
    save(&path2, &loaded, Some(&loaded_adam)).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
}

#[test]
fn f32_parameters_survive_the_f64_encoding() {
    let spec = NetworkSpec {
        resolution: 2,
        layers: vec![LayerSpec::Fc {
            inputs: 8,
            outputs: 3,
            act: Activation::Relu,
        }],
    };
    let net = Network::<f32>::init(spec, 5).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net32.ckpt");
    save(&path, &net, None).unwrap();
    let (loaded, none) = load::<f32>(&path).unwrap();
    assert!(none.is_none());
    for (a, b) in net.blocks().iter().zip(loaded.blocks()) {
        for (x, y) in a.w.iter().zip(&b.w) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn truncation_anywhere_is_reported() {
    let (net, adam) = trained();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.ckpt");
    save(&path, &net, Some(&adam)).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    for cut in [4, 17, bytes.len() / 2, bytes.len() - 1] {
        let short = dir.path().join(format!("cut{cut}.ckpt"));
        std::fs::write(&short, &bytes[..cut]).unwrap();
        match load::<f64>(&short) {
            Err(CheckpointError::Truncated) => {}
            other => panic!("cut at {cut}: expected Truncated, got {other:?}"),
        }
    }
}

#[test]
fn resolution_mismatch_names_the_expected_resolution() {
    // A 32-input net (pooled down hard so it stays tiny) loaded for 64^3
    // inference must refuse and say what it wanted.
    let spec = NetworkSpec {
        resolution: 32,
        layers: vec![
            LayerSpec::Pool,
            LayerSpec::Pool,
            LayerSpec::Pool,
            LayerSpec::Fc {
                inputs: 64,
                outputs: 10,
                act: Activation::Linear,
            },
        ],
    };
    let net = Network::<f64>::init(spec, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net32.ckpt");
    save(&path, &net, None).unwrap();
    match load_expecting::<f64>(&path, 64) {
        Err(e @ CheckpointError::ResolutionMismatch { expected: 32, requested: 64 }) => {
            assert!(e.to_string().contains("32"), "message should name 32: {e}");
        }
        other => panic!("expected ResolutionMismatch, got {other:?}"),
    }
    // The happy path still loads.
    load_expecting::<f64>(&path, 32).unwrap();
}

#[test]
fn bad_magic_version_and_trailing_bytes_are_rejected() {
    let net = small_net(9);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.ckpt");
    save(&path, &net, None).unwrap();
    let bytes = std::fs::read(&path).unwrap();

    let mut wrong_magic = bytes.clone();
    wrong_magic[0] ^= 0xFF;
    let p = dir.path().join("magic.ckpt");
    std::fs::write(&p, &wrong_magic).unwrap();
    assert!(matches!(load::<f64>(&p), Err(CheckpointError::BadMagic)));

    let mut wrong_version = bytes.clone();
    wrong_version[8] = 99;
    let p = dir.path().join("version.ckpt");
    std::fs::write(&p, &wrong_version).unwrap();
    assert!(matches!(
        load::<f64>(&p),
        Err(CheckpointError::Version(99))
    ));

    let mut trailing = bytes.clone();
    trailing.push(0);
    let p = dir.path().join("trailing.ckpt");
    std::fs::write(&p, &trailing).unwrap();
    assert!(matches!(
        load::<f64>(&p),
        Err(CheckpointError::Malformed(_))
    ));
}
