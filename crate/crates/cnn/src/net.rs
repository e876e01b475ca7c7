//! Networks: parameter storage, forward pass, reverse-mode gradients.

use geomcore::rng::{range_f64, seeded};

use crate::error::CnnError;
use crate::loss::{loss_quartic, loss_quartic_grad};
use crate::ops;
use crate::spec::{LayerSpec, NetworkSpec, Stage};
use crate::tensor::{Scalar, Tensor4};

/// Weights and bias of one layer; both empty for parameterless layers.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBlock<F> {
    pub w: Vec<F>,
    pub b: Vec<F>,
}

impl<F: Scalar> ParamBlock<F> {
    fn empty() -> Self {
        ParamBlock {
            w: Vec::new(),
            b: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.w.len() + self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-parameter gradients in the same block layout as the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients<F> {
    pub blocks: Vec<ParamBlock<F>>,
}

impl<F: Scalar> Gradients<F> {
    pub fn zeros_of(net: &Network<F>) -> Self {
        Gradients {
            blocks: net
                .blocks
                .iter()
                .map(|b| ParamBlock {
                    w: vec![F::zero(); b.w.len()],
                    b: vec![F::zero(); b.b.len()],
                })
                .collect(),
        }
    }

    pub fn scale(&mut self, s: F) {
        for blk in &mut self.blocks {
            for v in blk.w.iter_mut().chain(blk.b.iter_mut()) {
                *v = *v * s;
            }
        }
    }

    pub fn param_count(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }
}

/// Everything the backward pass needs from a forward pass: the input and
/// every layer's post-activation output, plus max-pool argmax indices.
pub struct Cache<F> {
    /// `acts[0]` is the input; `acts[i + 1]` is the output of layer `i`.
    pub acts: Vec<Vec<F>>,
    /// One entry per pool layer, in layer order.
    pub pool_idx: Vec<Vec<u32>>,
}

impl<F> Cache<F> {
    pub fn output(&self) -> &[F] {
        self.acts.last().expect("cache always holds the input")
    }
}

/// A layer stack with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<F> {
    spec: NetworkSpec,
    stages: Vec<Stage>,
    blocks: Vec<ParamBlock<F>>,
}

impl<F: Scalar> Network<F> {
    /// Build a network with fan-in-scaled uniform weights (bound
    /// sqrt(6/fan_in), which preserves activation variance through
    /// rectified layers) and zero biases, drawn from the seeded generator
    /// in a fixed order.
    pub fn init(spec: NetworkSpec, seed: u64) -> Result<Self, CnnError> {
        let stages = spec.stages()?;
        let mut rng = seeded(seed);
        let mut blocks = Vec::with_capacity(spec.layers.len());
        for layer in &spec.layers {
            let (wlen, blen, fan_in) = match *layer {
                LayerSpec::Conv { in_ch, out_ch, .. } => {
                    (out_ch * in_ch * 27, out_ch, in_ch * 27)
                }
                LayerSpec::Fc { inputs, outputs, .. } => (outputs * inputs, outputs, inputs),
                LayerSpec::Pool => {
                    blocks.push(ParamBlock::empty());
                    continue;
                }
            };
            let bound = (6.0 / fan_in as f64).sqrt();
            let w = (0..wlen)
                .map(|_| F::of(range_f64(&mut rng, -bound, bound)))
                .collect();
            blocks.push(ParamBlock {
                w,
                b: vec![F::zero(); blen],
            });
        }
        Ok(Network {
            spec,
            stages,
            blocks,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn resolution(&self) -> usize {
        self.spec.resolution
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn blocks(&self) -> &[ParamBlock<F>] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [ParamBlock<F>] {
        &mut self.blocks
    }

    /// Rebuild from parts (checkpoint loading). Block shapes must match the
    /// spec exactly.
    pub fn from_parts(spec: NetworkSpec, blocks: Vec<ParamBlock<F>>) -> Result<Self, CnnError> {
        let stages = spec.stages()?;
        let shape_err = |layer: usize, detail: String| CnnError::Shape { layer, detail };
        if blocks.len() != spec.layers.len() {
            return Err(shape_err(
                0,
                format!(
                    "{} parameter blocks for {} layers",
                    blocks.len(),
                    spec.layers.len()
                ),
            ));
        }
        for (i, (layer, blk)) in spec.layers.iter().zip(&blocks).enumerate() {
            let (wlen, blen) = match *layer {
                LayerSpec::Conv { in_ch, out_ch, .. } => (out_ch * in_ch * 27, out_ch),
                LayerSpec::Fc { inputs, outputs, .. } => (outputs * inputs, outputs),
                LayerSpec::Pool => (0, 0),
            };
            if blk.w.len() != wlen || blk.b.len() != blen {
                return Err(shape_err(
                    i,
                    format!(
                        "parameter block holds {}+{} values, layer needs {}+{}",
                        blk.w.len(),
                        blk.b.len(),
                        wlen,
                        blen
                    ),
                ));
            }
        }
        Ok(Network {
            spec,
            stages,
            blocks,
        })
    }

    pub fn param_count(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    fn check_input(&self, input: &Tensor4<F>) -> Result<(), CnnError> {
        let r = self.spec.resolution;
        if input.dims() != [1, r, r, r] {
            return Err(CnnError::Shape {
                layer: 0,
                detail: format!(
                    "input has shape {:?}, network expects [1, {r}, {r}, {r}]",
                    input.dims()
                ),
            });
        }
        if !input.is_finite() {
            return Err(CnnError::NonFinite { layer: 0 });
        }
        Ok(())
    }

    /// Run one layer without its activation; returns that activation so
    /// callers can inspect pre-activation values first. `out` is resized to
    /// the layer's output length; pool argmax indices go to `idx`.
    fn apply_layer_raw(
        &self,
        i: usize,
        input: &[F],
        out: &mut Vec<F>,
        idx: &mut Vec<u32>,
    ) -> crate::spec::Activation {
        out.clear();
        out.resize(self.stages[i + 1].len(), F::zero());
        let blk = &self.blocks[i];
        match self.spec.layers[i] {
            LayerSpec::Conv { in_ch, out_ch, act } => {
                let n = match self.stages[i] {
                    Stage::Spatial { n, .. } => n,
                    Stage::Flat(_) => unreachable!("spec validation rejects conv on flat"),
                };
                ops::conv3_forward(input, out, &blk.w, &blk.b, in_ch, out_ch, n);
                act
            }
            LayerSpec::Pool => {
                let (ch, n) = match self.stages[i] {
                    Stage::Spatial { ch, n } => (ch, n),
                    Stage::Flat(_) => unreachable!("spec validation rejects pool on flat"),
                };
                idx.clear();
                idx.resize(out.len(), 0);
                ops::pool2_forward(input, out, idx, ch, n);
                crate::spec::Activation::Linear
            }
            LayerSpec::Fc { act, .. } => {
                ops::fc_forward(input, out, &blk.w, &blk.b);
                act
            }
        }
    }

    fn apply_layer(&self, i: usize, input: &[F], out: &mut Vec<F>, idx: &mut Vec<u32>) {
        let act = self.apply_layer_raw(i, input, out, idx);
        ops::act_forward(out, act);
    }

    /// Forward pass that also returns a signature of every decision the
    /// non-smooth pieces of the net made: the sign of each pre-activation
    /// feeding a rectifier (packed bits) and every pool argmax index. Two
    /// evaluations with the same signature lie in the same affine region of
    /// the piecewise-linear network, so a central difference between them
    /// measures a real derivative; a signature change means the probe
    /// straddled a kink.
    pub fn forward_with_signature(
        &self,
        input: &Tensor4<F>,
    ) -> Result<(Vec<F>, Vec<u64>), CnnError> {
        self.check_input(input)?;
        let mut cur = input.data().to_vec();
        let mut next = Vec::new();
        let mut idx = Vec::new();
        let mut sig = Vec::new();
        let mut bits = 0u64;
        let mut nbits = 0u32;
        for i in 0..self.spec.layers.len() {
            let act = self.apply_layer_raw(i, &cur, &mut next, &mut idx);
            if matches!(self.spec.layers[i], LayerSpec::Pool) {
                if nbits > 0 {
                    sig.push(bits);
                    bits = 0;
                    nbits = 0;
                }
                sig.extend(idx.iter().map(|&k| k as u64));
            } else if !matches!(act, crate::spec::Activation::Linear) {
                for v in &next {
                    bits |= u64::from(*v > F::zero()) << nbits;
                    nbits += 1;
                    if nbits == 64 {
                        sig.push(bits);
                        bits = 0;
                        nbits = 0;
                    }
                }
            }
            ops::act_forward(&mut next, act);
            std::mem::swap(&mut cur, &mut next);
        }
        if nbits > 0 {
            sig.push(bits);
        }
        Ok((cur, sig))
    }

    /// The smallest |pre-activation| that hits a rectifier anywhere in this
    /// forward pass (infinity if none does). A small margin warns that the
    /// loss is barely one-sided differentiable here: useful when diagnosing
    /// gradient-check mismatches.
    pub fn rectifier_margin(&self, input: &Tensor4<F>) -> Result<F, CnnError> {
        self.check_input(input)?;
        let mut cur = input.data().to_vec();
        let mut next = Vec::new();
        let mut idx = Vec::new();
        let mut margin = F::infinity();
        for i in 0..self.spec.layers.len() {
            let act = self.apply_layer_raw(i, &cur, &mut next, &mut idx);
            if !matches!(act, crate::spec::Activation::Linear) {
                for v in &next {
                    margin = margin.min(v.abs());
                }
            }
            ops::act_forward(&mut next, act);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(margin)
    }

    /// Forward pass; returns the raw output scores.
    pub fn forward(&self, input: &Tensor4<F>) -> Result<Vec<F>, CnnError> {
        self.check_input(input)?;
        let mut cur = input.data().to_vec();
        let mut next = Vec::new();
        let mut idx = Vec::new();
        for i in 0..self.spec.layers.len() {
            self.apply_layer(i, &cur, &mut next, &mut idx);
            std::mem::swap(&mut cur, &mut next);
            debug_assert!(
                cur.iter().all(|v| v.is_finite()),
                "non-finite values after layer {i}"
            );
        }
        if !cur.iter().all(|v| v.is_finite()) {
            return Err(CnnError::NonFinite {
                layer: self.spec.layers.len(),
            });
        }
        Ok(cur)
    }

    /// Forward pass keeping every intermediate needed by `backward`.
    pub fn forward_cached(&self, input: &Tensor4<F>) -> Result<Cache<F>, CnnError> {
        self.check_input(input)?;
        let mut acts = Vec::with_capacity(self.spec.layers.len() + 1);
        acts.push(input.data().to_vec());
        let mut pool_idx = Vec::new();
        for i in 0..self.spec.layers.len() {
            let mut out = Vec::new();
            let mut idx = Vec::new();
            self.apply_layer(i, &acts[i], &mut out, &mut idx);
            if matches!(self.spec.layers[i], LayerSpec::Pool) {
                pool_idx.push(idx);
            }
            acts.push(out);
        }
        if !acts.last().unwrap().iter().all(|v| v.is_finite()) {
            return Err(CnnError::NonFinite {
                layer: self.spec.layers.len(),
            });
        }
        Ok(Cache { acts, pool_idx })
    }

    /// Reverse-mode gradients of `loss_quartic(target, forward(input))`,
    /// accumulated into `grads` (callers zero or share the buffer across a
    /// batch). Returns this sample's loss.
    pub fn accumulate_backward(
        &self,
        cache: &Cache<F>,
        target: &[F],
        grads: &mut Gradients<F>,
    ) -> Result<F, CnnError> {
        let out = cache.output();
        let loss = loss_quartic(target, out)?;
        let mut d = vec![F::zero(); out.len()];
        loss_quartic_grad(target, out, &mut d)?;
        let mut pool_i = cache.pool_idx.len();
        let mut dprev: Vec<F> = Vec::new();
        for i in (0..self.spec.layers.len()).rev() {
            let blk = &self.blocks[i];
            let gblk = &mut grads.blocks[i];
            dprev.clear();
            dprev.resize(self.stages[i].len(), F::zero());
            match self.spec.layers[i] {
                LayerSpec::Conv { in_ch, out_ch, act } => {
                    let n = match self.stages[i] {
                        Stage::Spatial { n, .. } => n,
                        Stage::Flat(_) => unreachable!(),
                    };
                    ops::act_backward(&mut d, &cache.acts[i + 1], act);
                    ops::conv3_back_params(
                        &d,
                        &cache.acts[i],
                        &mut gblk.w,
                        &mut gblk.b,
                        in_ch,
                        out_ch,
                        n,
                    );
                    ops::conv3_back_input(&d, &mut dprev, &blk.w, in_ch, out_ch, n);
                }
                LayerSpec::Pool => {
                    pool_i -= 1;
                    ops::pool2_back(&d, &mut dprev, &cache.pool_idx[pool_i]);
                }
                LayerSpec::Fc { act, .. } => {
                    ops::act_backward(&mut d, &cache.acts[i + 1], act);
                    ops::fc_back_params(&d, &cache.acts[i], &mut gblk.w, &mut gblk.b);
                    ops::fc_back_input(&d, &mut dprev, &blk.w);
                }
            }
            std::mem::swap(&mut d, &mut dprev);
        }
        Ok(loss)
    }

    /// One-sample convenience wrapper around `accumulate_backward`.
    pub fn backward(&self, cache: &Cache<F>, target: &[F]) -> Result<(Gradients<F>, F), CnnError> {
        let mut grads = Gradients::zeros_of(self);
        let loss = self.accumulate_backward(cache, target, &mut grads)?;
        Ok((grads, loss))
    }

    /// Flat parameter addressing (layer order, weights before bias) used by
    /// the gradient checker and optimizer diagnostics.
    pub fn locate_param(&self, flat: usize) -> Option<(usize, bool, usize)> {
        let mut rest = flat;
        for (layer, blk) in self.blocks.iter().enumerate() {
            if rest < blk.w.len() {
                return Some((layer, true, rest));
            }
            rest -= blk.w.len();
            if rest < blk.b.len() {
                return Some((layer, false, rest));
            }
            rest -= blk.b.len();
        }
        None
    }

    pub fn get_param(&self, flat: usize) -> F {
        let (layer, is_w, i) = self.locate_param(flat).expect("parameter index in range");
        let blk = &self.blocks[layer];
        if is_w {
            blk.w[i]
        } else {
            blk.b[i]
        }
    }

    pub fn set_param(&mut self, flat: usize, v: F) {
        let (layer, is_w, i) = self.locate_param(flat).expect("parameter index in range");
        let blk = &mut self.blocks[layer];
        if is_w {
            blk.w[i] = v;
        } else {
            blk.b[i] = v;
        }
    }
}

impl<F: Scalar> Gradients<F> {
    pub fn get_param(&self, flat: usize) -> F {
        let mut rest = flat;
        for blk in &self.blocks {
            if rest < blk.w.len() {
                return blk.w[rest];
            }
            rest -= blk.w.len();
            if rest < blk.b.len() {
                return blk.b[rest];
            }
            rest -= blk.b.len();
        }
        panic!("parameter index out of range");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Activation;

    fn tiny_fc_spec() -> NetworkSpec {
        NetworkSpec {
            resolution: 1,
            layers: vec![LayerSpec::Fc {
                inputs: 1,
                outputs: 1,
                act: Activation::Linear,
            }],
        }
    }

    #[test]
    fn single_fc_identity_layer_reproduces_its_input() {
        let mut net = Network::<f64>::init(tiny_fc_spec(), 1).unwrap();
        net.blocks_mut()[0].w[0] = 1.0;
        net.blocks_mut()[0].b[0] = 0.0;
        for v in [-2.5, 0.0, 0.75, 42.0] {
            let x = Tensor4::new([1, 1, 1, 1], vec![v]);
            assert_eq!(net.forward(&x).unwrap(), vec![v]);
        }
    }

    #[test]
    fn all_zero_weights_and_input_give_all_zero_output() {
        let spec = NetworkSpec::conv_stack(8, 2, 3, Activation::Relu);
        let mut net = Network::<f64>::init(spec, 9).unwrap();
        for blk in net.blocks_mut() {
            blk.w.fill(0.0);
            blk.b.fill(0.0);
        }
        let x = Tensor4::zeros([1, 8, 8, 8]);
        let out = net.forward(&x).unwrap();
        assert_eq!(out, vec![0.0; 10]);
    }

    #[test]
    fn wrong_input_resolution_is_a_shape_error_at_layer_zero() {
        let net = Network::<f64>::init(tiny_fc_spec(), 1).unwrap();
        let x = Tensor4::zeros([1, 2, 2, 2]);
        match net.forward(&x) {
            Err(CnnError::Shape { layer: 0, .. }) => {}
            other => panic!("expected input shape error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let net = Network::<f64>::init(tiny_fc_spec(), 1).unwrap();
        let x = Tensor4::new([1, 1, 1, 1], vec![f64::NAN]);
        assert!(matches!(
            net.forward(&x),
            Err(CnnError::NonFinite { layer: 0 })
        ));
    }

    #[test]
    fn gradients_vanish_when_output_equals_target() {
        // Zero weights and biases with a zero input give zero output; a zero
        // target then sits exactly at the loss minimum.
        let spec = NetworkSpec {
            resolution: 4,
            layers: vec![
                LayerSpec::Conv {
                    in_ch: 1,
                    out_ch: 2,
                    act: Activation::Relu,
                },
                LayerSpec::Pool,
                LayerSpec::Fc {
                    inputs: 16,
                    outputs: 3,
                    act: Activation::Linear,
                },
            ],
        };
        let mut net = Network::<f64>::init(spec, 3).unwrap();
        for blk in net.blocks_mut() {
            blk.w.fill(0.0);
        }
        let x = Tensor4::zeros([1, 4, 4, 4]);
        let cache = net.forward_cached(&x).unwrap();
        let (grads, loss) = net.backward(&cache, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(loss, 0.0);
        for blk in &grads.blocks {
            assert!(blk.w.iter().chain(&blk.b).all(|&g| g == 0.0));
        }
    }

    #[test]
    fn rectifier_margin_and_signature_track_the_active_region() {
        // Purely linear net: no rectifier, so the margin is infinite and the
        // signature carries only pool argmax words.
        let spec = NetworkSpec {
            resolution: 4,
            layers: vec![
                LayerSpec::Conv {
                    in_ch: 1,
                    out_ch: 1,
                    act: Activation::Linear,
                },
                LayerSpec::Pool,
                LayerSpec::Fc {
                    inputs: 8,
                    outputs: 3,
                    act: Activation::Linear,
                },
            ],
        };
        let net = Network::<f64>::init(spec, 9).unwrap();
        let mut x = Tensor4::zeros([1, 4, 4, 4]);
        for (i, v) in x.data_mut().iter_mut().enumerate() {
            *v = (i % 5) as f64 - 2.0;
        }
        assert_eq!(net.rectifier_margin(&x).unwrap(), f64::INFINITY);
        let (out, sig) = net.forward_with_signature(&x).unwrap();
        assert_eq!(out, net.forward(&x).unwrap());
        assert_eq!(sig.len(), 8, "one word per pooled cell");

        // A rectified net on the same input has a finite margin, and the
        // signature flips once a bias shoves a unit across zero.
        let spec = NetworkSpec::conv_stack(4, 2, 2, Activation::Relu);
        let mut net = Network::<f64>::init(spec, 9).unwrap();
        let margin = net.rectifier_margin(&x).unwrap();
        assert!(margin.is_finite() && margin > 0.0);
        let (_, before) = net.forward_with_signature(&x).unwrap();
        net.blocks_mut()[0].b.fill(1e3);
        let (_, after) = net.forward_with_signature(&x).unwrap();
        assert_ne!(before, after);
    }

    #[test]
    fn seeded_init_is_reproducible_and_bounded() {
        let spec = NetworkSpec::conv_stack(16, 2, 4, Activation::Relu);
        let a = Network::<f64>::init(spec.clone(), 77).unwrap();
        let b = Network::<f64>::init(spec, 77).unwrap();
        assert_eq!(a.blocks(), b.blocks());
        // Conv fan-in 27: uniform bound sqrt(6/27).
        let bound = (6.0 / 27f64).sqrt();
        assert!(a.blocks()[0].w.iter().all(|w| w.abs() <= bound));
        assert!(a.blocks()[0].w.iter().any(|w| w.abs() > bound / 2.0));
        assert!(a.blocks()[0].b.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn flat_param_addressing_round_trips() {
        let spec = NetworkSpec::conv_stack(8, 2, 2, Activation::Relu);
        let mut net = Network::<f64>::init(spec, 5).unwrap();
        let n = net.param_count();
        assert_eq!(
            n,
            net.blocks().iter().map(|b| b.len()).sum::<usize>()
        );
        net.set_param(0, 0.5);
        assert_eq!(net.get_param(0), 0.5);
        net.set_param(n - 1, -0.25);
        assert_eq!(net.get_param(n - 1), -0.25);
        assert!(net.locate_param(n).is_none());
    }
}
