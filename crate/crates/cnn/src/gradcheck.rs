//! Finite-difference verification of the backward pass.

use geomcore::rng::{below_u64, seeded};

use crate::error::CnnError;
use crate::loss::loss_quartic;
use crate::net::Network;
use crate::tensor::Tensor4;

/// Central-difference step. When the ±H probes land in different affine
/// regions of the piecewise-linear net (a rectifier flipped sign or a pool
/// argmax moved), the quotient is not a derivative of anything; the step is
/// shrunk through `H_LADDER` until the region is stable, and only then
/// compared. Smooth nets never leave the first rung.
const H: f64 = 1e-4;
const H_LADDER: [f64; 3] = [H, 1e-5, 1e-6];

/// Relative errors use an absolute floor so near-zero gradient pairs are
/// compared absolutely: err = |a - n| / max(|a|, |n|, FLOOR). A disagreement
/// below FLOOR * tolerance in absolute terms is indistinguishable from
/// finite-difference noise.
const FLOOR: f64 = 1e-2;

/// Up to this many randomly chosen parameters are probed.
const SAMPLE: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamRef {
    pub layer: usize,
    /// True for a weight, false for a bias entry.
    pub weight: bool,
    pub index: usize,
}

impl std::fmt::Display for ParamRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = if self.weight { "weight" } else { "bias" };
        write!(f, "layer {} {}[{}]", self.layer, kind, self.index)
    }
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub checked: usize,
    pub tolerance: f64,
    pub max_rel_error: f64,
    /// The parameter with the largest relative error (None for zero-parameter nets).
    pub worst: Option<ParamRef>,
    pub pass: bool,
}

/// Compare analytic gradients of `loss_quartic(target, forward(input))`
/// against central finite differences on a random parameter subset
/// (everything, for nets with at most 200 parameters). Double precision
/// only: in f32 the difference quotient itself drowns in rounding error.
pub fn gradient_check(
    net: &mut Network<f64>,
    input: &Tensor4<f64>,
    target: &[f64],
    tolerance: f64,
    seed: u64,
) -> Result<GradCheckReport, CnnError> {
    let cache = net.forward_cached(input)?;
    let (grads, _) = net.backward(&cache, target)?;
    drop(cache);
    check_against(net, input, target, &grads, tolerance, seed)
}

/// The comparison itself, taking the "analytic" gradients as an argument so
/// fault-injection tests can feed a deliberately corrupted set.
pub fn check_against(
    net: &mut Network<f64>,
    input: &Tensor4<f64>,
    target: &[f64],
    grads: &crate::net::Gradients<f64>,
    tolerance: f64,
    seed: u64,
) -> Result<GradCheckReport, CnnError> {
    let total = net.param_count();
    let picks: Vec<usize> = if total <= SAMPLE {
        (0..total).collect()
    } else {
        let mut rng = seeded(seed);
        let mut seen = vec![false; total];
        let mut picks = Vec::with_capacity(SAMPLE);
        while picks.len() < SAMPLE {
            let i = below_u64(&mut rng, total as u64) as usize;
            if !seen[i] {
                seen[i] = true;
                picks.push(i);
            }
        }
        picks.sort_unstable();
        picks
    };

    let (_, base_sig) = net.forward_with_signature(input)?;
    let mut max_rel = 0.0f64;
    let mut worst = None;
    for &flat in &picks {
        let analytic = grads.get_param(flat);
        let orig = net.get_param(flat);
        let mut numeric = 0.0;
        for &h in &H_LADDER {
            net.set_param(flat, orig + h);
            let (out_up, sig_up) = net.forward_with_signature(input)?;
            let up = loss_quartic(target, &out_up)?;
            net.set_param(flat, orig - h);
            let (out_down, sig_down) = net.forward_with_signature(input)?;
            let down = loss_quartic(target, &out_down)?;
            net.set_param(flat, orig);
            numeric = (up - down) / (2.0 * h);
            if sig_up == base_sig && sig_down == base_sig {
                break;
            }
        }
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(FLOOR);
        if rel >= max_rel {
            max_rel = rel;
            let (layer, weight, index) = net.locate_param(flat).expect("picked in range");
            worst = Some(ParamRef {
                layer,
                weight,
                index,
            });
        }
    }

    Ok(GradCheckReport {
        checked: picks.len(),
        tolerance,
        max_rel_error: max_rel,
        worst,
        pass: max_rel < tolerance,
    })
}
