//! Bias-corrected ADAM.
//!
//! Moment vectors are kept in double precision regardless of the network's
//! element type, so update arithmetic is identical between f32 and f64
//! networks up to the final write-back.

use crate::error::CnnError;
use crate::net::{Gradients, Network};
use crate::tensor::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Completed steps; bias correction uses `t + 1` during a step.
    pub t: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    pub fn new(param_count: usize, alpha: f64) -> Self {
        AdamState {
            alpha,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: vec![0.0; param_count],
            v: vec![0.0; param_count],
        }
    }

    pub fn param_count(&self) -> usize {
        self.m.len()
    }

    /// Restore a saved state. `m` and `v` must have equal lengths.
    pub fn from_parts(
        alpha: f64,
        beta1: f64,
        beta2: f64,
        eps: f64,
        t: u64,
        m: Vec<f64>,
        v: Vec<f64>,
    ) -> Self {
        assert_eq!(m.len(), v.len(), "moment vectors must align");
        AdamState {
            alpha,
            beta1,
            beta2,
            eps,
            t,
            m,
            v,
        }
    }

    pub fn moments(&self) -> (&[f64], &[f64]) {
        (&self.m, &self.v)
    }

    /// One optimizer step:
    /// m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;
    /// p <- p - alpha * m_hat / (sqrt(v_hat) + eps).
    ///
    /// Gradients are validated before any state changes, so a non-finite
    /// gradient leaves parameters and moments untouched.
    pub fn step<F: Scalar>(
        &mut self,
        net: &mut Network<F>,
        grads: &Gradients<F>,
    ) -> Result<(), CnnError> {
        assert_eq!(
            self.m.len(),
            net.param_count(),
            "optimizer state sized for a different network"
        );
        assert_eq!(
            grads.param_count(),
            net.param_count(),
            "gradients sized for a different network"
        );
        for (layer, gblk) in grads.blocks.iter().enumerate() {
            for (index, g) in gblk.w.iter().chain(gblk.b.iter()).enumerate() {
                if !g.is_finite() {
                    return Err(CnnError::NonFiniteGradient { layer, index });
                }
            }
        }

        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        let mut k = 0usize;
        for (blk, gblk) in net.blocks_mut().iter_mut().zip(&grads.blocks) {
            for (p, g) in blk
                .w
                .iter_mut()
                .chain(blk.b.iter_mut())
                .zip(gblk.w.iter().chain(gblk.b.iter()))
            {
                let g = g.f64();
                let m = self.beta1 * self.m[k] + (1.0 - self.beta1) * g;
                let v = self.beta2 * self.v[k] + (1.0 - self.beta2) * g * g;
                self.m[k] = m;
                self.v[k] = v;
                let update = self.alpha * (m / bc1) / ((v / bc2).sqrt() + self.eps);
                *p = F::of(p.f64() - update);
                k += 1;
            }
        }
        Ok(())
    }
}
