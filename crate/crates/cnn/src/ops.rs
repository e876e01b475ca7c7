//! The numeric kernels behind every layer.
//!
//! All loops run in a fixed order so results are bit-reproducible for a
//! given element type. Reductions use eight parallel accumulators folded in
//! a fixed sequence — still deterministic, but the compiler can vectorize.

use crate::spec::Activation;
use crate::tensor::Scalar;

/// Dot product with eight-lane accumulation.
#[inline]
pub(crate) fn dot8<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [F::zero(); 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (xa, xb) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] = acc[k] + xa[k] * xb[k];
        }
    }
    let mut s = F::zero();
    for a in acc {
        s = s + a;
    }
    for (x, y) in ra.iter().zip(rb) {
        s = s + *x * *y;
    }
    s
}

/// Sum with eight-lane accumulation.
#[inline]
pub(crate) fn sum8<F: Scalar>(a: &[F]) -> F {
    let c = a.chunks_exact(8);
    let r = c.remainder();
    let mut acc = [F::zero(); 8];
    for xa in c {
        for k in 0..8 {
            acc[k] = acc[k] + xa[k];
        }
    }
    let mut s = F::zero();
    for a in acc {
        s = s + a;
    }
    for x in r {
        s = s + *x;
    }
    s
}

#[inline]
fn axpy<F: Scalar>(out: &mut [F], x: &[F], a: F) {
    for (o, v) in out.iter_mut().zip(x) {
        *o = *o + a * *v;
    }
}

/// `out[z][y][x] += a * inp[z+dz][y+dy][x+dx]` over the in-range region of
/// two `n^3` channels.
#[inline]
fn axpy_shifted<F: Scalar>(out: &mut [F], inp: &[F], a: F, n: usize, d: [isize; 3]) {
    let ni = n as isize;
    let [dz, dy, dx] = d;
    let z0 = (-dz).max(0) as usize;
    let z1 = (ni - dz).min(ni) as usize;
    let y0 = (-dy).max(0) as usize;
    let y1 = (ni - dy).min(ni) as usize;
    let x0 = (-dx).max(0) as usize;
    let x1 = (ni - dx).min(ni) as usize;
    if x0 >= x1 {
        return;
    }
    let nn = n * n;
    for z in z0..z1 {
        let zi = (z as isize + dz) as usize;
        for y in y0..y1 {
            let yi = (y as isize + dy) as usize;
            let ob = z * nn + y * n;
            let i0 = ((zi * nn + yi * n) as isize + dx + x0 as isize) as usize;
            let orow = &mut out[ob + x0..ob + x1];
            let irow = &inp[i0..i0 + (x1 - x0)];
            for (o, i) in orow.iter_mut().zip(irow) {
                *o = *o + a * *i;
            }
        }
    }
}

/// Row-by-row dot of two shifted `n^3` channels (the weight-gradient sum).
#[inline]
fn dot_shifted<F: Scalar>(g: &[F], inp: &[F], n: usize, d: [isize; 3]) -> F {
    let ni = n as isize;
    let [dz, dy, dx] = d;
    let z0 = (-dz).max(0) as usize;
    let z1 = (ni - dz).min(ni) as usize;
    let y0 = (-dy).max(0) as usize;
    let y1 = (ni - dy).min(ni) as usize;
    let x0 = (-dx).max(0) as usize;
    let x1 = (ni - dx).min(ni) as usize;
    let mut s = F::zero();
    if x0 >= x1 {
        return s;
    }
    let nn = n * n;
    for z in z0..z1 {
        let zi = (z as isize + dz) as usize;
        for y in y0..y1 {
            let yi = (y as isize + dy) as usize;
            let gb = z * nn + y * n;
            let i0 = ((zi * nn + yi * n) as isize + dx + x0 as isize) as usize;
            s = s + dot8(&g[gb + x0..gb + x1], &inp[i0..i0 + (x1 - x0)]);
        }
    }
    s
}

const KERNEL: usize = 27;

#[inline]
fn offset(k: usize) -> [isize; 3] {
    [
        (k / 9) as isize - 1,
        ((k / 3) % 3) as isize - 1,
        (k % 3) as isize - 1,
    ]
}

/// 3^3 correlation, stride 1, zero padding 1. `w` is laid out
/// `[out_ch][in_ch][kz][ky][kx]`.
pub(crate) fn conv3_forward<F: Scalar>(
    inp: &[F],
    out: &mut [F],
    w: &[F],
    b: &[F],
    cin: usize,
    cout: usize,
    n: usize,
) {
    let vol = n * n * n;
    debug_assert_eq!(inp.len(), cin * vol);
    debug_assert_eq!(out.len(), cout * vol);
    debug_assert_eq!(w.len(), cout * cin * KERNEL);
    debug_assert_eq!(b.len(), cout);
    for (co, oc) in out.chunks_exact_mut(vol).enumerate() {
        oc.fill(b[co]);
        for (ci, icn) in inp.chunks_exact(vol).enumerate() {
            let wb = (co * cin + ci) * KERNEL;
            for k in 0..KERNEL {
                axpy_shifted(oc, icn, w[wb + k], n, offset(k));
            }
        }
    }
}

/// Gradient w.r.t. the convolution input (transposed correlation).
/// Overwrites `din`.
pub(crate) fn conv3_back_input<F: Scalar>(
    dout: &[F],
    din: &mut [F],
    w: &[F],
    cin: usize,
    cout: usize,
    n: usize,
) {
    let vol = n * n * n;
    debug_assert_eq!(dout.len(), cout * vol);
    debug_assert_eq!(din.len(), cin * vol);
    for (ci, dc) in din.chunks_exact_mut(vol).enumerate() {
        dc.fill(F::zero());
        for (co, gc) in dout.chunks_exact(vol).enumerate() {
            let wb = (co * cin + ci) * KERNEL;
            for k in 0..KERNEL {
                let [dz, dy, dx] = offset(k);
                axpy_shifted(dc, gc, w[wb + k], n, [-dz, -dy, -dx]);
            }
        }
    }
}

/// Gradients w.r.t. the convolution weights and bias. Accumulates into
/// `dw`/`db` so batches can share one buffer.
pub(crate) fn conv3_back_params<F: Scalar>(
    dout: &[F],
    inp: &[F],
    dw: &mut [F],
    db: &mut [F],
    cin: usize,
    cout: usize,
    n: usize,
) {
    let vol = n * n * n;
    debug_assert_eq!(dout.len(), cout * vol);
    debug_assert_eq!(inp.len(), cin * vol);
    for (co, gc) in dout.chunks_exact(vol).enumerate() {
        db[co] = db[co] + sum8(gc);
        for (ci, icn) in inp.chunks_exact(vol).enumerate() {
            let wb = (co * cin + ci) * KERNEL;
            for k in 0..KERNEL {
                dw[wb + k] = dw[wb + k] + dot_shifted(gc, icn, n, offset(k));
            }
        }
    }
}

/// 2^3 max pool; halves every spatial dim. Records the flat input index of
/// each maximum in `idx`. Ties keep the first cell in (z, y, x) scan order.
pub(crate) fn pool2_forward<F: Scalar>(
    inp: &[F],
    out: &mut [F],
    idx: &mut [u32],
    ch: usize,
    n: usize,
) {
    let m = n / 2;
    let nn = n * n;
    let vol = nn * n;
    let mvol = m * m * m;
    debug_assert_eq!(out.len(), ch * mvol);
    debug_assert_eq!(idx.len(), ch * mvol);
    for c in 0..ch {
        let ic = &inp[c * vol..(c + 1) * vol];
        for z in 0..m {
            for y in 0..m {
                for x in 0..m {
                    let mut best = F::neg_infinity();
                    let mut bi = 0usize;
                    for dz in 0..2 {
                        for dy in 0..2 {
                            let row = (2 * z + dz) * nn + (2 * y + dy) * n + 2 * x;
                            for dx in 0..2 {
                                let v = ic[row + dx];
                                if v > best {
                                    best = v;
                                    bi = row + dx;
                                }
                            }
                        }
                    }
                    let o = c * mvol + (z * m + y) * m + x;
                    out[o] = best;
                    idx[o] = (c * vol + bi) as u32;
                }
            }
        }
    }
}

/// Route pooled gradients back to the recorded maxima. Overwrites `din`.
pub(crate) fn pool2_back<F: Scalar>(dout: &[F], din: &mut [F], idx: &[u32]) {
    din.fill(F::zero());
    for (g, &i) in dout.iter().zip(idx) {
        din[i as usize] = din[i as usize] + *g;
    }
}

/// Dense layer: `out = W·inp + b`, `W` row-major `[outputs][inputs]`.
pub(crate) fn fc_forward<F: Scalar>(inp: &[F], out: &mut [F], w: &[F], b: &[F]) {
    let k = inp.len();
    debug_assert_eq!(w.len(), out.len() * k);
    for (j, wr) in w.chunks_exact(k).enumerate() {
        out[j] = b[j] + dot8(wr, inp);
    }
}

/// Gradient w.r.t. the dense layer input. Overwrites `din`.
pub(crate) fn fc_back_input<F: Scalar>(dout: &[F], din: &mut [F], w: &[F]) {
    din.fill(F::zero());
    for (j, wr) in w.chunks_exact(din.len()).enumerate() {
        axpy(din, wr, dout[j]);
    }
}

/// Gradients w.r.t. dense weights and bias; accumulates.
pub(crate) fn fc_back_params<F: Scalar>(dout: &[F], inp: &[F], dw: &mut [F], db: &mut [F]) {
    let k = inp.len();
    for (j, wr) in dw.chunks_exact_mut(k).enumerate() {
        axpy(wr, inp, dout[j]);
        db[j] = db[j] + dout[j];
    }
}

pub(crate) fn act_forward<F: Scalar>(x: &mut [F], act: Activation) {
    match act {
        Activation::Linear => {}
        Activation::Relu => {
            for v in x {
                if *v < F::zero() {
                    *v = F::zero();
                }
            }
        }
        Activation::LeakyRelu(a) => {
            let a = F::of(a);
            for v in x {
                if *v < F::zero() {
                    *v = *v * a;
                }
            }
        }
    }
}

/// Scale the upstream gradient by the activation slope. Both rectifiers
/// preserve sign, so the branch each element took is recovered from the
/// post-activation value: positive means slope 1, otherwise the negative
/// branch applies (slope 0 for ReLU, the leak slope for LeakyReLU).
pub(crate) fn act_backward<F: Scalar>(d: &mut [F], post: &[F], act: Activation) {
    match act {
        Activation::Linear => {}
        Activation::Relu => {
            for (g, &p) in d.iter_mut().zip(post) {
                if p <= F::zero() {
                    *g = F::zero();
                }
            }
        }
        Activation::LeakyRelu(a) => {
            let a = F::of(a);
            for (g, &p) in d.iter_mut().zip(post) {
                if p <= F::zero() {
                    *g = *g * a;
                }
            }
        }
    }
}
