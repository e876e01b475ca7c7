//! The quartic cost: sum_i (target_i - actual_i)^4.
//!
//! Raw network scores are compared directly against one-hot targets; there
//! is no softmax anywhere.

use crate::error::CnnError;
use crate::tensor::Scalar;

fn check_lens<F>(target: &[F], actual: &[F]) -> Result<(), CnnError> {
    if target.len() != actual.len() {
        return Err(CnnError::Shape {
            layer: 0,
            detail: format!(
                "quartic loss: target has {} entries, actual has {}",
                target.len(),
                actual.len()
            ),
        });
    }
    Ok(())
}

pub fn loss_quartic<F: Scalar>(target: &[F], actual: &[F]) -> Result<F, CnnError> {
    check_lens(target, actual)?;
    let mut s = F::zero();
    for (&t, &a) in target.iter().zip(actual) {
        let e = t - a;
        let e2 = e * e;
        s = s + e2 * e2;
    }
    Ok(s)
}

/// d(loss)/d(actual_i) = -4 (target_i - actual_i)^3, written into `out`.
pub fn loss_quartic_grad<F: Scalar>(target: &[F], actual: &[F], out: &mut [F]) -> Result<(), CnnError> {
    check_lens(target, actual)?;
    check_lens(target, out)?;
    let four = F::of(4.0);
    for ((&t, &a), g) in target.iter().zip(actual).zip(out.iter_mut()) {
        let e = t - a;
        *g = -(four * e * e * e);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_target() {
        let t = [0.25f64, -1.0, 3.0];
        assert_eq!(loss_quartic(&t, &t).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_one_hots_cost_two() {
        let mut t = [0.0f64; 10];
        let mut a = [0.0f64; 10];
        t[0] = 1.0;
        a[1] = 1.0;
        assert_eq!(loss_quartic(&t, &a).unwrap(), 2.0);
    }

    #[test]
    fn half_credit_costs_an_eighth_of_one() {
        let mut t = [0.0f64; 10];
        let mut a = [0.0f64; 10];
        t[0] = 1.0;
        a[0] = 0.5;
        a[1] = 0.5;
        assert_eq!(loss_quartic(&t, &a).unwrap(), 0.125);
    }

    #[test]
    fn gradient_is_minus_four_error_cubed() {
        let t = [1.0f64, 0.0];
        let a = [0.25f64, -0.5];
        let mut g = [0.0f64; 2];
        loss_quartic_grad(&t, &a, &mut g).unwrap();
        assert_eq!(g[0], -4.0 * 0.75f64.powi(3));
        assert_eq!(g[1], -4.0 * 0.5f64.powi(3));
    }

    #[test]
    fn length_mismatch_is_a_shape_error() {
        let t = [1.0f64; 3];
        let a = [1.0f64; 4];
        assert!(matches!(
            loss_quartic(&t, &a),
            Err(CnnError::Shape { .. })
        ));
    }

    #[test]
    fn loss_is_nonnegative_everywhere() {
        let mut x = -2.0f64;
        while x <= 2.0 {
            let l = loss_quartic(&[1.0], &[x]).unwrap();
            assert!(l >= 0.0);
            x += 0.1;
        }
    }
}
