//! Dense matrix exponential, square root and logarithm.
//!
//! The exponential uses scaling and squaring over a truncated Taylor series.
//! The logarithm is only meant for arguments near the identity: it takes
//! Denman–Beavers square roots until the argument is within 1/4 of the
//! identity, then sums the Mercator series.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn norm_one(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential. `expm(0)` is exactly the identity.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let identity = DMatrix::<f64>::identity(n, n);
    let norm = norm_one(a);
    if norm == 0.0 {
        return identity;
    }
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);
    let mut result = identity.clone();
    let mut term = identity;
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.amax() <= f64::EPSILON * 1e-3 * result.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Principal square root by the Denman–Beavers iteration.
pub fn sqrtm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let y_inv = y
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Domain("singular iterate in matrix square root".into()))?;
        let z_inv = z
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Domain("singular iterate in matrix square root".into()))?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let change = (&y_next - &y).amax();
        y = y_next;
        z = z_next;
        if change <= 1e-15 * y.amax().max(1.0) {
            return Ok(y);
        }
    }
    Err(Error::Domain("matrix square root did not converge".into()))
}

/// Matrix logarithm of an element near the identity.
pub fn logm(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    let identity = DMatrix::<f64>::identity(n, n);
    let mut x = g.clone();
    let mut roots = 0;
    while norm_one(&(&x - &identity)) > 0.25 {
        if roots >= 40 {
            return Err(Error::Domain("logarithm argument too far from identity".into()));
        }
        x = sqrtm(&x)?;
        roots += 1;
    }
    let y = &x - &identity;
    let mut power = y.clone();
    let mut sum = y.clone();
    for k in 2..=80 {
        power = &power * &y;
        let term = &power / k as f64;
        if k % 2 == 0 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if term.amax() <= f64::EPSILON * 1e-3 * sum.amax().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(sum * 2f64.powi(roots))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_nilpotent_is_polynomial() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 0.0, 0.0]);
        let e = expm(&a);
        assert_eq!(e, DMatrix::from_row_slice(2, 2, &[1.0, 3.0, 0.0, 1.0]));
    }

    #[test]
    fn sqrt_squares_back() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.1, 1.5]);
        let r = sqrtm(&a).unwrap();
        assert!((&r * &r - &a).amax() < 1e-13);
    }

    #[test]
    fn log_inverts_exp_for_large_rotation() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -2.5, 2.5, 0.0]);
        let l = logm(&expm(&a)).unwrap();
        assert!((&l - &a).amax() < 1e-10);
    }
}
