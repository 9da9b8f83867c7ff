//! Analytic fixtures: base curves, variations, surfaces and reparametrization
//! families sampled on uniform grids.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::Result;
use crate::path::{SampledPath, SampledSurface};

/// Cubic smoothstep 3u² − 2u³ on [0, 1].
pub fn smoothstep(u: f64) -> f64 {
    u * u * (3.0 - 2.0 * u)
}

/// Smooth transition that is flat to all orders at both ends.
pub fn flat_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    a / (a + b)
}

/// Grid values L·smoothstep(i/N).
pub fn smoothstep_grid(n: usize, length: f64) -> Vec<f64> {
    (0..=n).map(|i| if i == n { length } else { length * smoothstep(i as f64 / n as f64) }).collect()
}

fn v2(a: f64, b: f64) -> DVector<f64> {
    DVector::from_vec(vec![a, b])
}

/// A generic smooth curve in ℝ² on [0, 1].
pub fn curve_point(t: f64) -> DVector<f64> {
    v2(0.5 + 0.6 * t - 0.2 * t * t, 0.1 + 0.3 * (2.0 * t).sin())
}

/// A generic smooth vector field along [`curve_point`].
pub fn variation_point(t: f64) -> DVector<f64> {
    v2(0.3 * (3.0 * t).cos(), 0.4 + 0.2 * t)
}

pub fn sample(n: usize, length: f64, f: impl Fn(f64) -> DVector<f64>) -> Result<SampledPath<DVector<f64>>> {
    let pts = (0..=n).map(|i| f(length * i as f64 / n as f64)).collect();
    SampledPath::new(length, pts, 0)
}

pub fn curve(n: usize) -> Result<SampledPath<DVector<f64>>> {
    sample(n, 1.0, curve_point)
}

pub fn variation(n: usize) -> Result<SampledPath<DVector<f64>>> {
    sample(n, 1.0, variation_point)
}

/// Γ(s, t) on [0, 1]²: a family of curves moving transversally, with the
/// initial point moving as well.
pub fn surface_point(s: f64, t: f64) -> DVector<f64> {
    let c = curve_point(t);
    v2(c[0] + 0.4 * s * (PI * t).sin() + 0.1 * s * s, c[1] + 0.3 * s * (1.0 + 0.5 * t).cos() - 0.1 * s * t)
}

pub fn surface_from(m: usize, n: usize, f: impl Fn(f64, f64) -> DVector<f64>) -> Result<SampledSurface<DVector<f64>>> {
    let rows = (0..=m)
        .map(|i| sample(n, 1.0, |t| f(i as f64 / m as f64, t)))
        .collect::<Result<Vec<_>>>()?;
    SampledSurface::new(1.0, rows, 0)
}

pub fn surface(m: usize, n: usize) -> Result<SampledSurface<DVector<f64>>> {
    surface_from(m, n, surface_point)
}

type BasePath = SampledPath<DVector<f64>>;

/// The two halves of [`curve`], each with `n` cells.
pub fn split_curve(n: usize) -> Result<(BasePath, BasePath)> {
    Ok((sample(n, 0.5, curve_point)?, sample(n, 0.5, |t| curve_point(0.5 + t))?))
}

/// A spur of `cells` cells with step `step` leaving the point `at`.
pub fn spur(at: &DVector<f64>, cells: usize, step: f64) -> Result<SampledPath<DVector<f64>>> {
    let at = at.clone();
    sample(cells, step * cells as f64, move |t| &at + v2(0.3 * (2.0 * t).sin(), 0.2 * t - 0.4 * t * t))
}

/// The band s ∈ [s0, s1] of [`surface_point`] with `m` s-cells, so that
/// adjacent bands share their boundary rows exactly.
pub fn surface_band(m: usize, n: usize, s0: f64, s1: f64) -> Result<SampledSurface<DVector<f64>>> {
    let rows = (0..=m)
        .map(|i| {
            let s = if i == m { s1 } else { s0 + (s1 - s0) * i as f64 / m as f64 };
            sample(n, 1.0, |t| surface_point(s, t))
        })
        .collect::<Result<Vec<_>>>()?;
    SampledSurface::new(s1 - s0, rows, 0)
}

/// Non-uniform speed profile on [0, 1].
fn speed_profile(t: f64) -> f64 {
    t + 0.2 * (PI * t).sin() / PI
}

/// Straight segment from (−0.3, 0.2) to (0.9, 0.7) traversed with
/// non-uniform speed.
pub fn segment_point(t: f64) -> DVector<f64> {
    let s = speed_profile(t);
    v2(-0.3 + 1.2 * s, 0.2 + 0.5 * s)
}

/// Thin family Γ(u, v) = γ(v + 0.1·u·sin(πv)) over the segment: every row
/// retraces the same image with fixed endpoints.
pub fn thin_family(m: usize, n: usize) -> Result<SampledSurface<DVector<f64>>> {
    surface_from(m, n, |u, v| segment_point(v + 0.1 * u * (PI * v).sin()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitions_fix_endpoints() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        assert_eq!(flat_step(0.0), 0.0);
        assert_eq!(flat_step(1.0), 1.0);
        assert!((flat_step(0.5) - 0.5).abs() < 1e-15);
        let g = smoothstep_grid(10, 2.0);
        assert_eq!((g[0], g[10]), (0.0, 2.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn thin_family_keeps_endpoints() {
        let s = thin_family(8, 20).unwrap();
        for i in 0..=8 {
            assert_eq!(s.at(i, 0), s.at(0, 0));
            assert!((s.at(i, 20) - s.at(0, 20)).amax() < 1e-15);
        }
    }
}
