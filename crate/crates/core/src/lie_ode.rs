//! Exponential stepping for ODEs on matrix Lie groups and the surface
//! functionals built from it.
//!
//! Every solve multiplies one factor exp(Δ·Xₖ) per grid cell, so splitting a
//! solve at a grid line and multiplying the pieces reproduces the whole
//! solve. This is what turns composition laws into round-off level checks.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{AlgebraElement, GroupElement, GroupModel};

/// Right-hand side values, one per grid cell (evaluated at cell midpoints),
/// with the grid step.
#[derive(Clone, Debug)]
pub struct AlgebraSampler {
    pub values: Vec<AlgebraElement>,
    pub step: f64,
}

impl AlgebraSampler {
    pub fn new(values: Vec<AlgebraElement>, step: f64) -> Self {
        Self { values, step }
    }

    /// Samples `f` at the midpoints of `cells` cells of [0, cells·step].
    pub fn from_fn(cells: usize, step: f64, f: impl Fn(f64) -> Result<AlgebraElement>) -> Result<Self> {
        let values = (0..cells).map(|k| f((k as f64 + 0.5) * step)).collect::<Result<Vec<_>>>()?;
        Ok(Self { values, step })
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }

    /// The sub-sampler of cells `from..to`.
    pub fn slice(&self, from: usize, to: usize) -> Self {
        Self { values: self.values[from..to].to_vec(), step: self.step }
    }
}

/// Solves w⁻¹w′ = X(t), w(0) = e by w_{k+1} = w_k·exp(Δ·X_k).
pub fn solve_left_ode(model: &GroupModel, rhs: &AlgebraSampler) -> Result<Vec<GroupElement>> {
    solve_left_ode_from(model, &model.identity(), rhs)
}

/// As [`solve_left_ode`] with initial value `w0`.
pub fn solve_left_ode_from(model: &GroupModel, w0: &GroupElement, rhs: &AlgebraSampler) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(rhs.cells() + 1);
    out.push(w0.clone());
    for x in &rhs.values {
        let f = model.exp(&x.scale(rhs.step))?;
        let next = model.multiply(out.last().expect("non-empty"), &f)?;
        out.push(next);
    }
    Ok(out)
}

/// Solves w′w⁻¹ = X(t), w(0) = w0 by w_{k+1} = exp(Δ·X_k)·w_k.
pub fn solve_right_ode_from(model: &GroupModel, w0: &GroupElement, rhs: &AlgebraSampler) -> Result<Vec<GroupElement>> {
    let mut out = Vec::with_capacity(rhs.cells() + 1);
    out.push(w0.clone());
    for x in &rhs.values {
        let f = model.exp(&x.scale(rhs.step))?;
        let next = model.multiply(&f, out.last().expect("non-empty"))?;
        out.push(next);
    }
    Ok(out)
}

/// Surface functional w_C: for each s-cell i the exponent is
/// X_i = −Σ_j cell(i, j), where `cell` returns the midpoint-rule
/// contribution of the t-cell j (already scaled by the cell's extent), and
/// w_{i+1} = w_i·exp(X_i). Returns all w_i; the last one is w_C.
pub fn w_c<F>(model: &GroupModel, s_cells: usize, t_cells: usize, cell: F) -> Result<Vec<GroupElement>>
where
    F: Fn(usize, usize) -> Result<AlgebraElement> + Sync,
{
    if s_cells < 2 || t_cells < 2 {
        return Err(Error::Grid(format!("surface functional needs at least 2×2 cells, got {s_cells}×{t_cells}")));
    }
    let exponents = (0..s_cells)
        .into_par_iter()
        .map(|i| {
            let mut acc = model.zero_algebra();
            for j in 0..t_cells {
                acc = &acc - &cell(i, j)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    solve_left_ode(model, &AlgebraSampler::new(exponents, 1.0))
}

/// w_{C,0} = w₀(source)·w_C·w₀(target)⁻¹.
pub fn w_c0(model: &GroupModel, w0_source: &GroupElement, wc: &GroupElement, w0_target: &GroupElement) -> Result<GroupElement> {
    model.multiply(&model.multiply(w0_source, wc)?, &model.inverse(w0_target)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_rhs_gives_identities() {
        let m = GroupModel::so(3).unwrap();
        let rhs = AlgebraSampler::new(vec![m.zero_algebra(); 10], 0.1);
        for w in solve_left_ode(&m, &rhs).unwrap() {
            assert_eq!(w, m.identity());
        }
    }

    #[test]
    fn constant_rhs_telescopes() {
        let m = GroupModel::so(3).unwrap();
        let x = m.algebra_from_slice(&[0.3, -0.2, 0.5]).unwrap();
        let rhs = AlgebraSampler::new(vec![x.clone(); 64], 2.0 / 64.0);
        let w = solve_left_ode(&m, &rhs).unwrap();
        let exact = m.exp(&x.scale(2.0)).unwrap();
        assert!(m.distance(w.last().unwrap(), &exact).unwrap() < 1e-12);
    }

    #[test]
    fn commuting_rhs_is_second_order() {
        let m = GroupModel::so(2).unwrap();
        // ∫₀¹ cos(3t) dt = sin(3)/3
        let exact = m.exp(&m.algebra_from_slice(&[3f64.sin() / 3.0]).unwrap()).unwrap();
        let err = |n: usize| {
            let rhs = AlgebraSampler::from_fn(n, 1.0 / n as f64, |t| m.algebra_from_slice(&[(3.0 * t).cos()])).unwrap();
            m.distance(solve_left_ode(&m, &rhs).unwrap().last().unwrap(), &exact).unwrap()
        };
        let ratio = err(100) / err(200);
        assert!((ratio - 4.0).abs() < 0.6, "{ratio}");
    }

    #[test]
    fn split_solve_is_bit_exact() {
        let m = GroupModel::so(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rhs = AlgebraSampler::new((0..40).map(|_| m.sample_algebra(&mut rng, 1.0)).collect(), 0.05);
        let full = solve_left_ode(&m, &rhs).unwrap();
        let mid = &full[17];
        let rest = solve_left_ode_from(&m, mid, &rhs.slice(17, 40)).unwrap();
        assert_eq!(rest.last(), full.last());
        let h = m.sample(&mut rng);
        let shifted = solve_left_ode_from(&m, &h, &rhs).unwrap();
        let expect = m.multiply(&h, full.last().unwrap()).unwrap();
        assert!(m.distance(shifted.last().unwrap(), &expect).unwrap() < 1e-14);
    }

    #[test]
    fn surface_functional_grid_and_trivial_cases() {
        let m = GroupModel::so(3).unwrap();
        assert!(matches!(w_c(&m, 1, 5, |_, _| Ok(m.zero_algebra())), Err(Error::Grid(_))));
        let w = w_c(&m, 4, 4, |_, _| Ok(m.zero_algebra())).unwrap();
        assert_eq!(w.last().unwrap(), &m.identity());
    }
}
