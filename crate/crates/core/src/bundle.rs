//! Connections on the trivial bundle ℝⁿ × G, horizontal lifts, variation
//! fields along horizontal paths and the pathspace connection form ω.
//!
//! Bundle points are pairs (x, g). A tangent vector (v, ġ) is described by
//! its base part v and its vertical part Ā(ṽ) = Ad(g⁻¹)ā(x)(v) + g⁻¹ġ.
//! Forms on the bundle are α(g⁻¹)-twists of base forms evaluated on
//! projected vectors.

use nalgebra::DVector;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::crossed::CrossedModule;
use crate::error::{Error, Result};
use crate::forms::{curvature, OneForm, TwoForm};
use crate::group::{AlgebraElement, GroupElement, GroupModel};
use crate::path::{erase_backtrack, reparametrize_to, BacktrackWindow, BundlePoint, SampledPath, SampledSurface, MATCH_TOL};
use crate::scenario::Scenario;

/// Tangent vector field along a horizontal path: base variation v(t) and
/// vertical part Ā(ṽ(t)) at every sample.
#[derive(Clone, Debug)]
pub struct VariationField {
    pub base: Vec<DVector<f64>>,
    pub vertical: Vec<AlgebraElement>,
    /// Set when the s-derivative was taken one-sided (boundary rows).
    pub one_sided: bool,
}

impl VariationField {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }
}

/// The data (A, Ā, B) on the trivial bundle for a crossed module.
#[derive(Clone, Debug)]
pub struct PathConnection {
    pub cm: CrossedModule,
    pub a: OneForm,
    pub abar: OneForm,
    pub b: TwoForm,
}

/// Residuals of the thin-homotopy conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct ThinReport {
    /// Motion of the lifted initial point in s.
    pub drift: f64,
    /// Largest 2×2 minor of the lifted t- and s-partials.
    pub minors: f64,
    /// Distance of each row from the Ā-lift of its base row from the shared
    /// initial point.
    pub rows: f64,
}

/// Residuals of the connection-form properties.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionReport {
    /// ω(ṽg) against Ad(g⁻¹)ω(ṽ).
    pub equivariance: f64,
    /// ω(Ỹ) against Y for vertical fields.
    pub vertical: f64,
}

/// Residuals of backtrack erasure.
#[derive(Clone, Debug, PartialEq)]
pub struct BacktrackReport {
    /// ω before against after erasure.
    pub omega: f64,
    /// Erased lift against the lift of the erased base path.
    pub lift: f64,
}

fn midpoint_vec(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    (a + b) * 0.5
}

/// Right translation (x, g) ↦ (x, g·h) of every sample.
pub fn right_translate(model: &GroupModel, p: &SampledPath<BundlePoint>, h: &GroupElement) -> Result<SampledPath<BundlePoint>> {
    p.map(|q| Ok(BundlePoint { x: q.x.clone(), g: model.multiply(&q.g, h)? }))
}

/// Base projection of a bundle path.
pub fn project(p: &SampledPath<BundlePoint>) -> Result<SampledPath<DVector<f64>>> {
    p.map(|q| Ok(q.x.clone()))
}

impl PathConnection {
    pub fn new(cm: CrossedModule, a: OneForm, abar: OneForm, b: TwoForm) -> Result<Self> {
        if a.model() != cm.g() || abar.model() != cm.g() || b.model() != cm.h() {
            return Err(Error::Domain("forms do not take values in the crossed module's algebras".into()));
        }
        if a.base_dim() != abar.base_dim() || a.base_dim() != b.base_dim() {
            return Err(Error::Domain("forms live on different base dimensions".into()));
        }
        Ok(Self { cm, a, abar, b })
    }

    pub fn from_scenario(s: &Scenario) -> Self {
        Self { cm: s.cm().clone(), a: s.forms.a.clone(), abar: s.forms.abar.clone(), b: s.forms.b.clone() }
    }

    pub fn g(&self) -> &GroupModel {
        self.cm.g()
    }

    /// Per-cell factors exp(−ā(x_mid)(Δx)).
    pub fn lift_factors(&self, gamma: &SampledPath<DVector<f64>>) -> Result<Vec<GroupElement>> {
        gamma
            .points()
            .windows(2)
            .map(|w| {
                let x = self.abar.eval(&midpoint_vec(&w[0], &w[1]), &(&w[1] - &w[0]))?;
                self.g().exp(&-x)
            })
            .collect()
    }

    /// Ā-horizontal lift solving ġ = −ā(γ′)g from the fiber value `g0`.
    pub fn lift_from(&self, gamma: &SampledPath<DVector<f64>>, g0: &GroupElement) -> Result<SampledPath<BundlePoint>> {
        let factors = self.lift_factors(gamma)?;
        let mut g = g0.clone();
        let mut pts = Vec::with_capacity(gamma.points().len());
        pts.push(BundlePoint { x: gamma.start().clone(), g: g.clone() });
        for (f, x) in factors.iter().zip(&gamma.points()[1..]) {
            g = self.g().multiply(f, &g)?;
            pts.push(BundlePoint { x: x.clone(), g: g.clone() });
        }
        SampledPath::new(gamma.length(), pts, gamma.margin())
    }

    /// Horizontal lift through the bundle point `u0` over γ(0).
    pub fn lift(&self, gamma: &SampledPath<DVector<f64>>, u0: &BundlePoint) -> Result<SampledPath<BundlePoint>> {
        let gap = (&u0.x - gamma.start()).amax();
        if gap > MATCH_TOL {
            return Err(Error::Fiber { distance: gap });
        }
        self.lift_from(gamma, &u0.g)
    }

    /// Largest ‖ā(x_mid)(Δx) + log(g_{k+1}g_k⁻¹)‖/h over cells.
    pub fn horizontality_residual(&self, lift: &SampledPath<BundlePoint>) -> Result<f64> {
        let h = lift.step();
        if h == 0.0 {
            return Ok(0.0);
        }
        let g = self.g();
        let mut worst = 0.0f64;
        for w in lift.points().windows(2) {
            let x = self.abar.eval(&midpoint_vec(&w[0].x, &w[1].x), &(&w[1].x - &w[0].x))?;
            let step = g.log_near_identity(&g.multiply(&w[1].g, &g.inverse(&w[0].g)?)?)?;
            worst = worst.max((&x + &step).norm_max() / h);
        }
        Ok(worst)
    }

    /// Curvature of Ā on base vectors.
    pub fn curvature(&self, x: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> Result<AlgebraElement> {
        curvature(&self.abar, x, v, w)
    }

    /// Ad(g_mid⁻¹)F(x_mid)(Δx, v_mid) for the cell (k, k+1).
    fn tangency_increment(&self, p: &BundlePoint, q: &BundlePoint, vp: &DVector<f64>, vq: &DVector<f64>) -> Result<AlgebraElement> {
        let g = self.g();
        let gm = g.midpoint(&p.g, &q.g)?;
        let f = self.curvature(&midpoint_vec(&p.x, &q.x), &(&q.x - &p.x), &midpoint_vec(vp, vq))?;
        g.ad(&g.inverse(&gm)?, &f)
    }

    /// Integrates the tangency condition along `lift` from the vertical value
    /// `vertical0`: Ā_{k+1} = Ā_k + Ad(g_mid⁻¹)F(x_mid)(Δx, v_mid).
    pub fn from_tangency(
        &self,
        lift: &SampledPath<BundlePoint>,
        base: Vec<DVector<f64>>,
        vertical0: AlgebraElement,
    ) -> Result<VariationField> {
        if base.len() != lift.points().len() {
            return Err(Error::Grid("variation and lift have different sample counts".into()));
        }
        let pts = lift.points();
        let mut vertical = Vec::with_capacity(base.len());
        vertical.push(vertical0);
        for k in 0..pts.len() - 1 {
            let inc = self.tangency_increment(&pts[k], &pts[k + 1], &base[k], &base[k + 1])?;
            let next = vertical.last().expect("non-empty") + &inc;
            vertical.push(next);
        }
        Ok(VariationField { base, vertical, one_sided: false })
    }

    /// Variation field of row `s_index` of a lifted surface: base part by
    /// central differences in s (one-sided on boundary rows, flagged), vertical
    /// part seeded from the fiber motion at t0 and continued by the
    /// tangency condition.
    pub fn variation_field(&self, surf: &SampledSurface<BundlePoint>, s_index: usize) -> Result<VariationField> {
        let m = surf.s_cells();
        if m == 0 || s_index > m {
            return Err(Error::Grid(format!("row {s_index} of a surface with {m} s-cells")));
        }
        let ds = surf.s_step();
        let (lo, hi, one_sided) = if s_index == 0 {
            (0, 1, true)
        } else if s_index == m {
            (m - 1, m, true)
        } else {
            (s_index - 1, s_index + 1, false)
        };
        let span = (hi - lo) as f64 * ds;
        let row = surf.row(s_index);
        let base: Vec<DVector<f64>> = (0..=surf.t_cells()).map(|j| (&surf.at(hi, j).x - &surf.at(lo, j).x) / span).collect();
        let g = self.g();
        let p0 = &row.points()[0];
        let rel = g.multiply(&g.inverse(&surf.at(lo, 0).g)?, &surf.at(hi, 0).g)?;
        let fiber = g.log_near_identity(&rel)?.scale(1.0 / span);
        let seed = &g.ad(&g.inverse(&p0.g)?, &self.abar.eval(&p0.x, &base[0])?)? + &fiber;
        let mut field = self.from_tangency(row, base, seed)?;
        field.one_sided = one_sided;
        Ok(field)
    }

    /// Largest deviation from d/dt Ā(ṽ) = F^Ā(γ̃′, ṽ), evaluated with central
    /// differences at interior samples.
    pub fn tangency_residual(&self, lift: &SampledPath<BundlePoint>, field: &VariationField) -> Result<f64> {
        let pts = lift.points();
        if field.len() != pts.len() {
            return Err(Error::Grid("variation and lift have different sample counts".into()));
        }
        let h = lift.step();
        let g = self.g();
        let mut worst = 0.0f64;
        for k in 1..pts.len().saturating_sub(1) {
            let dv = (&field.vertical[k + 1] - &field.vertical[k - 1]).scale(0.5 / h);
            let xt = (&pts[k + 1].x - &pts[k - 1].x) / (2.0 * h);
            let f = g.ad(&g.inverse(&pts[k].g)?, &self.curvature(&pts[k].x, &xt, &field.base[k])?)?;
            worst = worst.max((&dv - &f).norm_max());
        }
        Ok(worst)
    }

    /// Midpoint-rule Chen integral Σ α_alg(g_mid⁻¹) b(x_mid)(Δx, v_mid) in L(H).
    pub fn chen(&self, lift: &SampledPath<BundlePoint>, field: &VariationField) -> Result<AlgebraElement> {
        let g = self.g();
        let pts = lift.points();
        let mut acc = self.cm.h().zero_algebra();
        for k in 0..pts.len() - 1 {
            let (p, q) = (&pts[k], &pts[k + 1]);
            let bval = self.b.eval(&midpoint_vec(&p.x, &q.x), &(&q.x - &p.x), &midpoint_vec(&field.base[k], &field.base[k + 1]))?;
            if bval.norm_max() == 0.0 {
                continue;
            }
            let gm = g.midpoint(&p.g, &q.g)?;
            acc = &acc + &self.cm.alpha_alg(&g.inverse(&gm)?, &bval)?;
        }
        Ok(acc)
    }

    /// ω(ṽ) = A(ṽ(t0)) + τ_alg(∫B(γ̃′, ṽ)).
    pub fn omega(&self, lift: &SampledPath<BundlePoint>, field: &VariationField) -> Result<AlgebraElement> {
        if field.len() != lift.points().len() {
            return Err(Error::Grid("variation and lift have different sample counts".into()));
        }
        let g = self.g();
        let p0 = lift.start();
        let v0 = &field.base[0];
        let diff = &self.a.eval(&p0.x, v0)? - &self.abar.eval(&p0.x, v0)?;
        let first = &field.vertical[0] + &g.ad(&g.inverse(&p0.g)?, &diff)?;
        Ok(&first + &self.cm.tau_alg(&self.chen(lift, field)?)?)
    }

    /// Lift of a base surface whose rows are Ā-horizontal and whose s-motion
    /// is ω-horizontal. Row 0 is `gamma0_lift`; the initial fiber q(s) solves
    /// q′ = −(a(∂_sΓ(s, t0)) + τ_alg(Z(s)))·q with
    /// Z(s) = ∫ α_alg(T_s(t)⁻¹) b(∂_tΓ, ∂_sΓ) dt and T_s the identity-started
    /// Ā-lift of row s.
    pub fn surface_lift(&self, gamma: &SampledSurface<DVector<f64>>, gamma0_lift: &SampledPath<BundlePoint>) -> Result<SampledSurface<BundlePoint>> {
        let (m, n) = (gamma.s_cells(), gamma.t_cells());
        if gamma0_lift.cells() != n {
            return Err(Error::Grid("initial lift and surface rows differ in sample count".into()));
        }
        let gap = gamma0_lift
            .points()
            .iter()
            .zip(gamma.row(0).points())
            .map(|(p, x)| (&p.x - x).amax())
            .fold(0.0, f64::max);
        if gap > MATCH_TOL {
            return Err(Error::Fiber { distance: gap });
        }
        let g = self.g();
        if m == 0 {
            return SampledSurface::new(0.0, vec![gamma0_lift.clone()], 0);
        }
        let e = g.identity();
        let ds = gamma.s_step();
        let trans: Vec<SampledPath<BundlePoint>> =
            gamma.rows().par_iter().map(|row| self.lift_from(row, &e)).collect::<Result<Vec<_>>>()?;
        let x = |i: usize, j: usize| gamma.at(i, j);
        let ds_x = |i: usize, j: usize| -> DVector<f64> {
            if m == 1 {
                (x(1, j) - x(0, j)) / ds
            } else if i == 0 {
                (x(0, j) * -3.0 + x(1, j) * 4.0 - x(2, j)) / (2.0 * ds)
            } else if i == m {
                (x(m, j) * 3.0 - x(m - 1, j) * 4.0 + x(m - 2, j)) / (2.0 * ds)
            } else {
                (x(i + 1, j) - x(i - 1, j)) / (2.0 * ds)
            }
        };
        let z: Vec<AlgebraElement> = (0..=m)
            .into_par_iter()
            .map(|i| {
                let row = trans[i].points();
                let mut acc = self.cm.h().zero_algebra();
                for j in 0..n {
                    let vmid = midpoint_vec(&ds_x(i, j), &ds_x(i, j + 1));
                    let bval = self.b.eval(&midpoint_vec(x(i, j), x(i, j + 1)), &(x(i, j + 1) - x(i, j)), &vmid)?;
                    if bval.norm_max() == 0.0 {
                        continue;
                    }
                    let tm = g.midpoint(&row[j].g, &row[j + 1].g)?;
                    acc = &acc + &self.cm.alpha_alg(&g.inverse(&tm)?, &bval)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut q = vec![gamma0_lift.start().g.clone()];
        for i in 0..m {
            let aterm = self.a.eval(&midpoint_vec(x(i, 0), x(i + 1, 0)), &(x(i + 1, 0) - x(i, 0)))?;
            let zterm = self.cm.tau_alg(&(&z[i] + &z[i + 1]).scale(0.5 * ds))?;
            let f = g.exp(&-(&aterm + &zterm))?;
            q.push(g.multiply(&f, &q[i])?);
        }
        let mut rows = Vec::with_capacity(m + 1);
        rows.push(gamma0_lift.clone());
        for i in 1..=m {
            rows.push(right_translate(g, &trans[i], &q[i])?);
        }
        SampledSurface::new(gamma.s_length(), rows, 0)
    }

    /// Largest ‖ω(∂_sΓ̃)‖ over interior rows, with the s-derivative by
    /// central differences.
    pub fn surface_omega_residual(&self, surf: &SampledSurface<BundlePoint>) -> Result<f64> {
        let m = surf.s_cells();
        let worst = (1..m)
            .into_par_iter()
            .map(|i| {
                let field = self.variation_field(surf, i)?;
                Ok(self.omega(surf.row(i), &field)?.norm_max())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(worst.into_iter().fold(0.0, f64::max))
    }

    /// Lifts a family Γ(u, ·) whose end columns stay fixed and reports the
    /// thin-homotopy residuals together with the lifted surface.
    pub fn check_thin_homotopy(&self, gamma: &SampledSurface<DVector<f64>>, u0: &BundlePoint) -> Result<(ThinReport, SampledSurface<BundlePoint>)> {
        let (m, n) = (gamma.s_cells(), gamma.t_cells());
        for j in [0, n] {
            let motion = (0..=m).map(|i| (gamma.at(i, j) - gamma.at(0, j)).amax()).fold(0.0, f64::max);
            if motion > 1e-12 {
                return Err(Error::Fixture(format!("endpoint column {j} moves by {motion:.3e}")));
            }
        }
        let row0 = self.lift(gamma.row(0), u0)?;
        let surf = self.surface_lift(gamma, &row0)?;
        let g = self.g();
        let q0 = &surf.at(0, 0).g;
        let drift = (0..=m).map(|i| g.distance(&surf.at(i, 0).g, q0)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
        let dt = gamma.t_step();
        let minors = (1..m)
            .into_par_iter()
            .map(|i| {
                let field = self.variation_field(&surf, i)?;
                let mut worst = 0.0f64;
                for j in 0..n {
                    let xt = (&surf.at(i, j + 1).x - &surf.at(i, j).x) / dt;
                    let vs = midpoint_vec(&field.base[j], &field.base[j + 1]);
                    let ys = (&field.vertical[j] + &field.vertical[j + 1]).scale(0.5);
                    let p: Vec<f64> = xt.iter().copied().chain(std::iter::repeat_n(0.0, ys.coeffs().len())).collect();
                    let q: Vec<f64> = vs.iter().copied().chain(ys.coeffs().iter().copied()).collect();
                    for a in 0..p.len() {
                        for b in a + 1..p.len() {
                            worst = worst.max((p[a] * q[b] - p[b] * q[a]).abs());
                        }
                    }
                }
                Ok(worst)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let mut rows = 0.0f64;
        for i in 0..=m {
            let direct = self.lift_from(gamma.row(i), q0)?;
            rows = rows.max(direct.max_diff(surf.row(i)));
        }
        Ok((ThinReport { drift, minors, rows }, surf))
    }

    /// ω(ṽg) against Ad(g⁻¹)ω(ṽ), and ω(Ỹ) against Y, over seeded samples.
    pub fn check_connection_properties(
        &self,
        lift: &SampledPath<BundlePoint>,
        field: &VariationField,
        samples: usize,
        seed: u64,
    ) -> Result<ConnectionReport> {
        let g = self.g();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = self.omega(lift, field)?;
        let mut equivariance = 0.0f64;
        let mut vertical = 0.0f64;
        let zero = DVector::zeros(lift.start().x.len());
        for _ in 0..samples {
            let h = g.sample(&mut rng);
            let hi = g.inverse(&h)?;
            let moved = right_translate(g, lift, &h)?;
            let vert = field.vertical.iter().map(|y| g.ad(&hi, y)).collect::<Result<Vec<_>>>()?;
            let moved_field = VariationField { base: field.base.clone(), vertical: vert, one_sided: field.one_sided };
            let lhs = self.omega(&moved, &moved_field)?;
            equivariance = equivariance.max(lhs.distance(&g.ad(&hi, &base)?));

            let y = g.sample_algebra(&mut rng, 1.0);
            let vf = VariationField { base: vec![zero.clone(); lift.points().len()], vertical: vec![y.clone(); lift.points().len()], one_sided: false };
            vertical = vertical.max(self.omega(lift, &vf)?.distance(&y));
        }
        Ok(ConnectionReport { equivariance, vertical })
    }

    /// |ω(ṽ) − ω(ṽ∘φ)|: both fields are integrated from the same vertical
    /// value along lifts from the same fiber point; `phi` maps a grid of
    /// [0, new_length] into the domain of γ.
    pub fn reparam_residual(
        &self,
        gamma: &SampledPath<DVector<f64>>,
        v: &SampledPath<DVector<f64>>,
        g0: &GroupElement,
        y0: &AlgebraElement,
        phi: &[f64],
        new_length: f64,
    ) -> Result<f64> {
        let lift = self.lift_from(gamma, g0)?;
        let field = self.from_tangency(&lift, v.points().to_vec(), y0.clone())?;
        let w1 = self.omega(&lift, &field)?;
        let gp = reparametrize_to(gamma, phi, new_length)?;
        let vp = reparametrize_to(v, phi, new_length)?;
        let lift_p = self.lift_from(&gp, g0)?;
        let field_p = self.from_tangency(&lift_p, vp.points().to_vec(), y0.clone())?;
        Ok(w1.distance(&self.omega(&lift_p, &field_p)?))
    }

    /// ω before and after erasing a mirror window from the base path and the
    /// base variation, and the erased lift against the lift of the erased
    /// path.
    pub fn backtrack_residual(
        &self,
        gamma: &SampledPath<DVector<f64>>,
        v: &SampledPath<DVector<f64>>,
        window: BacktrackWindow,
        g0: &GroupElement,
        y0: &AlgebraElement,
    ) -> Result<BacktrackReport> {
        let lift = self.lift_from(gamma, g0)?;
        let field = self.from_tangency(&lift, v.points().to_vec(), y0.clone())?;
        let before = self.omega(&lift, &field)?;
        let ge = erase_backtrack(gamma, window)?;
        let ve = erase_backtrack(v, window)?;
        let lift_e = self.lift_from(&ge, g0)?;
        let field_e = self.from_tangency(&lift_e, ve.points().to_vec(), y0.clone())?;
        let after = self.omega(&lift_e, &field_e)?;
        let erased_lift = erase_backtrack(&lift, window)?;
        Ok(BacktrackReport { omega: before.distance(&after), lift: erased_lift.max_diff(&lift_e) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::path::insert_backtrack;
    use crate::scenario::scenario;

    fn conn(name: &str) -> PathConnection {
        PathConnection::from_scenario(&scenario(name).unwrap())
    }

    fn seeded(model: &GroupModel, seed: u64) -> (GroupElement, AlgebraElement) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (model.sample(&mut rng), model.sample_algebra(&mut rng, 0.5))
    }

    #[test]
    fn zero_abar_keeps_the_fiber_constant() {
        let c = conn("so2_area");
        let (g0, _) = seeded(c.g(), 1);
        let lift = c.lift_from(&fixtures::curve(50).unwrap(), &g0).unwrap();
        assert!(lift.points().iter().all(|p| p.g == g0));
        assert_eq!(c.horizontality_residual(&lift).unwrap(), 0.0);
    }

    #[test]
    fn constant_abelian_abar_lifts_in_closed_form() {
        let so2 = GroupModel::so(2).unwrap();
        let (k1, k2) = (0.7, -0.4);
        let abar = OneForm::affine(so2.clone(), vec![vec![k1], vec![k2]], vec![vec![vec![0.0]; 2]; 2]).unwrap();
        let cm = CrossedModule::conjugation(so2.clone());
        let c = PathConnection::new(cm, OneForm::zero(so2.clone(), 2), abar, TwoForm::zero(so2.clone(), 2)).unwrap();
        let gamma = fixtures::curve(40).unwrap();
        let lift = c.lift_from(&gamma, &so2.identity()).unwrap();
        let d = gamma.end() - gamma.start();
        let expected = so2.exp(&so2.algebra_from_slice(&[-(k1 * d[0] + k2 * d[1])]).unwrap()).unwrap();
        assert!(lift.end().g.max_diff(&expected) < 1e-13);
    }

    #[test]
    fn lift_rejects_a_foreign_start() {
        let c = conn("so3_conj");
        let gamma = fixtures::curve(10).unwrap();
        let u0 = BundlePoint { x: gamma.start() + DVector::from_vec(vec![1.0, 0.0]), g: c.g().identity() };
        assert!(matches!(c.lift(&gamma, &u0), Err(Error::Fiber { .. })));
    }

    #[test]
    fn omega_is_equivariant_and_reproduces_vertical_fields() {
        for name in ["so3_conj", "so3_r3"] {
            let c = conn(name);
            let (g0, y0) = seeded(c.g(), 2);
            let lift = c.lift_from(&fixtures::curve(60).unwrap(), &g0).unwrap();
            let field = c.from_tangency(&lift, fixtures::variation(60).unwrap().points().to_vec(), y0).unwrap();
            let rep = c.check_connection_properties(&lift, &field, 10, 3).unwrap();
            assert!(rep.equivariance < 1e-12, "{name}: {rep:?}");
            assert!(rep.vertical < 1e-12, "{name}: {rep:?}");
        }
    }

    #[test]
    fn erasing_a_backtrack_is_exact() {
        let c = conn("so3_conj");
        let (g0, y0) = seeded(c.g(), 4);
        let (gamma, v) = (fixtures::curve(40).unwrap(), fixtures::variation(40).unwrap());
        let (gb, w) = insert_backtrack(&gamma, 15, &fixtures::spur(&gamma.points()[15], 6, gamma.step()).unwrap()).unwrap();
        let (vb, _) = insert_backtrack(&v, 15, &fixtures::spur(&v.points()[15], 6, v.step()).unwrap()).unwrap();
        let rep = c.backtrack_residual(&gb, &vb, w, &g0, &y0).unwrap();
        assert!(rep.omega < 1e-12 && rep.lift < 1e-12, "{rep:?}");
    }

    #[test]
    fn affine_dilation_leaves_omega_unchanged() {
        let c = conn("so3_conj");
        let (g0, y0) = seeded(c.g(), 5);
        let n = 50;
        let phi: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let r = c.reparam_residual(&fixtures::curve(n).unwrap(), &fixtures::variation(n).unwrap(), &g0, &y0, &phi, 2.0).unwrap();
        assert!(r < 1e-12, "{r:e}");
    }

    #[test]
    fn tangency_holds_to_second_order() {
        let c = conn("so3_conj");
        let (g0, y0) = seeded(c.g(), 6);
        let res = |n: usize| {
            let lift = c.lift_from(&fixtures::curve(n).unwrap(), &g0).unwrap();
            let field = c.from_tangency(&lift, fixtures::variation(n).unwrap().points().to_vec(), y0.clone()).unwrap();
            c.tangency_residual(&lift, &field).unwrap()
        };
        let (r1, r2) = (res(50), res(100));
        assert!(r2 < 1e-3);
        assert!((r1 / r2).log2() > 1.7, "{r1:e} {r2:e}");
    }

    #[test]
    fn surface_variation_fields_match_finite_differences() {
        let c = conn("so3_conj");
        let (g0, _) = seeded(c.g(), 7);
        let (m, n) = (40, 40);
        let gamma = fixtures::surface(m, n).unwrap();
        let row0 = c.lift_from(gamma.row(0), &g0).unwrap();
        let surf = c.surface_lift(&gamma, &row0).unwrap();
        let i = m / 2;
        let field = c.variation_field(&surf, i).unwrap();
        assert!(!field.one_sided && c.variation_field(&surf, 0).unwrap().one_sided);
        let g = c.g();
        let ds = surf.s_step();
        let mut worst = 0.0f64;
        for j in 0..=n {
            let (p, lo, hi) = (surf.at(i, j), surf.at(i - 1, j), surf.at(i + 1, j));
            let fiber = g.log_near_identity(&g.multiply(&g.inverse(&lo.g).unwrap(), &hi.g).unwrap()).unwrap().scale(0.5 / ds);
            let fiber = g.ad(&g.multiply(&g.inverse(&p.g).unwrap(), &lo.g).unwrap(), &fiber).unwrap();
            let expected = &g.ad(&g.inverse(&p.g).unwrap(), &c.abar.eval(&p.x, &field.base[j]).unwrap()).unwrap() + &fiber;
            worst = worst.max(field.vertical[j].distance(&expected));
        }
        assert!(worst < 5e-3, "{worst:e}");
    }
}
