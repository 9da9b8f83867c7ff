//! Decorated morphisms (γ̃, h), categorical connections, the k*/κ* maps and
//! doubly decorated transport of decorated paths along paths of paths.
//!
//! A decorated morphism has source s(γ̃) and target t(γ̃)·τ(h⁻¹). The group
//! H ⋊ G acts on the right by (γ̃, h)·(h₁, g₁) = (γ̃g₁, α(g₁⁻¹)(h₁⁻¹h)).
//! Doubly decorated morphisms (Γ̃, h, k) carry an extra K-decoration for a
//! second crossed module whose object group is H ⋊ G.

use std::fmt;

use nalgebra::DVector;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{right_translate, PathConnection};
use crate::crossed::{CrossedModule, DoubleModule, Morphism2, MATCH_TOL};
use crate::error::{Error, Result};
use crate::forms::{GroupField, OneForm, TwoForm};
use crate::group::{AlgebraElement, GroupElement, GroupModel};
use crate::lie_ode::{self, AlgebraSampler};
use crate::path::{compose_paths, vertical_compose, BundlePoint, PathPoint, SampledPath, SampledSurface};
use crate::scenario::Scenario;

/// Horizontality tolerance for decorated morphisms.
pub const HORIZONTAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct DecoratedMorphism {
    pub lift: SampledPath<BundlePoint>,
    pub h: GroupElement,
}

impl DecoratedMorphism {
    /// Checks that `lift` is Ā-horizontal within [`HORIZONTAL_TOL`].
    pub fn new(conn: &PathConnection, lift: SampledPath<BundlePoint>, h: GroupElement) -> Result<Self> {
        let r = conn.horizontality_residual(&lift)?;
        if r > HORIZONTAL_TOL {
            return Err(Error::Domain(format!("path is not horizontal (residual {r:.3e})")));
        }
        conn.cm.h().distance(&h, &h)?;
        Ok(Self { lift, h })
    }

    pub fn source(&self) -> &BundlePoint {
        self.lift.start()
    }

    /// t(γ̃)·τ(h⁻¹).
    pub fn target(&self, cm: &CrossedModule) -> Result<BundlePoint> {
        let end = self.lift.end();
        let shift = cm.tau(&cm.h().inverse(&self.h)?)?;
        Ok(BundlePoint { x: end.x.clone(), g: cm.g().multiply(&end.g, &shift)? })
    }

    /// Max distance of paths and decorations.
    pub fn distance(&self, other: &Self, cm: &CrossedModule) -> Result<f64> {
        Ok(self.lift.max_diff(&other.lift).max(cm.h().distance(&self.h, &other.h)?))
    }
}

/// (γ̃₂, h₂)∘(γ̃₁, h₁) = (γ̃₂τ(h₁)∘γ̃₁, h₂h₁).
pub fn dec_compose(cm: &CrossedModule, m2: &DecoratedMorphism, m1: &DecoratedMorphism) -> Result<DecoratedMorphism> {
    let gap = m1.target(cm)?.max_diff(m2.source());
    if gap > MATCH_TOL {
        return Err(Error::Composition { distance: gap });
    }
    let shifted = right_translate(cm.g(), &m2.lift, &cm.tau(&m1.h)?)?;
    Ok(DecoratedMorphism { lift: compose_paths(&m1.lift, &shifted)?, h: cm.h().multiply(&m2.h, &m1.h)? })
}

/// (γ̃, h)·(h₁, g₁) = (γ̃g₁, α(g₁⁻¹)(h₁⁻¹h)).
pub fn dec_right_action(cm: &CrossedModule, m: &DecoratedMorphism, h1: &GroupElement, g1: &GroupElement) -> Result<DecoratedMorphism> {
    let (g, h) = (cm.g(), cm.h());
    Ok(DecoratedMorphism {
        lift: right_translate(g, &m.lift, g1)?,
        h: cm.alpha(&g.inverse(g1)?, &h.multiply(&h.inverse(h1)?, &m.h)?)?,
    })
}

/// The element (h₁, g₁) with m·(h₁, g₁) = m0 for decorated morphisms over
/// the same base path: g₁ = g(γ̃)⁻¹g(γ̃₀) at the initial point and
/// h₁ = h·α(g₁)(h₀⁻¹).
pub fn connecting_element(cm: &CrossedModule, m: &DecoratedMorphism, m0: &DecoratedMorphism) -> Result<Morphism2> {
    let (g, h) = (cm.g(), cm.h());
    let g1 = g.multiply(&g.inverse(&m.source().g)?, &m0.source().g)?;
    let h1 = h.multiply(&m.h, &cm.alpha(&g1, &h.inverse(&m0.h)?)?)?;
    Ok(Morphism2 { h: h1, a: g1 })
}

/// Morphism (h, a) written as θ·1_a with θ = (h, e) in the kernel of s.
pub fn to_theta(cm: &CrossedModule, m: &Morphism2) -> Morphism2 {
    Morphism2 { h: m.h.clone(), a: cm.g().identity() }
}

/// Action in θ-notation: θ ↦ φ⁻¹·θ·1_{s(φ)}.
pub fn theta_action(cm: &CrossedModule, theta: &Morphism2, phi: &Morphism2) -> Result<Morphism2> {
    let left = cm.mor_product(&cm.mor_inverse(phi)?, theta)?;
    cm.mor_product(&left, &cm.identity_mor(&phi.a))
}

/// Embedding of undecorated horizontal paths: γ̃ ↦ (γ̃, e).
pub fn reduce(cm: &CrossedModule, lift: &SampledPath<BundlePoint>) -> DecoratedMorphism {
    DecoratedMorphism { lift: lift.clone(), h: cm.h().identity() }
}

/// A lifting of base paths to decorated morphisms.
pub trait CategoricalConnection: Send + Sync {
    fn cm(&self) -> &CrossedModule;
    fn lift(&self, gamma: &SampledPath<DVector<f64>>, u: &BundlePoint) -> Result<DecoratedMorphism>;
}

/// Undecorated Ā-transport: decoration e.
#[derive(Clone, Debug)]
pub struct UndecoratedLift {
    pub conn: PathConnection,
}

impl CategoricalConnection for UndecoratedLift {
    fn cm(&self) -> &CrossedModule {
        &self.conn.cm
    }

    fn lift(&self, gamma: &SampledPath<DVector<f64>>, u: &BundlePoint) -> Result<DecoratedMorphism> {
        Ok(reduce(&self.conn.cm, &self.conn.lift(gamma, u)?))
    }
}

/// L(H)-valued 1-form on the bundle.
#[derive(Clone, Debug)]
pub enum BundleOneForm {
    /// α(g⁻¹)-twist of a base form: C(x, g)(ṽ) = α_alg(g⁻¹)c(x)(π ṽ).
    Twisted(OneForm),
    /// (dΦ)Φ⁻¹ for the equivariant extension Φ(x, g) = α(g⁻¹)Φ(x), by
    /// central differences with step [`crate::forms::FD_STEP`].
    LogDerivative(GroupField),
}

/// Categorical connection from a 1-form C: the decoration solves
/// h⁻¹h′ = −C(γ̃′), h(t0) = e.
#[derive(Clone, Debug)]
pub struct FormLift {
    pub conn: PathConnection,
    pub form: BundleOneForm,
}

fn bundle_phi(cm: &CrossedModule, phi: &GroupField, x: &DVector<f64>, g: &GroupElement) -> Result<GroupElement> {
    cm.alpha(&cm.g().inverse(g)?, &phi.eval(x)?)
}

impl FormLift {
    /// C on the cell (p, q) of a horizontal lift, integrated over the cell.
    fn cell_value(&self, p: &BundlePoint, q: &BundlePoint) -> Result<AlgebraElement> {
        let cm = &self.conn.cm;
        let g = cm.g();
        let gm = g.midpoint(&p.g, &q.g)?;
        let xm = (&p.x + &q.x) * 0.5;
        let dx = &q.x - &p.x;
        match &self.form {
            BundleOneForm::Twisted(c) => cm.alpha_alg(&g.inverse(&gm)?, &c.eval(&xm, &dx)?),
            BundleOneForm::LogDerivative(phi) => {
                let scale = dx.amax();
                if scale == 0.0 {
                    return Ok(cm.h().zero_algebra());
                }
                let dir = &dx / scale;
                let xi = g.ad(&g.inverse(&gm)?, &self.conn.abar.eval(&xm, &dir)?)?.scale(-1.0);
                let eps = crate::forms::FD_STEP;
                let at = |s: f64| -> Result<GroupElement> {
                    let gx = g.multiply(&gm, &g.exp(&xi.scale(s))?)?;
                    bundle_phi(cm, phi, &(&xm + &dir * s), &gx)
                };
                let (plus, minus) = (at(eps)?, at(-eps)?);
                let h = cm.h();
                Ok(h.log_near_identity(&h.multiply(&plus, &h.inverse(&minus)?)?)?.scale(scale / (2.0 * eps)))
            }
        }
    }
}

impl CategoricalConnection for FormLift {
    fn cm(&self) -> &CrossedModule {
        &self.conn.cm
    }

    fn lift(&self, gamma: &SampledPath<DVector<f64>>, u: &BundlePoint) -> Result<DecoratedMorphism> {
        let lift = self.conn.lift(gamma, u)?;
        let values = lift
            .points()
            .windows(2)
            .map(|w| Ok(self.cell_value(&w[0], &w[1])?.scale(-1.0)))
            .collect::<Result<Vec<_>>>()?;
        let hs = lie_ode::solve_left_ode(self.conn.cm.h(), &AlgebraSampler::new(values, 1.0))?;
        Ok(DecoratedMorphism { lift, h: hs.last().expect("non-empty").clone() })
    }
}

/// Categorical connection from an equivariant H-valued function Φ: the
/// decoration is Φ(u)Φ(v)⁻¹ with v the end of the horizontal lift through u.
#[derive(Clone, Debug)]
pub struct PhiLift {
    pub conn: PathConnection,
    pub phi: GroupField,
}

impl CategoricalConnection for PhiLift {
    fn cm(&self) -> &CrossedModule {
        &self.conn.cm
    }

    fn lift(&self, gamma: &SampledPath<DVector<f64>>, u: &BundlePoint) -> Result<DecoratedMorphism> {
        let cm = &self.conn.cm;
        let lift = self.conn.lift(gamma, u)?;
        let end = lift.end();
        let pu = bundle_phi(cm, &self.phi, &u.x, &u.g)?;
        let pv = bundle_phi(cm, &self.phi, &end.x, &end.g)?;
        let h = cm.h().multiply(&pu, &cm.h().inverse(&pv)?)?;
        Ok(DecoratedMorphism { lift, h })
    }
}

/// Residuals of the axioms of a categorical connection.
#[derive(Clone, Debug, PartialEq)]
pub struct HorliftReport {
    /// π∘lift against the base path.
    pub projection: f64,
    /// lift(γ₂∘γ₁) against lift(γ₂)∘lift(γ₁).
    pub functoriality: f64,
    /// lift(u·g) against lift(u)·1_g.
    pub equivariance: f64,
}

impl HorliftReport {
    pub fn max(&self) -> f64 {
        self.projection.max(self.functoriality).max(self.equivariance)
    }
}

/// Projection, functoriality on the composable pair (γ₁, γ₂) and
/// equivariance over seeded group samples.
pub fn check_horlift_axioms(
    lifter: &dyn CategoricalConnection,
    gamma1: &SampledPath<DVector<f64>>,
    gamma2: &SampledPath<DVector<f64>>,
    u: &BundlePoint,
    samples: usize,
    seed: u64,
) -> Result<HorliftReport> {
    let cm = lifter.cm();
    let m1 = lifter.lift(gamma1, u)?;
    let projection = m1
        .lift
        .points()
        .iter()
        .zip(gamma1.points())
        .map(|(p, x)| (&p.x - x).amax())
        .fold(0.0, f64::max);
    let m2 = lifter.lift(gamma2, &m1.target(cm)?)?;
    let whole = lifter.lift(&compose_paths(gamma1, gamma2)?, u)?;
    let functoriality = whole.distance(&dec_compose(cm, &m2, &m1)?, cm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equivariance = 0.0f64;
    for _ in 0..samples {
        let g = cm.g().sample(&mut rng);
        let moved = lifter.lift(gamma1, &BundlePoint { x: u.x.clone(), g: cm.g().multiply(&u.g, &g)? })?;
        let acted = dec_right_action(cm, &m1, &cm.h().identity(), &g)?;
        equivariance = equivariance.max(moved.distance(&acted, cm)?);
    }
    Ok(HorliftReport { projection, functoriality, equivariance })
}

/// The k* map built from L(K)-valued forms C₁ and C₂.
#[derive(Clone, Debug)]
pub struct KStarForms {
    pub double: DoubleModule,
    pub c1: OneForm,
    pub c2: TwoForm,
}

impl KStarForms {
    pub fn from_scenario(s: &Scenario) -> Self {
        Self { double: s.double.clone(), c1: s.forms.c1.clone(), c2: s.forms.c2.clone() }
    }

    fn k(&self) -> &GroupModel {
        self.double.k()
    }

    /// Ad_K(ι(e, g)⁻¹) applied to an L(K) element.
    fn twist(&self, g: &GroupElement, z: &AlgebraElement) -> Result<AlgebraElement> {
        let gm = self.double.base().g();
        let iota = self.double.embed(&self.double.base().h().identity(), &gm.inverse(g)?)?;
        self.k().ad(&iota, z)
    }

    /// w₀ along a horizontal path: solution of w⁻¹w′ = −C₁(γ̃′) from e.
    pub fn w0(&self, lift: &SampledPath<BundlePoint>) -> Result<GroupElement> {
        let gm = self.double.base().g();
        let values = lift
            .points()
            .windows(2)
            .map(|w| {
                let mid = gm.midpoint(&w[0].g, &w[1].g)?;
                let c = self.c1.eval(&((&w[0].x + &w[1].x) * 0.5), &(&w[1].x - &w[0].x))?;
                Ok(self.twist(&mid, &c)?.scale(-1.0))
            })
            .collect::<Result<Vec<_>>>()?;
        let ws = lie_ode::solve_left_ode(self.k(), &AlgebraSampler::new(values, 1.0))?;
        Ok(ws.last().expect("non-empty").clone())
    }

    /// All values of w_{C₂} along s, with the integrand C₂(∂_tΓ̃, ∂_sΓ̃) by
    /// the midpoint rule on each grid cell.
    pub fn w_c2_solution(&self, surf: &SampledSurface<BundlePoint>) -> Result<Vec<GroupElement>> {
        let gm = self.double.base().g();
        lie_ode::w_c(self.k(), surf.s_cells(), surf.t_cells(), |i, j| {
            let (p00, p01, p10, p11) = (surf.at(i, j), surf.at(i, j + 1), surf.at(i + 1, j), surf.at(i + 1, j + 1));
            let xm = (&p00.x + &p01.x + &p10.x + &p11.x) * 0.25;
            let dt = ((&p01.x - &p00.x) + (&p11.x - &p10.x)) * 0.5;
            let ds = ((&p10.x - &p00.x) + (&p11.x - &p01.x)) * 0.5;
            let c = self.c2.eval(&xm, &dt, &ds)?;
            if c.norm_max() == 0.0 {
                return Ok(c);
            }
            self.twist(&gm.midpoint(&p00.g, &p11.g)?, &c)
        })
    }

    pub fn w_c2(&self, surf: &SampledSurface<BundlePoint>) -> Result<GroupElement> {
        Ok(self.w_c2_solution(surf)?.pop().expect("non-empty"))
    }

    /// k*(Γ̃) = w₀(s(Γ̃))·w_{C₂}(Γ̃)·w₀(t(Γ̃))⁻¹.
    pub fn kstar(&self, surf: &SampledSurface<BundlePoint>) -> Result<GroupElement> {
        lie_ode::w_c0(self.k(), &self.w0(surf.source())?, &self.w_c2(surf)?, &self.w0(surf.target())?)
    }

    /// κ*(Γ̃, h) = α₂(h)(k*(Γ̃)).
    pub fn kappa_star(&self, surf: &SampledSurface<BundlePoint>, h: &GroupElement) -> Result<GroupElement> {
        self.double.alpha2(h, &self.double.base().g().identity(), &self.kstar(surf)?)
    }
}

#[derive(Clone)]
pub struct DoublyDecoratedMorphism {
    pub surface: SampledSurface<BundlePoint>,
    pub h: GroupElement,
    pub k: GroupElement,
}

impl fmt::Debug for DoublyDecoratedMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoublyDecoratedMorphism({}×{} grid, h = {:?}, k = {:?})", self.surface.s_cells(), self.surface.t_cells(), self.h.payload(), self.k.payload())
    }
}

/// ω-horizontality tolerance 10·h² with h the larger grid step.
pub fn omega_tolerance(surf: &SampledSurface<BundlePoint>) -> f64 {
    let h = surf.s_step().max(surf.t_step());
    10.0 * h * h
}

impl DoublyDecoratedMorphism {
    /// Checks the ω-horizontality of the surface against [`omega_tolerance`].
    pub fn new(conn: &PathConnection, surface: SampledSurface<BundlePoint>, h: GroupElement, k: GroupElement) -> Result<Self> {
        let r = conn.surface_omega_residual(&surface)?;
        let tol = omega_tolerance(&surface);
        if r > tol {
            return Err(Error::Domain(format!("surface is not ω-horizontal (residual {r:.3e} > {tol:.3e})")));
        }
        Ok(Self { surface, h, k })
    }

    /// (s(Γ̃), h).
    pub fn source(&self) -> DecoratedMorphism {
        DecoratedMorphism { lift: self.surface.source().clone(), h: self.h.clone() }
    }

    /// (t(Γ̃), h)·τ₂(k⁻¹).
    pub fn target(&self, dm: &DoubleModule) -> Result<DecoratedMorphism> {
        let top = DecoratedMorphism { lift: self.surface.target().clone(), h: self.h.clone() };
        let (h1, g1) = dm.split(&dm.k().inverse(&self.k)?)?;
        dec_right_action(dm.base(), &top, &h1, &g1)
    }

    pub fn distance(&self, other: &Self, dm: &DoubleModule) -> Result<f64> {
        Ok(self
            .surface
            .max_diff(&other.surface)
            .max(dm.base().h().distance(&self.h, &other.h)?)
            .max(dm.k().distance(&self.k, &other.k)?))
    }
}

/// Right action of an object (h₁, g₁) on a decorated surface (Γ̃, h).
fn act_surface(cm: &CrossedModule, surf: &SampledSurface<BundlePoint>, h: &GroupElement, h1: &GroupElement, g1: &GroupElement) -> Result<(SampledSurface<BundlePoint>, GroupElement)> {
    let (g, hm) = (cm.g(), cm.h());
    let moved = surf.map_rows(|row| right_translate(g, row, g1))?;
    let dec = cm.alpha(&g.inverse(g1)?, &hm.multiply(&hm.inverse(h1)?, h)?)?;
    Ok((moved, dec))
}

/// m2∘m1 for m2 = (Δ̃, h, k), m1 = (Γ̃, h′, k′): the surface
/// (Δ̃, h)·τ₂(k′) is stacked on Γ̃ and the decorations become (h′, k·k′).
/// The acted h must agree with h′; otherwise composition is refused.
pub fn doubly_dec_compose(dm: &DoubleModule, m2: &DoublyDecoratedMorphism, m1: &DoublyDecoratedMorphism) -> Result<DoublyDecoratedMorphism> {
    let cm = dm.base();
    let (h1, g1) = dm.split(&m1.k)?;
    let (moved, acted_h) = act_surface(cm, &m2.surface, &m2.h, &h1, &g1)?;
    let gap = cm.h().distance(&acted_h, &m1.h)?;
    if gap > MATCH_TOL {
        return Err(Error::Composition { distance: gap });
    }
    Ok(DoublyDecoratedMorphism {
        surface: vertical_compose(&m1.surface, &moved)?,
        h: m1.h.clone(),
        k: dm.k().multiply(&m2.k, &m1.k)?,
    })
}

/// (Γ̃, h, k)·(k₁, h₁, g₁) = (Γ̃g₁, α₁(g₁⁻¹)(h₁⁻¹h), α₂(ι(h₁, g₁)⁻¹)(k₁⁻¹k)).
pub fn doubly_dec_right_action(
    dm: &DoubleModule,
    m: &DoublyDecoratedMorphism,
    k1: &GroupElement,
    h1: &GroupElement,
    g1: &GroupElement,
) -> Result<DoublyDecoratedMorphism> {
    let k = dm.k();
    let (surface, h) = act_surface(dm.base(), &m.surface, &m.h, h1, g1)?;
    let iota_inv = k.inverse(&dm.embed(h1, g1)?)?;
    let kk = dm.upper().alpha(&iota_inv, &k.multiply(&k.inverse(k1)?, &m.k)?)?;
    Ok(DoublyDecoratedMorphism { surface, h, k: kk })
}

/// Element (k, (h, g)) of K ⋊ (H ⋊ G).
#[derive(Clone, Debug)]
pub struct TripleElement {
    pub k: GroupElement,
    pub h: GroupElement,
    pub g: GroupElement,
}

/// (k, x)(k′, x′) = (k·α₂(x)(k′), x·x′).
pub fn triple_product(dm: &DoubleModule, a: &TripleElement, b: &TripleElement) -> Result<TripleElement> {
    let cm = dm.base();
    let x = cm.mor_product(&Morphism2 { h: a.h.clone(), a: a.g.clone() }, &Morphism2 { h: b.h.clone(), a: b.g.clone() })?;
    Ok(TripleElement { k: dm.k().multiply(&a.k, &dm.alpha2(&a.h, &a.g, &b.k)?)?, h: x.h, g: x.a })
}

/// Result of transporting a decorated path along a path of paths.
#[derive(Clone, Debug)]
pub struct TransportResult {
    pub morphism: DoublyDecoratedMorphism,
    pub result: DecoratedMorphism,
}

/// Doubly decorated transport: lift Γ with initial row `start.lift`, take
/// k = κ*(Γ̃, h) and return the target of (Γ̃, h, k).
#[derive(Clone, Debug)]
pub struct DecoratedTransport {
    pub conn: PathConnection,
    pub kstar: KStarForms,
}

impl DecoratedTransport {
    pub fn from_scenario(s: &Scenario) -> Self {
        Self { conn: PathConnection::from_scenario(s), kstar: KStarForms::from_scenario(s) }
    }

    pub fn transport(&self, gamma: &SampledSurface<DVector<f64>>, start: &DecoratedMorphism) -> Result<TransportResult> {
        let gap = start
            .lift
            .points()
            .iter()
            .zip(gamma.source().points())
            .map(|(p, x)| (&p.x - x).amax())
            .fold(0.0, f64::max);
        if gap > MATCH_TOL || start.lift.cells() != gamma.t_cells() {
            return Err(Error::Fiber { distance: gap });
        }
        let surface = self.conn.surface_lift(gamma, &start.lift)?;
        let k = self.kstar.kappa_star(&surface, &start.h)?;
        let morphism = DoublyDecoratedMorphism { surface, h: start.h.clone(), k };
        let result = morphism.target(&self.kstar.double)?;
        Ok(TransportResult { morphism, result })
    }
}
