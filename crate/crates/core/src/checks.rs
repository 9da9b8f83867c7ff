//! Registry of named residual checks. Each check evaluates one law on a
//! scenario at a given grid and seed and reports a residual with its
//! tolerance; the registry also estimates convergence orders over grid
//! ladders.

use std::io::Write;

use nalgebra::DVector;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::associated::{assoc_transport, assoc_transport_rep, normalize_class, Representation};
use crate::bundle::{right_translate, PathConnection};
use crate::crossed::{Morphism2, Sampling};
use crate::decorated::{
    check_horlift_axioms, connecting_element, dec_compose, dec_right_action, doubly_dec_compose, doubly_dec_right_action,
    reduce, theta_action, to_theta, triple_product, BundleOneForm, CategoricalConnection, DecoratedMorphism,
    DecoratedTransport, DoublyDecoratedMorphism, FormLift, KStarForms, PhiLift, TripleElement, UndecoratedLift,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::group::{AlgebraElement, GroupElement, ModelKind};
use crate::path::{compose_paths, insert_backtrack, BundlePoint, SampledSurface};
use crate::scenario::{scenario, Scenario};

/// Check identifiers in report order.
pub const CHECKS: [&str; 19] = [
    "peiffer",
    "exchange",
    "catgroup",
    "lemma_alpha2",
    "reparam",
    "backtrack",
    "thin",
    "holonomy",
    "functorial",
    "equivariance",
    "phi",
    "connection",
    "surface",
    "wc",
    "kstar",
    "kappa",
    "decorated",
    "doubly",
    "associated",
];

/// Residuals at or below this are reported as grid-exact.
pub const EXACT: f64 = 1e-12;

/// Smallest admissible grid dimension.
pub const MIN_GRID: usize = 8;

/// Path grids use `n` cells; surfaces use `m` s-cells by `n` t-cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub n: usize,
    pub m: usize,
}

impl Grid {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < MIN_GRID || m < MIN_GRID {
            return Err(Error::Grid(format!("grid {n}x{m} below the minimum {MIN_GRID}")));
        }
        Ok(Self { n, m })
    }

    /// Parses `NxM`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| Error::Grid(format!("expected NxM, got `{s}`")))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| Error::Grid(format!("bad grid size `{v}`")));
        Self::new(parse(a)?, parse(b)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub residual: f64,
    pub tolerance: f64,
    /// Characteristic step of the discretization.
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub check: String,
    pub scenario: String,
    pub n: usize,
    pub m: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Expands `all` and validates identifiers, keeping registry order.
pub fn expand_checks<S: AsRef<str>>(names: &[S]) -> Result<Vec<&'static str>> {
    let mut wanted = Vec::new();
    for name in names {
        let name = name.as_ref().trim();
        if name == "all" {
            return Ok(CHECKS.to_vec());
        }
        let id = CHECKS
            .iter()
            .find(|&&c| c == name)
            .ok_or_else(|| Error::Domain(format!("unknown check `{name}`")))?;
        if !wanted.contains(id) {
            wanted.push(*id);
        }
    }
    Ok(CHECKS.iter().copied().filter(|c| wanted.contains(c)).collect())
}

/// Runs the checks concurrently and returns rows sorted by check order.
pub fn run_checks<S: AsRef<str>>(scenario_name: &str, grid: Grid, seed: u64, checks: &[S]) -> Result<Vec<CheckRow>> {
    let s = scenario(scenario_name)?;
    let ids = expand_checks(checks)?;
    let rows = ids
        .par_iter()
        .map(|&id| {
            let meas = measure(id, &s, grid, seed)?;
            Ok(CheckRow {
                check: id.to_string(),
                scenario: s.name.to_string(),
                n: grid.n,
                m: grid.m,
                residual: meas.residual,
                tolerance: meas.tolerance,
                pass: meas.residual.is_finite() && meas.residual <= meas.tolerance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}

/// CSV report `check,scenario,N,M,residual,tolerance,pass`, LF line ends.
pub fn write_report<W: Write>(rows: &[CheckRow], mut out: W) -> Result<()> {
    writeln!(out, "check,scenario,N,M,residual,tolerance,pass")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{:.6e},{:.1e},{}", r.check, r.scenario, r.n, r.m, r.residual, r.tolerance, r.pass)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub check: String,
    pub h: f64,
    pub residual: f64,
    /// Observed order against the previous rung; `None` on the first rung.
    pub order: Option<f64>,
    /// All residuals of this check are at or below [`EXACT`].
    pub exact: bool,
    /// The residual did not decrease from the previous rung.
    pub flagged: bool,
}

/// Observed orders log(r₁/r₂)/log(h₁/h₂) over a ladder of at least three
/// grids.
pub fn convergence<S: AsRef<str>>(scenario_name: &str, ladder: &[Grid], seed: u64, checks: &[S]) -> Result<Vec<ConvergenceRow>> {
    if ladder.len() < 3 {
        return Err(Error::Grid("a convergence ladder needs at least three grids".into()));
    }
    let s = scenario(scenario_name)?;
    let ids = expand_checks(checks)?;
    let per_check = ids
        .par_iter()
        .map(|&id| {
            let ms = ladder.iter().map(|&g| measure(id, &s, g, seed)).collect::<Result<Vec<_>>>()?;
            let exact = ms.iter().all(|m| m.residual <= EXACT);
            let rows = ms
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let prev = (k > 0).then(|| ms[k - 1]);
                    let order = prev.map(|p| (p.residual / m.residual).ln() / (p.h / m.h).ln());
                    let flagged = !exact && prev.is_some_and(|p| m.residual >= p.residual);
                    ConvergenceRow { check: id.to_string(), h: m.h, residual: m.residual, order, exact, flagged }
                })
                .collect::<Vec<_>>();
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_check.into_iter().flatten().collect())
}

/// CSV report `check,h,residual,order`; the order is `exact` for grid-exact
/// checks and empty on the first rung.
pub fn write_convergence<W: Write>(rows: &[ConvergenceRow], mut out: W) -> Result<()> {
    writeln!(out, "check,h,residual,order")?;
    for r in rows {
        let order = match (r.exact, r.order) {
            (true, _) => "exact".to_string(),
            (false, Some(o)) => format!("{o:.3}"),
            (false, None) => String::new(),
        };
        writeln!(out, "{},{:.6e},{:.6e},{}", r.check, r.h, r.residual, order)?;
    }
    Ok(())
}

/// Seeded fiber data shared by the checks.
struct Setup {
    conn: PathConnection,
    transport: DecoratedTransport,
    g0: GroupElement,
    y0: AlgebraElement,
    h0: GroupElement,
    rng: ChaCha8Rng,
}

impl Setup {
    fn new(s: &Scenario, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (s.cm().g(), s.cm().h());
        let g0 = g.sample(&mut rng);
        let y0 = g.sample_algebra(&mut rng, 0.5);
        let h0 = h.sample(&mut rng);
        Self { conn: PathConnection::from_scenario(s), transport: DecoratedTransport::from_scenario(s), g0, y0, h0, rng }
    }

    fn point(&self, x: &DVector<f64>) -> BundlePoint {
        BundlePoint { x: x.clone(), g: self.g0.clone() }
    }
}

fn o2(reference: f64, at: usize, tol: f64) -> f64 {
    tol * (reference / at as f64).powi(2)
}

/// Evaluates one check.
pub fn measure(id: &str, s: &Scenario, grid: Grid, seed: u64) -> Result<Measurement> {
    let Grid { n, m } = grid;
    let hn = 1.0 / n as f64;
    let hs = 1.0 / n.min(m) as f64;
    let samples = Sampling::Random { samples: 100, seed };
    let cm = s.cm();
    let exact = |residual: f64, tolerance: f64| Measurement { residual, tolerance, h: hn };
    match id {
        "peiffer" => Ok(exact(cm.check_peiffer(samples)?, 1e-10)),
        "exchange" => Ok(exact(cm.check_exchange_law(samples)?, 1e-10)),
        "catgroup" => Ok(exact(
            cm.check_catgroup_homs(samples)?
                .max(cm.check_compose_via_product(samples)?)
                .max(cm.check_compose_associativity(samples)?),
            1e-10,
        )),
        "lemma_alpha2" => Ok(exact(s.double.check_lemma_alpha2(100, seed)?.max(s.double.check_embedding(100, seed)?), 1e-10)),
        "reparam" => {
            let st = Setup::new(s, seed);
            let phi = fixtures::smoothstep_grid(n, 1.0);
            let r = st.conn.reparam_residual(&fixtures::curve(n)?, &fixtures::variation(n)?, &st.g0, &st.y0, &phi, 1.0)?;
            Ok(Measurement { residual: r, tolerance: o2(400.0, n, 1e-6), h: hn })
        }
        "backtrack" => Ok(exact(backtrack(s, n, seed)?, EXACT)),
        "thin" => Ok(exact(thin(s, grid, seed)?, 1e-9)),
        "holonomy" => {
            // with C₁ ≠ 0 the w₀ factors of k* agree on reparametrized rows only to O(h²)
            let tolerance = if s.forms.c1.is_zero() { 1e-9 } else { o2(100.0, n, 1e-5) };
            Ok(exact(holonomy(s, grid, seed)?, tolerance))
        }
        "functorial" | "equivariance" => {
            let (functoriality, equivariance) = horlift(s, n, seed)?;
            Ok(if id == "functorial" { exact(functoriality, EXACT) } else { exact(equivariance, 1e-11) })
        }
        "phi" => Ok(Measurement { residual: phi_vs_c(s, n, seed)?, tolerance: o2(100.0, n, 1e-6), h: hn }),
        "connection" => {
            let st = Setup::new(s, seed);
            let lift = st.conn.lift_from(&fixtures::curve(n)?, &st.g0)?;
            let field = st.conn.from_tangency(&lift, fixtures::variation(n)?.points().to_vec(), st.y0.clone())?;
            let rep = st.conn.check_connection_properties(&lift, &field, 20, seed)?;
            Ok(exact(rep.equivariance.max(rep.vertical), 1e-11))
        }
        "surface" => {
            let st = Setup::new(s, seed);
            let gs = fixtures::surface(m, n)?;
            let row0 = st.conn.lift(gs.row(0), &st.point(gs.at(0, 0)))?;
            let r = st.conn.surface_omega_residual(&st.conn.surface_lift(&gs, &row0)?)?;
            Ok(Measurement { residual: r, tolerance: o2(100.0, n.min(m), 1e-5), h: hs })
        }
        "wc" => Ok(Measurement { residual: wc(s, grid, seed)?, tolerance: EXACT, h: hs }),
        "kstar" => Ok(Measurement { residual: kstar(s, grid, seed)?, tolerance: 1e-10, h: hs }),
        "kappa" => Ok(Measurement { residual: kappa(s, grid, seed)?, tolerance: 1e-10, h: hs }),
        "decorated" => Ok(exact(decorated(s, n, seed)?, 1e-10)),
        "doubly" => Ok(Measurement { residual: doubly(s, grid, seed)?, tolerance: 1e-10, h: hs }),
        "associated" => Ok(exact(associated(s, n, seed)?, 1e-11)),
        other => Err(Error::Domain(format!("unknown check `{other}`"))),
    }
}

/// A mirror-aligned spur inserted at the middle of the curve and of the
/// variation; ω and the lift before and after erasure.
fn backtrack(s: &Scenario, n: usize, seed: u64) -> Result<f64> {
    let st = Setup::new(s, seed);
    let (gamma, v) = (fixtures::curve(n)?, fixtures::variation(n)?);
    let (at, k) = (n / 2, (n / 4).max(1));
    let (gb, window) = insert_backtrack(&gamma, at, &fixtures::spur(&gamma.points()[at], k, gamma.step())?)?;
    let (vb, vwindow) = insert_backtrack(&v, at, &fixtures::spur(&v.points()[at], k, v.step())?)?;
    if window != vwindow {
        return Err(Error::Fixture("spur windows differ".into()));
    }
    let r = st.conn.backtrack_residual(&gb, &vb, window, &st.g0, &st.y0)?;
    Ok(r.omega.max(r.lift))
}

/// Lift drift, partial minors and row consistency on the thin family; the
/// decorated transport returns the lift of the reparametrized final row.
fn thin(s: &Scenario, grid: Grid, seed: u64) -> Result<f64> {
    let st = Setup::new(s, seed);
    let fam = fixtures::thin_family(grid.m, grid.n)?;
    let u0 = st.point(fam.at(0, 0));
    let (rep, _) = st.conn.check_thin_homotopy(&fam, &u0)?;
    let start = DecoratedMorphism { lift: st.conn.lift(fam.row(0), &u0)?, h: s.cm().h().identity() };
    let out = st.transport.transport(&fam, &start)?;
    let top = st.conn.lift(fam.target(), &u0)?;
    let (k1h, k1g) = s.double.split(&s.double.k().inverse(&out.morphism.k)?)?;
    let expected = dec_right_action(s.cm(), &DecoratedMorphism { lift: top, h: start.h.clone() }, &k1h, &k1g)?;
    Ok(rep.drift.max(rep.minors).max(rep.rows).max(out.result.distance(&expected, s.cm())?))
}

/// Decorated holonomy of the thin family: distance of k = κ*(Γ̃, h) from
/// the identity and of the returned decoration from h.
fn holonomy(s: &Scenario, grid: Grid, seed: u64) -> Result<f64> {
    let st = Setup::new(s, seed);
    let fam = fixtures::thin_family(grid.m, grid.n)?;
    let u0 = st.point(fam.at(0, 0));
    let start = DecoratedMorphism { lift: st.conn.lift(fam.row(0), &u0)?, h: st.h0.clone() };
    let out = st.transport.transport(&fam, &start)?;
    let k = s.double.k();
    Ok(k.distance(&out.morphism.k, &k.identity())?.max(cm_h_distance(s, &out.result.h, &st.h0)?))
}

fn cm_h_distance(s: &Scenario, a: &GroupElement, b: &GroupElement) -> Result<f64> {
    s.cm().h().distance(a, b)
}

fn lifters(s: &Scenario, conn: &PathConnection) -> Vec<Box<dyn CategoricalConnection>> {
    vec![
        Box::new(UndecoratedLift { conn: conn.clone() }),
        Box::new(FormLift { conn: conn.clone(), form: BundleOneForm::Twisted(s.forms.c.clone()) }),
        Box::new(PhiLift { conn: conn.clone(), phi: s.forms.phi.clone() }),
    ]
}

/// Functoriality (with projection) and equivariance over 20 samples for the
/// undecorated, C-form and Φ lifters.
fn horlift(s: &Scenario, n: usize, seed: u64) -> Result<(f64, f64)> {
    let st = Setup::new(s, seed);
    let (g1, g2) = fixtures::split_curve(n)?;
    let u = st.point(g1.start());
    let mut out = (0.0f64, 0.0f64);
    for l in lifters(s, &st.conn) {
        let r = check_horlift_axioms(l.as_ref(), &g1, &g2, &u, 20, seed)?;
        out.0 = out.0.max(r.functoriality).max(r.projection);
        out.1 = out.1.max(r.equivariance);
    }
    Ok(out)
}

/// Decoration of the Φ lifter against the C-ODE with C = (dΦ)Φ⁻¹.
fn phi_vs_c(s: &Scenario, n: usize, seed: u64) -> Result<f64> {
    let st = Setup::new(s, seed);
    let c = fixtures::curve(n)?;
    let u = st.point(c.start());
    let by_c = FormLift { conn: st.conn.clone(), form: BundleOneForm::LogDerivative(s.forms.phi.clone()) }.lift(&c, &u)?;
    let by_phi = PhiLift { conn: st.conn.clone(), phi: s.forms.phi.clone() }.lift(&c, &u)?;
    cm_h_distance(s, &by_c.h, &by_phi.h)
}

/// Lifted surface split at its middle row into two stacked halves.
fn split_lift(st: &Setup, grid: Grid) -> Result<(SampledSurface<BundlePoint>, SampledSurface<BundlePoint>, SampledSurface<BundlePoint>)> {
    let gs = fixtures::surface(grid.m, grid.n)?;
    let row0 = st.conn.lift(gs.row(0), &st.point(gs.at(0, 0)))?;
    let whole = st.conn.surface_lift(&gs, &row0)?;
    let k = grid.m / 2;
    let ds = whole.s_step();
    let lower = SampledSurface::new(ds * k as f64, whole.rows()[..=k].to_vec(), 0)?;
    let upper = SampledSurface::new(ds * (grid.m - k) as f64, whole.rows()[k..].to_vec(), 0)?;
    Ok((whole, lower, upper))
}

/// w_C and w_{C,0} under vertical composition, and w₀ under path
/// composition.
fn wc(s: &Scenario, grid: Grid, seed: u64) -> Result<f64> {
    let st = Setup::new(s, seed);
    let ks = KStarForms::from_scenario(s);
    let k = s.double.k();
    let (whole, lower, upper) = split_lift(&st, grid)?;
    let w = k.distance(&ks.w_c2(&whole)?, &k.multiply(&ks.w_c2(&lower)?, &ks.w_c2(&upper)?)?)?;
    let w0 = k.distance(&ks.kstar(&whole)?, &k.multiply(&ks.kstar(&lower)?, &ks.kstar(&upper)?)?)?;
    let (g1, g2) = fixtures::split_curve(grid.n)?;
    let l1 = st.conn.lift_from(&g1, &st.g0)?;
    let l2 = st.conn.lift_from(&g2, &l1.end().g)?;
    let joined = st.conn.lift_from(&compose_paths(&g1, &g2)?, &st.g0)?;
    let p = k.distance(&ks.w0(&joined)?, &k.multiply(&ks.w0(&l1)?, &ks.w0(&l2)?)?)?;
    Ok(w.max(w0).max(p))
}

fn translate_surface(s: &Scenario, surf: &SampledSurface<BundlePoint>, g1: &GroupElement) -> Result<SampledSurface<BundlePoint>> {
    surf.map_rows(|row| right_translate(s.cm().g(), row, g1))
}

/// k*(Γ̃·1_g) = α₂(g⁻¹)k*(Γ̃) over samples, and k* under vertical
/// composition.
fn kstar(s: &Scenario, grid: Grid, seed: u64) -> Result<f64> {
    let mut st = Setup::new(s, seed);
    let ks = KStarForms::from_scenario(s);
    let (k, g, h) = (s.double.k(), s.cm().g(), s.cm().h());
    let (whole, lower, upper) = split_lift(&st, grid)?;
    let base = ks.kstar(&whole)?;
    let mut worst = k.distance(&base, &k.multiply(&ks.kstar(&lower)?, &ks.kstar(&upper)?)?)?;
    for _ in 0..5 {
        let g1 = g.sample(&mut st.rng);
        let lhs = ks.kstar(&translate_surface(s, &whole, &g1)?)?;
        let rhs = s.double.alpha2(&h.identity(), &g.inverse(&g1)?, &base)?;
        worst = worst.max(k.distance(&lhs, &rhs)?);
    }
    Ok(worst)
}

/// κ*((Γ̃, h)·x) = α₂(x⁻¹)κ*(Γ̃, h) over samples x = (h₁, g₁), and
/// κ*(Δ̃∘Γ̃, h) = κ*(Γ̃, h)κ*(Δ̃, h).
fn kappa(s: &Scenario, grid: Grid, seed: u64) -> Result<f64> {
    let mut st = Setup::new(s, seed);
    let ks = KStarForms::from_scenario(s);
    let cm = s.cm();
    let (k, g, h) = (s.double.k(), cm.g(), cm.h());
    let (whole, lower, upper) = split_lift(&st, grid)?;
    let base = ks.kappa_star(&whole, &st.h0)?;
    let split = k.multiply(&ks.kappa_star(&lower, &st.h0)?, &ks.kappa_star(&upper, &st.h0)?)?;
    let mut worst = k.distance(&base, &split)?;
    for _ in 0..5 {
        let (h1, g1) = (h.sample(&mut st.rng), g.sample(&mut st.rng));
        let moved = translate_surface(s, &whole, &g1)?;
        let moved_h = cm.alpha(&g.inverse(&g1)?, &h.multiply(&h.inverse(&h1)?, &st.h0)?)?;
        let lhs = ks.kappa_star(&moved, &moved_h)?;
        let xi = cm.mor_inverse(&Morphism2 { h: h1, a: g1 })?;
        let rhs = s.double.alpha2(&xi.h, &xi.a, &base)?;
        worst = worst.max(k.distance(&lhs, &rhs)?);
    }
    Ok(worst)
}

fn sample_mor(s: &Scenario, rng: &mut ChaCha8Rng) -> Morphism2 {
    Morphism2 { h: s.cm().h().sample(rng), a: s.cm().g().sample(rng) }
}

fn act(s: &Scenario, m: &DecoratedMorphism, phi: &Morphism2) -> Result<DecoratedMorphism> {
    dec_right_action(s.cm(), m, &phi.h, &phi.a)
}

/// Action axiom and unit, composition associativity and target identity,
/// transitivity recovery, freeness, the θ-notation comparison and the
/// reduction γ̃ ↦ (γ̃, e), over 50 samples on a short path grid.
fn decorated(s: &Scenario, n: usize, seed: u64) -> Result<f64> {
    let mut st = Setup::new(s, seed);
    let cm = s.cm().clone();
    let (g, h) = (cm.g(), cm.h());
    let n = n.min(32);
    let (ga, gb) = fixtures::split_curve(n)?;
    let gc = fixtures::sample(n, 0.5, |t| fixtures::curve_point(1.0 + t))?;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let u = BundlePoint { x: ga.start().clone(), g: g.sample(&mut st.rng) };
        let m = DecoratedMorphism { lift: st.conn.lift(&ga, &u)?, h: h.sample(&mut st.rng) };
        let (p1, p2) = (sample_mor(s, &mut st.rng), sample_mor(s, &mut st.rng));
        let lhs = act(s, &act(s, &m, &p1)?, &p2)?;
        let rhs = act(s, &m, &cm.mor_product(&p1, &p2)?)?;
        worst = worst.max(lhs.distance(&rhs, &cm)?);
        worst = worst.max(act(s, &m, &cm.mor_identity())?.distance(&m, &cm)?);

        let m2 = DecoratedMorphism { lift: st.conn.lift(&gb, &m.target(&cm)?)?, h: h.sample(&mut st.rng) };
        let m3 = DecoratedMorphism { lift: st.conn.lift(&gc, &m2.target(&cm)?)?, h: h.sample(&mut st.rng) };
        let left = dec_compose(&cm, &m3, &dec_compose(&cm, &m2, &m)?)?;
        let right = dec_compose(&cm, &dec_compose(&cm, &m3, &m2)?, &m)?;
        worst = worst.max(left.distance(&right, &cm)?);
        let c21 = dec_compose(&cm, &m2, &m)?;
        let expected = g.product(&[&m2.lift.end().g, &cm.tau(&m.h)?, &g.inverse(&cm.tau(&h.multiply(&m2.h, &m.h)?)?)?])?;
        worst = worst.max(g.distance(&c21.target(&cm)?.g, &expected)?);

        let m0 = act(s, &m, &p1)?;
        let found = connecting_element(&cm, &m, &m0)?;
        worst = worst.max(cm.mor_distance(&found, &p1)?).max(act(s, &m, &found)?.distance(&m0, &cm)?);
        if p1.h.max_diff(&h.identity()).max(p1.a.max_diff(&g.identity())) > 1e-6 && m0.distance(&m, &cm)? < 1e-9 {
            worst = worst.max(1.0);
        }

        let theta = theta_action(&cm, &to_theta(&cm, &Morphism2 { h: m.h.clone(), a: m.source().g.clone() }), &p1)?;
        worst = worst.max(h.distance(&theta.h, &m0.h)?).max(g.distance(&theta.a, &g.identity())?);

        let r_join = reduce(&cm, &compose_paths(&m.lift, &st.conn.lift(&gb, m.lift.end())?)?);
        let r_sep = dec_compose(&cm, &reduce(&cm, &st.conn.lift(&gb, m.lift.end())?), &reduce(&cm, &m.lift))?;
        worst = worst.max(r_join.distance(&r_sep, &cm)?);
        let r_act = reduce(&cm, &right_translate(g, &m.lift, &p1.a)?);
        worst = worst.max(r_act.distance(&act(s, &reduce(&cm, &m.lift), &cm.identity_mor(&p1.a))?, &cm)?);
    }
    Ok(worst)
}

fn sample_triple(s: &Scenario, rng: &mut ChaCha8Rng) -> TripleElement {
    TripleElement { k: s.double.k().sample(rng), h: s.cm().h().sample(rng), g: s.cm().g().sample(rng) }
}

fn triple_distance(s: &Scenario, a: &TripleElement, b: &TripleElement) -> Result<f64> {
    Ok(s.double.k().distance(&a.k, &b.k)?.max(s.cm().h().distance(&a.h, &b.h)?).max(s.cm().g().distance(&a.g, &b.g)?))
}

/// Semidirect product associativity, the doubly decorated action axiom and
/// its compatibility with source and target, composition associativity,
/// target consistency and vertical consistency of decorated transport.
fn doubly(s: &Scenario, grid: Grid, seed: u64) -> Result<f64> {
    let mut st = Setup::new(s, seed);
    let dm = s.double.clone();
    let cm = dm.base().clone();
    let k = dm.k();
    let (ms, ns) = ((grid.m / 3).clamp(2, 12), grid.n.min(24));
    let bands = [
        fixtures::surface_band(ms, ns, 0.0, 1.0 / 3.0)?,
        fixtures::surface_band(ms, ns, 1.0 / 3.0, 2.0 / 3.0)?,
        fixtures::surface_band(ms, ns, 2.0 / 3.0, 1.0)?,
    ];
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (a, b, c) = (sample_triple(s, &mut st.rng), sample_triple(s, &mut st.rng), sample_triple(s, &mut st.rng));
        let lhs = triple_product(&dm, &triple_product(&dm, &a, &b)?, &c)?;
        let rhs = triple_product(&dm, &a, &triple_product(&dm, &b, &c)?)?;
        worst = worst.max(triple_distance(s, &lhs, &rhs)?);
    }
    // a composable chain (Γ̃ᵢ, hᵢ, kᵢ) over the three bands
    let mut chain: Vec<DoublyDecoratedMorphism> = Vec::new();
    let mut start = DecoratedMorphism { lift: st.conn.lift(bands[0].row(0), &st.point(bands[0].at(0, 0)))?, h: st.h0.clone() };
    for band in &bands {
        let surface = st.conn.surface_lift(band, &start.lift)?;
        let m = DoublyDecoratedMorphism { surface, h: start.h.clone(), k: k.sample(&mut st.rng) };
        start = m.target(&dm)?;
        chain.push(m);
    }
    let (m1, m2, m3) = (&chain[0], &chain[1], &chain[2]);
    let left = doubly_dec_compose(&dm, m3, &doubly_dec_compose(&dm, m2, m1)?)?;
    let right = doubly_dec_compose(&dm, &doubly_dec_compose(&dm, m3, m2)?, m1)?;
    worst = worst.max(left.distance(&right, &dm)?);
    worst = worst.max(doubly_dec_compose(&dm, m2, m1)?.target(&dm)?.distance(&m2.target(&dm)?, &cm)?);
    for _ in 0..10 {
        let (p, q) = (sample_triple(s, &mut st.rng), sample_triple(s, &mut st.rng));
        let once = doubly_dec_right_action(&dm, m1, &p.k, &p.h, &p.g)?;
        let twice = doubly_dec_right_action(&dm, &once, &q.k, &q.h, &q.g)?;
        let pq = triple_product(&dm, &p, &q)?;
        worst = worst.max(twice.distance(&doubly_dec_right_action(&dm, m1, &pq.k, &pq.h, &pq.g)?, &dm)?);
        let x = Morphism2 { h: p.h.clone(), a: p.g.clone() };
        let src = dec_right_action(&cm, &m1.source(), &x.h, &x.a)?;
        worst = worst.max(once.source().distance(&src, &cm)?);
        let (kh, kg) = dm.split(&p.k)?;
        let y = cm.mor_product(&Morphism2 { h: kh, a: kg }, &x)?;
        let tgt = dec_right_action(&cm, &m1.target(&dm)?, &y.h, &y.a)?;
        worst = worst.max(once.target(&dm)?.distance(&tgt, &cm)?);
    }
    // transport along Γ then Δ against transport along Δ∘Γ
    let whole = fixtures::surface_band(2 * ms, ns, 0.0, 2.0 / 3.0)?;
    let s0 = DecoratedMorphism { lift: st.conn.lift(whole.row(0), &st.point(whole.at(0, 0)))?, h: st.h0.clone() };
    let direct = st.transport.transport(&whole, &s0)?;
    let first = st.transport.transport(&bands[0], &s0)?;
    let second = st.transport.transport(&bands[1], &first.result)?;
    worst = worst.max(direct.result.distance(&second.result, &cm)?);
    Ok(worst)
}

/// Well-definedness across representatives and functoriality of associated
/// transport, plus the representation laws.
fn associated(s: &Scenario, n: usize, seed: u64) -> Result<f64> {
    let mut st = Setup::new(s, seed);
    let g = s.cm().g().clone();
    let rep = match g.kind() {
        ModelKind::Matrix => Representation::defining(g.clone())?,
        _ => Representation::trivial(g.clone(), 2),
    };
    let lifter = FormLift { conn: st.conn.clone(), form: BundleOneForm::Twisted(s.forms.c.clone()) };
    let (g1, g2) = fixtures::split_curve(n)?;
    let mut worst = rep.check(20, seed)?;
    for _ in 0..20 {
        let v = DVector::from_fn(rep.dim(), |_, _| rand::Rng::gen_range(&mut st.rng, -1.0..1.0));
        let p = BundlePoint { x: g1.start().clone(), g: g.sample(&mut st.rng) };
        let a = g.sample(&mut st.rng);
        let moved = BundlePoint { x: p.x.clone(), g: g.multiply(&p.g, &a)? };
        let v_moved = rep.rho_obj(&g.inverse(&a)?, &v)?;
        let one = assoc_transport_rep(&lifter, &g1, &p, &v, &rep)?;
        let two = assoc_transport_rep(&lifter, &g1, &moved, &v_moved, &rep)?;
        worst = worst.max(one.distance(&two));
        let cls = normalize_class(&p, &v, &rep)?;
        let joined = assoc_transport(&lifter, &compose_paths(&g1, &g2)?, &cls, &rep)?;
        let stepwise = assoc_transport(&lifter, &g2, &assoc_transport(&lifter, &g1, &cls, &rep)?, &rep)?;
        worst = worst.max(joined.distance(&stepwise));
    }
    Ok(worst)
}
