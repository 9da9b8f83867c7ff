//! Crossed modules (G, H, α, τ) and the categorical group they define.
//!
//! A morphism of the categorical group is a pair `(h, a)` with source `a`
//! and target `τ(h)·a`. Morphisms compose vertically by multiplying the
//! `H` components and multiply as elements of the semidirect product
//! H ⋊_α G. The identities relating these structures are verified by
//! sampling (matrix models) or by exhaustive enumeration (finite models).

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{AlgebraElement, CayleyTable, GroupElement, GroupModel, ModelKind};

/// Tolerance for deciding that two objects or morphisms coincide.
pub const MATCH_TOL: f64 = 1e-9;

pub type ActionFn = Arc<dyn Fn(&GroupElement, &GroupElement) -> Result<GroupElement> + Send + Sync>;
pub type ActionAlgFn = Arc<dyn Fn(&GroupElement, &AlgebraElement) -> Result<AlgebraElement> + Send + Sync>;
pub type TauFn = Arc<dyn Fn(&GroupElement) -> Result<GroupElement> + Send + Sync>;
pub type TauAlgFn = Arc<dyn Fn(&AlgebraElement) -> Result<AlgebraElement> + Send + Sync>;

/// How a check draws its group elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// `samples` seeded pseudo-random tuples.
    Random { samples: usize, seed: u64 },
    /// Every tuple; only available when all groups involved are finite.
    Exhaustive,
}

/// Which group a sampled slot is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    G,
    H,
}

#[derive(Clone)]
pub struct CrossedModule {
    name: String,
    g: GroupModel,
    h: GroupModel,
    alpha: ActionFn,
    alpha_alg: Option<ActionAlgFn>,
    tau: TauFn,
    tau_alg: Option<TauAlgFn>,
}

impl fmt::Debug for CrossedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CrossedModule({}: {} -> {})", self.name, self.h.id(), self.g.id())
    }
}

/// Morphism `(h, a)` of the categorical group: source `a`, target `τ(h)·a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism2 {
    pub h: GroupElement,
    pub a: GroupElement,
}

impl CrossedModule {
    /// Assembles a crossed module from total maps. The Peiffer identities are
    /// not assumed; see [`CrossedModule::check_peiffer`].
    pub fn new(
        name: &str,
        g: GroupModel,
        h: GroupModel,
        alpha: ActionFn,
        alpha_alg: Option<ActionAlgFn>,
        tau: TauFn,
        tau_alg: Option<TauAlgFn>,
    ) -> Self {
        Self { name: name.to_string(), g, h, alpha, alpha_alg, tau, tau_alg }
    }

    /// H = G, τ = id, α(g)h = ghg⁻¹.
    pub fn conjugation(g: GroupModel) -> Self {
        let name = format!("conj({})", g.id());
        let (m1, m2) = (g.clone(), g.clone());
        let lie = g.kind() != ModelKind::FiniteTable;
        Self::new(
            &name,
            g.clone(),
            g,
            Arc::new(move |a, h| m1.multiply(&m1.multiply(a, h)?, &m1.inverse(a)?)),
            lie.then(|| -> ActionAlgFn { Arc::new(move |a, x| m2.ad(a, x)) }),
            Arc::new(|h| Ok(h.clone())),
            lie.then(|| -> TauAlgFn { Arc::new(|x| Ok(x.clone())) }),
        )
    }

    /// G = SO(n) acting on H = ℝⁿ by matrix multiplication, τ ≡ e.
    pub fn abelian(n: usize) -> Result<Self> {
        let g = GroupModel::so(n)?;
        let h = GroupModel::additive(n);
        let (hm1, hm2) = (h.clone(), h.clone());
        let (gm1, gm2) = (g.clone(), g.clone());
        Ok(Self::new(
            &format!("abelian(SO({n}),R^{n})"),
            g,
            h,
            Arc::new(move |a, v| {
                let (Some(r), Some(x)) = (a.matrix(), v.vector()) else {
                    return Err(Error::Domain("abelian action expects (rotation, vector)".into()));
                };
                hm1.element_from_vector(r * x)
            }),
            Some(Arc::new(move |a, z| {
                let r = a.matrix().ok_or_else(|| Error::Domain("expected rotation".into()))?;
                hm2.algebra(r * z.coeffs())
            })),
            Arc::new(move |_| Ok(gm1.identity())),
            Some(Arc::new(move |_| Ok(gm2.zero_algebra()))),
        ))
    }

    /// Finite crossed module from tables: `alpha[g][h]` and `tau[h]`.
    pub fn from_tables(name: &str, g: GroupModel, h: GroupModel, alpha: Vec<Vec<usize>>, tau: Vec<usize>) -> Result<Self> {
        let (go, ho) = match (g.order(), h.order()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Domain("table crossed modules need finite groups".into())),
        };
        if alpha.len() != go || alpha.iter().any(|r| r.len() != ho || r.iter().any(|&v| v >= ho)) {
            return Err(Error::Domain("action table has wrong shape".into()));
        }
        if tau.len() != ho || tau.iter().any(|&v| v >= go) {
            return Err(Error::Domain("boundary table has wrong shape".into()));
        }
        let (hm, gm) = (h.clone(), g.clone());
        Ok(Self::new(
            name,
            g,
            h,
            Arc::new(move |a, x| {
                let (i, j) = index_pair(a, x)?;
                hm.element_from_index(alpha[i][j])
            }),
            None,
            Arc::new(move |x| {
                let j = x.index().ok_or_else(|| Error::Domain("expected finite element".into()))?;
                gm.element_from_index(tau[j])
            }),
            None,
        ))
    }

    /// H = ℤ₄, G = ℤ₂, τ = reduction mod 2, α trivial.
    pub fn z4_to_z2() -> Self {
        let g = GroupModel::finite("Z2", CayleyTable::cyclic(2));
        let h = GroupModel::finite("Z4", CayleyTable::cyclic(4));
        Self::from_tables("Z4->Z2", g, h, vec![(0..4).collect(), (0..4).collect()], vec![0, 1, 0, 1])
            .expect("well-formed tables")
    }

    /// Deliberately miswired module: τ = id and α(g) = id on a possibly
    /// non-abelian group. The second Peiffer identity fails unless G is abelian.
    pub fn broken_trivial_action(g: GroupModel) -> Self {
        let name = format!("broken({})", g.id());
        Self::new(
            &name,
            g.clone(),
            g,
            Arc::new(|_, h| Ok(h.clone())),
            Some(Arc::new(|_, x| Ok(x.clone()))),
            Arc::new(|h| Ok(h.clone())),
            Some(Arc::new(|x| Ok(x.clone()))),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self) -> &GroupModel {
        &self.g
    }

    pub fn h(&self) -> &GroupModel {
        &self.h
    }

    pub fn alpha(&self, a: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        (self.alpha)(a, h)
    }

    pub fn alpha_alg(&self, a: &GroupElement, z: &AlgebraElement) -> Result<AlgebraElement> {
        match &self.alpha_alg {
            Some(f) => f(a, z),
            None => Err(Error::Unsupported { op: "alpha_alg", model: self.name.clone() }),
        }
    }

    pub fn tau(&self, h: &GroupElement) -> Result<GroupElement> {
        (self.tau)(h)
    }

    pub fn tau_alg(&self, z: &AlgebraElement) -> Result<AlgebraElement> {
        match &self.tau_alg {
            Some(f) => f(z),
            None => Err(Error::Unsupported { op: "tau_alg", model: self.name.clone() }),
        }
    }

    pub fn mor_source(&self, m: &Morphism2) -> GroupElement {
        m.a.clone()
    }

    pub fn mor_target(&self, m: &Morphism2) -> Result<GroupElement> {
        self.g.multiply(&self.tau(&m.h)?, &m.a)
    }

    /// Identity morphism 1_a = (e_H, a).
    pub fn identity_mor(&self, a: &GroupElement) -> Morphism2 {
        Morphism2 { h: self.h.identity(), a: a.clone() }
    }

    /// Vertical composite m2 ∘ m1 = (h₂h₁, a₁).
    pub fn mor_compose(&self, m2: &Morphism2, m1: &Morphism2) -> Result<Morphism2> {
        let gap = self.g.distance(&self.mor_target(m1)?, &m2.a)?;
        if gap > MATCH_TOL {
            return Err(Error::Composition { distance: gap });
        }
        Ok(Morphism2 { h: self.h.multiply(&m2.h, &m1.h)?, a: m1.a.clone() })
    }

    /// Semidirect product (h, a)·(k, c) = (h·α(a)(k), a·c).
    pub fn mor_product(&self, m1: &Morphism2, m2: &Morphism2) -> Result<Morphism2> {
        Ok(Morphism2 {
            h: self.h.multiply(&m1.h, &self.alpha(&m1.a, &m2.h)?)?,
            a: self.g.multiply(&m1.a, &m2.a)?,
        })
    }

    /// Inverse in H ⋊ G: (α(a⁻¹)(h⁻¹), a⁻¹).
    pub fn mor_inverse(&self, m: &Morphism2) -> Result<Morphism2> {
        let ai = self.g.inverse(&m.a)?;
        Ok(Morphism2 { h: self.alpha(&ai, &self.h.inverse(&m.h)?)?, a: ai })
    }

    pub fn mor_identity(&self) -> Morphism2 {
        self.identity_mor(&self.g.identity())
    }

    pub fn mor_distance(&self, m1: &Morphism2, m2: &Morphism2) -> Result<f64> {
        Ok(self.h.distance(&m1.h, &m2.h)?.max(self.g.distance(&m1.a, &m2.a)?))
    }

    /// Draws tuples of elements with the given slot layout.
    pub fn draws(&self, sampling: Sampling, slots: &[Slot]) -> Result<Vec<Vec<GroupElement>>> {
        let model = |s: &Slot| match s {
            Slot::G => &self.g,
            Slot::H => &self.h,
        };
        match sampling {
            Sampling::Exhaustive => {
                let pools = slots
                    .iter()
                    .map(|s| {
                        model(s)
                            .elements()
                            .ok_or_else(|| Error::Domain(format!("{} cannot be enumerated", model(s).id())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(cartesian(&pools))
            }
            Sampling::Random { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Ok((0..samples)
                    .map(|_| slots.iter().map(|s| model(s).sample(&mut rng)).collect())
                    .collect())
            }
        }
    }

    /// Max residual of τ(α(g)h) = gτ(h)g⁻¹, α(τ(h))(h′) = hh′h⁻¹ and
    /// α(e)h = h.
    pub fn check_peiffer(&self, sampling: Sampling) -> Result<f64> {
        let mut worst = 0.0f64;
        let e = self.g.identity();
        for t in self.draws(sampling, &[Slot::G, Slot::H, Slot::H])? {
            let (g, h, h2) = (&t[0], &t[1], &t[2]);
            let lhs = self.tau(&self.alpha(g, h)?)?;
            let rhs = self.g.product(&[g, &self.tau(h)?, &self.g.inverse(g)?])?;
            worst = worst.max(self.g.distance(&lhs, &rhs)?);
            let lhs = self.alpha(&self.tau(h)?, h2)?;
            let rhs = self.h.product(&[h, h2, &self.h.inverse(h)?])?;
            worst = worst.max(self.h.distance(&lhs, &rhs)?);
            worst = worst.max(self.h.distance(&self.alpha(&e, h)?, h)?);
        }
        Ok(worst)
    }

    /// Max residual of h∘f = f·1_{b⁻¹}·h = h·1_{b⁻¹}·f for composable
    /// f: a → b, h: b → c, together with hk = h∘k = kh whenever
    /// t(k) = s(h) = e.
    pub fn check_compose_via_product(&self, sampling: Sampling) -> Result<f64> {
        let mut worst = 0.0f64;
        for t in self.draws(sampling, &[Slot::G, Slot::H, Slot::H])? {
            let f = Morphism2 { h: t[1].clone(), a: t[0].clone() };
            let b = self.mor_target(&f)?;
            let hm = Morphism2 { h: t[2].clone(), a: b.clone() };
            let composite = self.mor_compose(&hm, &f)?;
            let unit = self.identity_mor(&self.g.inverse(&b)?);
            let left = self.mor_product(&self.mor_product(&f, &unit)?, &hm)?;
            let right = self.mor_product(&self.mor_product(&hm, &unit)?, &f)?;
            worst = worst
                .max(self.mor_distance(&composite, &left)?)
                .max(self.mor_distance(&composite, &right)?);

            let e = self.g.identity();
            let k = Morphism2 { h: t[1].clone(), a: self.g.inverse(&self.tau(&t[1])?)? };
            let hh = Morphism2 { h: t[2].clone(), a: e };
            let hk = self.mor_product(&hh, &k)?;
            let kh = self.mor_product(&k, &hh)?;
            let vert = self.mor_compose(&hh, &k)?;
            worst = worst.max(self.mor_distance(&hk, &vert)?).max(self.mor_distance(&kh, &vert)?);
        }
        Ok(worst)
    }

    /// Max residual of (f⊗g)∘(f′⊗g′) = (f∘f′)⊗(g∘g′) with ⊗ the product.
    pub fn check_exchange_law(&self, sampling: Sampling) -> Result<f64> {
        use Slot::{G, H};
        let mut worst = 0.0f64;
        for t in self.draws(sampling, &[G, H, H, G, H, H])? {
            let f1 = Morphism2 { h: t[1].clone(), a: t[0].clone() };
            let f2 = Morphism2 { h: t[2].clone(), a: self.mor_target(&f1)? };
            let g1 = Morphism2 { h: t[4].clone(), a: t[3].clone() };
            let g2 = Morphism2 { h: t[5].clone(), a: self.mor_target(&g1)? };
            let lhs = self.mor_compose(&self.mor_product(&f2, &g2)?, &self.mor_product(&f1, &g1)?)?;
            let rhs = self.mor_product(&self.mor_compose(&f2, &f1)?, &self.mor_compose(&g2, &g1)?)?;
            worst = worst.max(self.mor_distance(&lhs, &rhs)?);
        }
        Ok(worst)
    }

    /// Max residual of s, t and a ↦ 1_a being homomorphisms, and of
    /// m·m⁻¹ = 1_e.
    pub fn check_catgroup_homs(&self, sampling: Sampling) -> Result<f64> {
        use Slot::{G, H};
        let mut worst = 0.0f64;
        for t in self.draws(sampling, &[H, G, H, G])? {
            let m1 = Morphism2 { h: t[0].clone(), a: t[1].clone() };
            let m2 = Morphism2 { h: t[2].clone(), a: t[3].clone() };
            let p = self.mor_product(&m1, &m2)?;
            let s = self.g.multiply(&m1.a, &m2.a)?;
            worst = worst.max(self.g.distance(&self.mor_source(&p), &s)?);
            let tt = self.g.multiply(&self.mor_target(&m1)?, &self.mor_target(&m2)?)?;
            worst = worst.max(self.g.distance(&self.mor_target(&p)?, &tt)?);
            let units = self.mor_product(&self.identity_mor(&m1.a), &self.identity_mor(&m2.a))?;
            worst = worst.max(self.mor_distance(&units, &self.identity_mor(&s))?);
            let inv = self.mor_product(&m1, &self.mor_inverse(&m1)?)?;
            worst = worst.max(self.mor_distance(&inv, &self.mor_identity())?);
        }
        Ok(worst)
    }

    /// Max residual of vertical-composition associativity on composable triples.
    pub fn check_compose_associativity(&self, sampling: Sampling) -> Result<f64> {
        use Slot::{G, H};
        let mut worst = 0.0f64;
        for t in self.draws(sampling, &[G, H, H, H])? {
            let f1 = Morphism2 { h: t[1].clone(), a: t[0].clone() };
            let f2 = Morphism2 { h: t[2].clone(), a: self.mor_target(&f1)? };
            let f3 = Morphism2 { h: t[3].clone(), a: self.mor_target(&f2)? };
            let left = self.mor_compose(&self.mor_compose(&f3, &f2)?, &f1)?;
            let right = self.mor_compose(&f3, &self.mor_compose(&f2, &f1)?)?;
            worst = worst.max(self.mor_distance(&left, &right)?);
        }
        Ok(worst)
    }

    /// Max residual of τ_alg(α_alg(g)Z) = Ad(g)τ_alg(Z) and of α_alg being
    /// the derivative of α along exp.
    pub fn check_alpha_alg(&self, sampling: Sampling) -> Result<f64> {
        let Sampling::Random { samples, seed } = sampling else {
            return Err(Error::Domain("algebra checks need random sampling".into()));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let g = self.g.sample(&mut rng);
            let z = self.h.sample_algebra(&mut rng, 1.0);
            let lhs = self.tau_alg(&self.alpha_alg(&g, &z)?)?;
            let rhs = self.g.ad(&g, &self.tau_alg(&z)?)?;
            worst = worst.max(lhs.distance(&rhs));
            let eps = 1e-3;
            let acted = self.alpha(&g, &self.h.exp(&z.scale(eps))?)?;
            let lin = self.h.exp(&self.alpha_alg(&g, &z)?.scale(eps))?;
            worst = worst.max(self.h.distance(&acted, &lin)? / eps);
        }
        Ok(worst)
    }
}

fn index_pair(a: &GroupElement, b: &GroupElement) -> Result<(usize, usize)> {
    match (a.index(), b.index()) {
        (Some(i), Some(j)) => Ok((i, j)),
        _ => Err(Error::Domain("expected finite elements".into())),
    }
}

fn cartesian(pools: &[Vec<GroupElement>]) -> Vec<Vec<GroupElement>> {
    let mut out: Vec<Vec<GroupElement>> = vec![Vec::new()];
    for pool in pools {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |x| {
                    let mut next = prefix.clone();
                    next.push(x.clone());
                    next
                })
            })
            .collect();
    }
    out
}

pub type EmbedFn = Arc<dyn Fn(&GroupElement, &GroupElement) -> Result<GroupElement> + Send + Sync>;
pub type SplitFn = Arc<dyn Fn(&GroupElement) -> Result<(GroupElement, GroupElement)> + Send + Sync>;

/// A second crossed module stacked on a first one: its object group is the
/// semidirect product K = H ⋊ G of the base module, realized as a matrix
/// group via `embed`, with τ₂ = id and α₂ = conjugation in K.
#[derive(Clone)]
pub struct DoubleModule {
    base: CrossedModule,
    upper: CrossedModule,
    embed: EmbedFn,
    split: SplitFn,
}

impl fmt::Debug for DoubleModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleModule({:?} / {})", self.base, self.upper.g().id())
    }
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

impl DoubleModule {
    /// K = H ⋊ G for a conjugation module on a matrix group, embedded as
    /// (h, g) ↦ diag(hg, g).
    pub fn from_conjugation(base: CrossedModule) -> Result<Self> {
        let g = base.g().clone();
        let n = g.matrix_size().ok_or_else(|| Error::Domain("conjugation double needs a matrix group".into()))?;
        if base.h() != base.g() {
            return Err(Error::Domain("conjugation double needs H = G".into()));
        }
        let zero = DMatrix::zeros(n, n);
        let mut basis = Vec::new();
        for i in 0..g.dimension() {
            let mut c = vec![0.0; g.dimension()];
            c[i] = 1.0;
            let e = g.algebra_matrix(&g.algebra_from_slice(&c)?)?;
            basis.push((e.clone(), zero.clone()));
        }
        for i in 0..g.dimension() {
            let mut c = vec![0.0; g.dimension()];
            c[i] = 1.0;
            let e = g.algebra_matrix(&g.algebra_from_slice(&c)?)?;
            basis.push((zero.clone(), e));
        }
        let basis = basis.iter().map(|(a, b)| block_diag(a, b)).collect();
        let k = GroupModel::matrix_lie(&format!("{}x|{}", g.id(), g.id()), 2 * n, basis, true)?;
        let (k1, g1) = (k.clone(), g.clone());
        let embed: EmbedFn = Arc::new(move |h, a| {
            let (Some(hm), Some(am)) = (h.matrix(), a.matrix()) else {
                return Err(Error::Domain("expected matrix elements".into()));
            };
            k1.element_from_matrix(block_diag(&(hm * am), am))
        });
        let split: SplitFn = Arc::new(move |x| {
            let m = x.matrix().ok_or_else(|| Error::Domain("expected matrix element".into()))?;
            let top = m.view((0, 0), (n, n)).into_owned();
            let bottom = m.view((n, n), (n, n)).into_owned();
            let h = &top * bottom.transpose();
            Ok((g1.element_from_matrix(h)?, g1.element_from_matrix(bottom)?))
        });
        Ok(Self { upper: CrossedModule::conjugation(k), base, embed, split })
    }

    /// K = ℝⁿ ⋊ SO(n) = SE(n) for the abelian module, embedded as the affine
    /// matrix [[g, h], [0, 1]].
    pub fn from_abelian(base: CrossedModule) -> Result<Self> {
        let g = base.g().clone();
        let n = g.matrix_size().ok_or_else(|| Error::Domain("abelian double needs a matrix group".into()))?;
        if base.h().dimension() != n {
            return Err(Error::Domain("abelian double needs H = R^n".into()));
        }
        let mut basis = Vec::new();
        for i in 0..g.dimension() {
            let mut c = vec![0.0; g.dimension()];
            c[i] = 1.0;
            let e = g.algebra_matrix(&g.algebra_from_slice(&c)?)?;
            let mut m = DMatrix::zeros(n + 1, n + 1);
            m.view_mut((0, 0), (n, n)).copy_from(&e);
            basis.push(m);
        }
        for i in 0..n {
            let mut m = DMatrix::zeros(n + 1, n + 1);
            m[(i, n)] = 1.0;
            basis.push(m);
        }
        let k = GroupModel::matrix_lie(&format!("SE({n})"), n + 1, basis, false)?;
        let (k1, g1, h1) = (k.clone(), g.clone(), base.h().clone());
        let embed: EmbedFn = Arc::new(move |h, a| {
            let (Some(v), Some(am)) = (h.vector(), a.matrix()) else {
                return Err(Error::Domain("expected (vector, matrix) elements".into()));
            };
            let mut m = DMatrix::identity(n + 1, n + 1);
            m.view_mut((0, 0), (n, n)).copy_from(am);
            m.view_mut((0, n), (n, 1)).copy_from(v);
            k1.element_from_matrix(m)
        });
        let split: SplitFn = Arc::new(move |x| {
            let m = x.matrix().ok_or_else(|| Error::Domain("expected matrix element".into()))?;
            let r = m.view((0, 0), (n, n)).into_owned();
            let v = DVector::from_iterator(n, (0..n).map(|i| m[(i, n)]));
            Ok((h1.element_from_vector(v)?, g1.element_from_matrix(r)?))
        });
        Ok(Self { upper: CrossedModule::conjugation(k), base, embed, split })
    }

    pub fn base(&self) -> &CrossedModule {
        &self.base
    }

    pub fn upper(&self) -> &CrossedModule {
        &self.upper
    }

    pub fn k(&self) -> &GroupModel {
        self.upper.g()
    }

    /// ι(h, g) ∈ K.
    pub fn embed(&self, h: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        (self.embed)(h, g)
    }

    /// Inverse of ι: K → H × G.
    pub fn split(&self, k: &GroupElement) -> Result<(GroupElement, GroupElement)> {
        (self.split)(k)
    }

    /// α₂(ι(h, g))(k).
    pub fn alpha2(&self, h: &GroupElement, g: &GroupElement, k: &GroupElement) -> Result<GroupElement> {
        self.upper.alpha(&self.embed(h, g)?, k)
    }

    /// Max residual of
    /// α₂(α₁(g₁⁻¹)(h₁⁻¹h))(α₂(g₁⁻¹)(k)) = α₂(g₁⁻¹h₁⁻¹h)(k),
    /// where g₁⁻¹h₁⁻¹h is the product (e, g₁⁻¹)(h₁⁻¹h, e) in H ⋊ G.
    pub fn check_lemma_alpha2(&self, samples: usize, seed: u64) -> Result<f64> {
        let (g, h, k) = (self.base.g(), self.base.h(), self.k());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let g1 = g.sample(&mut rng);
            let h1 = h.sample(&mut rng);
            let hh = h.sample(&mut rng);
            let kk = k.sample(&mut rng);
            let g1i = g.inverse(&g1)?;
            let shifted = self.base.alpha(&g1i, &h.multiply(&h.inverse(&h1)?, &hh)?)?;
            let inner = self.alpha2(&h.identity(), &g1i, &kk)?;
            let lhs = self.alpha2(&shifted, &g.identity(), &inner)?;
            let prod = self.base.mor_product(
                &Morphism2 { h: h.identity(), a: g1i.clone() },
                &Morphism2 { h: h.multiply(&h.inverse(&h1)?, &hh)?, a: g.identity() },
            )?;
            let rhs = self.alpha2(&prod.h, &prod.a, &kk)?;
            worst = worst.max(k.distance(&lhs, &rhs)?);
        }
        Ok(worst)
    }

    /// Max residual of ι being a homomorphism H ⋊ G → K with split ∘ ι = id.
    pub fn check_embedding(&self, samples: usize, seed: u64) -> Result<f64> {
        let (g, h, k) = (self.base.g(), self.base.h(), self.k());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let m1 = Morphism2 { h: h.sample(&mut rng), a: g.sample(&mut rng) };
            let m2 = Morphism2 { h: h.sample(&mut rng), a: g.sample(&mut rng) };
            let p = self.base.mor_product(&m1, &m2)?;
            let lhs = self.embed(&p.h, &p.a)?;
            let rhs = k.multiply(&self.embed(&m1.h, &m1.a)?, &self.embed(&m2.h, &m2.a)?)?;
            worst = worst.max(k.distance(&lhs, &rhs)?);
            let (hb, gb) = self.split(&lhs)?;
            worst = worst.max(h.distance(&hb, &p.h)?).max(g.distance(&gb, &p.a)?);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand100() -> Sampling {
        Sampling::Random { samples: 100, seed: 42 }
    }

    fn so2_angle(m: &GroupModel, t: f64) -> GroupElement {
        m.exp(&m.algebra_from_slice(&[t]).unwrap()).unwrap()
    }

    #[test]
    fn peiffer_on_builtins_and_broken() {
        let so3 = GroupModel::so(3).unwrap();
        assert!(CrossedModule::conjugation(so3.clone()).check_peiffer(rand100()).unwrap() < 1e-12);
        assert!(CrossedModule::abelian(3).unwrap().check_peiffer(rand100()).unwrap() < 1e-12);
        assert!(CrossedModule::broken_trivial_action(so3).check_peiffer(rand100()).unwrap() > 0.1);
        assert_eq!(CrossedModule::z4_to_z2().check_peiffer(Sampling::Exhaustive).unwrap(), 0.0);
    }

    #[test]
    fn so2_source_target_and_compose_by_hand() {
        let so2 = GroupModel::so(2).unwrap();
        let cm = CrossedModule::conjugation(so2.clone());
        let m = Morphism2 { h: so2_angle(&so2, 0.3), a: so2_angle(&so2, 0.1) };
        assert!(so2.distance(&cm.mor_target(&m).unwrap(), &so2_angle(&so2, 0.4)).unwrap() < 1e-15);
        let m2 = Morphism2 { h: so2_angle(&so2, 0.2), a: so2_angle(&so2, 0.4) };
        let c = cm.mor_compose(&m2, &m).unwrap();
        assert!(so2.distance(&c.h, &so2_angle(&so2, 0.5)).unwrap() < 1e-15);
        assert!(so2.distance(&c.a, &so2_angle(&so2, 0.1)).unwrap() < 1e-15);
    }

    #[test]
    fn non_composable_reports_distance() {
        let so2 = GroupModel::so(2).unwrap();
        let cm = CrossedModule::conjugation(so2.clone());
        let m1 = Morphism2 { h: so2_angle(&so2, 0.3), a: so2.identity() };
        let m2 = cm.identity_mor(&so2.identity());
        match cm.mor_compose(&m2, &m1) {
            Err(Error::Composition { distance }) => assert!(distance > 0.2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn abelian_product_by_hand() {
        let cm = CrossedModule::abelian(2).unwrap();
        let (g, h) = (cm.g().clone(), cm.h().clone());
        let v = h.element_from_vector(DVector::from_vec(vec![1.0, 2.0])).unwrap();
        let w = h.element_from_vector(DVector::from_vec(vec![0.5, -1.0])).unwrap();
        let (t1, t2) = (0.7, -0.2);
        let m1 = Morphism2 { h: v.clone(), a: so2_angle(&g, t1) };
        let m2 = Morphism2 { h: w.clone(), a: so2_angle(&g, t2) };
        let p = cm.mor_product(&m1, &m2).unwrap();
        let (c, s) = (t1.cos(), t1.sin());
        let expected = DVector::from_vec(vec![1.0 + c * 0.5 - -s, 2.0 + s * 0.5 + -c]);
        assert!((p.h.vector().unwrap() - expected).amax() < 1e-15);
        assert!(g.distance(&p.a, &so2_angle(&g, t1 + t2)).unwrap() < 1e-15);
        assert_eq!(cm.mor_target(&m1).unwrap(), m1.a);
    }

    #[test]
    fn categorical_group_laws_sampled() {
        let so3 = GroupModel::so(3).unwrap();
        for cm in [CrossedModule::conjugation(so3), CrossedModule::abelian(3).unwrap()] {
            assert!(cm.check_compose_via_product(rand100()).unwrap() < 1e-11, "{cm:?}");
            assert!(cm.check_exchange_law(rand100()).unwrap() < 1e-11, "{cm:?}");
            assert!(cm.check_catgroup_homs(rand100()).unwrap() < 1e-11, "{cm:?}");
            assert!(cm.check_compose_associativity(rand100()).unwrap() < 1e-12, "{cm:?}");
            assert!(cm.check_alpha_alg(rand100()).unwrap() < 1e-10, "{cm:?}");
        }
    }

    #[test]
    fn finite_module_exhaustively_exact() {
        let cm = CrossedModule::z4_to_z2();
        let all = Sampling::Exhaustive;
        assert_eq!(cm.check_exchange_law(all).unwrap(), 0.0);
        assert_eq!(cm.check_compose_via_product(all).unwrap(), 0.0);
        assert_eq!(cm.check_catgroup_homs(all).unwrap(), 0.0);
        let s3 = CrossedModule::conjugation(GroupModel::finite("S3", CayleyTable::symmetric(3)));
        assert_eq!(s3.check_peiffer(all).unwrap(), 0.0);
        assert_eq!(s3.check_catgroup_homs(all).unwrap(), 0.0);
    }

    #[test]
    fn double_modules() {
        let so3 = GroupModel::so(3).unwrap();
        let dc = DoubleModule::from_conjugation(CrossedModule::conjugation(so3)).unwrap();
        assert!(dc.check_embedding(50, 1).unwrap() < 1e-12);
        assert!(dc.check_lemma_alpha2(50, 2).unwrap() < 1e-11);
        assert!(dc.upper().check_peiffer(Sampling::Random { samples: 20, seed: 3 }).unwrap() < 1e-11);
        let da = DoubleModule::from_abelian(CrossedModule::abelian(3).unwrap()).unwrap();
        assert!(da.check_embedding(50, 1).unwrap() < 1e-12);
        assert!(da.check_lemma_alpha2(50, 2).unwrap() < 1e-11);
    }
}
