//! Associated vector bundles: classes [p, v] with (p, v) ~ (p·g, ρ(g⁻¹)v),
//! kept in the gauge where the fiber component of p is the identity, and
//! their transport [p, v] ↦ [t(F), v] along a categorical-connection lift F.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crossed::{CrossedModule, Morphism2, MATCH_TOL};
use crate::decorated::CategoricalConnection;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};
use crate::path::{BundlePoint, SampledPath};

pub type RhoFn = Arc<dyn Fn(&GroupElement, &DVector<f64>) -> Result<DVector<f64>> + Send + Sync>;

/// Representation of G on ℝ^dim, extended to morphisms by the pair action
/// ρ(m)(v, w) = (ρ(s(m))v, ρ(t(m))w).
#[derive(Clone)]
pub struct Representation {
    model: GroupModel,
    dim: usize,
    rho: RhoFn,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Representation({} on R^{})", self.model.id(), self.dim)
    }
}

impl Representation {
    pub fn new(model: GroupModel, dim: usize, rho: RhoFn) -> Self {
        Self { model, dim, rho }
    }

    /// Defining representation of a matrix group.
    pub fn defining(model: GroupModel) -> Result<Self> {
        let dim = model
            .matrix_size()
            .ok_or_else(|| Error::Unsupported { op: "defining representation", model: model.id().to_string() })?;
        Ok(Self::new(model, dim, Arc::new(|g, v| Ok(g.matrix().expect("matrix payload") * v))))
    }

    pub fn trivial(model: GroupModel, dim: usize) -> Self {
        Self::new(model, dim, Arc::new(|_, v| Ok(v.clone())))
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho_obj(&self, g: &GroupElement, v: &DVector<f64>) -> Result<DVector<f64>> {
        if v.len() != self.dim {
            return Err(Error::Domain(format!("vector of length {} for a rank-{} representation", v.len(), self.dim)));
        }
        (self.rho)(g, v)
    }

    pub fn rho_mor(&self, cm: &CrossedModule, m: &Morphism2, v: &DVector<f64>, w: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
        Ok((self.rho_obj(&cm.mor_source(m), v)?, self.rho_obj(&cm.mor_target(m)?, w)?))
    }

    /// Max of |ρ(e)v − v| and |ρ(g₁g₂)v − ρ(g₁)ρ(g₂)v| over seeded samples.
    pub fn check(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let v = DVector::from_fn(self.dim, |_, _| rand::Rng::gen_range(&mut rng, -1.0..1.0));
            let (a, b) = (self.model.sample(&mut rng), self.model.sample(&mut rng));
            worst = worst.max((self.rho_obj(&self.model.identity(), &v)? - &v).amax());
            let lhs = self.rho_obj(&self.model.multiply(&a, &b)?, &v)?;
            let rhs = self.rho_obj(&a, &self.rho_obj(&b, &v)?)?;
            worst = worst.max((lhs - rhs).amax());
        }
        Ok(worst)
    }
}

/// A class [p, v] stored with p = (x, e).
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedClass {
    pub x: DVector<f64>,
    pub v: DVector<f64>,
}

impl TwistedClass {
    pub fn point(&self, model: &GroupModel) -> BundlePoint {
        BundlePoint { x: self.x.clone(), g: model.identity() }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.x - &other.x).amax().max((&self.v - &other.v).amax())
    }
}

/// [(x, g), v] = [(x, e), ρ(g)v].
pub fn normalize_class(p: &BundlePoint, v: &DVector<f64>, rep: &Representation) -> Result<TwistedClass> {
    Ok(TwistedClass { x: p.x.clone(), v: rep.rho_obj(&p.g, v)? })
}

/// Transport of the class of an arbitrary representative (p, v) along f.
pub fn assoc_transport_rep(
    lifter: &dyn CategoricalConnection,
    f: &SampledPath<DVector<f64>>,
    p: &BundlePoint,
    v: &DVector<f64>,
    rep: &Representation,
) -> Result<TwistedClass> {
    let gap = (&p.x - f.start()).amax();
    if gap > MATCH_TOL {
        return Err(Error::Fiber { distance: gap });
    }
    let lift = lifter.lift(f, p)?;
    normalize_class(&lift.target(lifter.cm())?, v, rep)
}

/// [p, v] ↦ [t(F), v] with F the lift of f through p.
pub fn assoc_transport(
    lifter: &dyn CategoricalConnection,
    f: &SampledPath<DVector<f64>>,
    cls: &TwistedClass,
    rep: &Representation,
) -> Result<TwistedClass> {
    assoc_transport_rep(lifter, f, &cls.point(lifter.cm().g()), &cls.v, rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_normalizes_by_direct_rotation() {
        let so2 = GroupModel::so(2).unwrap();
        let rep = Representation::defining(so2.clone()).unwrap();
        let theta = 0.7f64;
        let g = so2.exp(&so2.algebra_from_slice(&[theta]).unwrap()).unwrap();
        let p = BundlePoint { x: DVector::from_vec(vec![0.1, 0.2]), g };
        let cls = normalize_class(&p, &DVector::from_vec(vec![1.0, 0.0]), &rep).unwrap();
        assert!((cls.v[0] - theta.cos()).abs() < 1e-15);
        assert!((cls.v[1] - theta.sin()).abs() < 1e-15);
        assert!(rep.check(20, 3).unwrap() < 1e-14);
    }

    #[test]
    fn defining_needs_matrices() {
        assert!(Representation::defining(GroupModel::additive(2)).is_err());
    }
}
