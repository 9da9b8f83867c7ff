//! Lie-algebra valued differential forms on the base ℝⁿ.
//!
//! Forms are given by their components as functions of the base point.
//! Bundle-level forms are obtained from these by the α(g⁻¹)-twist, which
//! makes them equivariant and vertical-vanishing by construction.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::group::{AlgebraElement, GroupElement, GroupModel};

/// Central finite-difference step for numerical exterior derivatives.
pub const FD_STEP: f64 = 1e-5;

pub type ComponentsFn = Arc<dyn Fn(&[f64]) -> Result<Vec<AlgebraElement>> + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(&[f64]) -> Result<GroupElement> + Send + Sync>;

/// Index of the pair (i, j), i < j, in the lexicographic list of pairs.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn check_dim(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::Domain(format!("base point of dimension {} for forms on R^{n}", x.len())));
    }
    Ok(())
}

/// 1-form a = Σ aᵢ(x) dxᵢ with values in the algebra of `model`.
#[derive(Clone)]
pub struct OneForm {
    model: GroupModel,
    base_dim: usize,
    comps: ComponentsFn,
    exterior: Option<ComponentsFn>,
    zero: bool,
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OneForm({} on R^{}, analytic d: {})", self.model.id(), self.base_dim, self.exterior.is_some())
    }
}

impl OneForm {
    /// Form with numerically differentiated exterior derivative.
    pub fn new(model: GroupModel, base_dim: usize, comps: ComponentsFn) -> Self {
        Self { model, base_dim, comps, exterior: None, zero: false }
    }

    /// Form whose exterior derivative components (pairs i < j) are supplied.
    pub fn with_exterior(model: GroupModel, base_dim: usize, comps: ComponentsFn, exterior: ComponentsFn) -> Self {
        Self { model, base_dim, comps, exterior: Some(exterior), zero: false }
    }

    pub fn zero(model: GroupModel, base_dim: usize) -> Self {
        let (m1, m2) = (model.clone(), model.clone());
        let mut form = Self::with_exterior(
            model,
            base_dim,
            Arc::new(move |_| Ok(vec![m1.zero_algebra(); base_dim])),
            Arc::new(move |_| Ok(vec![m2.zero_algebra(); pair_count(base_dim)])),
        );
        form.zero = true;
        form
    }

    /// True for forms built by [`OneForm::zero`].
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// aᵢ(x) = cᵢ + Σₖ Lᵢₖ xₖ with algebra coefficient vectors; the exterior
    /// derivative is analytic: (da)ᵢⱼ = Lⱼᵢ − Lᵢⱼ.
    pub fn affine(model: GroupModel, constant: Vec<Vec<f64>>, linear: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let n = constant.len();
        let d = model.dimension();
        if linear.len() != n
            || linear.iter().any(|row| row.len() != n || row.iter().any(|c| c.len() != d))
            || constant.iter().any(|c| c.len() != d)
        {
            return Err(Error::Domain("affine form coefficients have wrong shape".into()));
        }
        let (m1, m2) = (model.clone(), model.clone());
        let lin = linear.clone();
        let comps: ComponentsFn = Arc::new(move |x| {
            check_dim(x, n)?;
            (0..n)
                .map(|i| {
                    let mut v = DVector::from_column_slice(&constant[i]);
                    for (k, xk) in x.iter().enumerate() {
                        v += DVector::from_column_slice(&lin[i][k]) * *xk;
                    }
                    m1.algebra(v)
                })
                .collect()
        });
        let mut ext = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = DVector::from_column_slice(&linear[j][i]) - DVector::from_column_slice(&linear[i][j]);
                ext.push(m2.algebra(v)?);
            }
        }
        let exterior: ComponentsFn = Arc::new(move |_| Ok(ext.clone()));
        Ok(Self::with_exterior(model, n, comps, exterior))
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn components(&self, x: &[f64]) -> Result<Vec<AlgebraElement>> {
        check_dim(x, self.base_dim)?;
        (self.comps)(x)
    }

    /// a(x)(v) = Σ vᵢ aᵢ(x).
    pub fn eval(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<AlgebraElement> {
        let comps = self.components(x.as_slice())?;
        let mut acc = self.model.zero_algebra();
        for (c, vi) in comps.iter().zip(v.iter()) {
            if *vi != 0.0 {
                acc = &acc + &c.scale(*vi);
            }
        }
        Ok(acc)
    }

    /// Components (da)ᵢⱼ = ∂ᵢaⱼ − ∂ⱼaᵢ for i < j, analytic when available,
    /// otherwise by central differences with step [`FD_STEP`].
    pub fn exterior_components(&self, x: &[f64]) -> Result<Vec<AlgebraElement>> {
        check_dim(x, self.base_dim)?;
        if let Some(ext) = &self.exterior {
            return ext(x);
        }
        let n = self.base_dim;
        let mut partial = Vec::with_capacity(n);
        for i in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += FD_STEP;
            xm[i] -= FD_STEP;
            let (ap, am) = ((self.comps)(&xp)?, (self.comps)(&xm)?);
            partial.push(ap.iter().zip(&am).map(|(p, m)| (p - m).scale(0.5 / FD_STEP)).collect::<Vec<_>>());
        }
        let mut out = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                out.push(&partial[i][j] - &partial[j][i]);
            }
        }
        Ok(out)
    }

    /// da(x)(v, w).
    pub fn exterior_eval(&self, x: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> Result<AlgebraElement> {
        let comps = self.exterior_components(x.as_slice())?;
        Ok(contract_pairs(&self.model, self.base_dim, &comps, v, w))
    }
}

fn contract_pairs(model: &GroupModel, n: usize, comps: &[AlgebraElement], v: &DVector<f64>, w: &DVector<f64>) -> AlgebraElement {
    let mut acc = model.zero_algebra();
    for i in 0..n {
        for j in i + 1..n {
            let c = v[i] * w[j] - v[j] * w[i];
            if c != 0.0 {
                acc = &acc + &comps[pair_index(n, i, j)].scale(c);
            }
        }
    }
    acc
}

/// Curvature F(v, w) = da(v, w) + [a(v), a(w)].
pub fn curvature(form: &OneForm, x: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> Result<AlgebraElement> {
    let d = form.exterior_eval(x, v, w)?;
    let br = form.model.bracket(&form.eval(x, v)?, &form.eval(x, w)?)?;
    Ok(&d + &br)
}

/// 2-form b = Σ_{i<j} bᵢⱼ(x) dxᵢ∧dxⱼ.
#[derive(Clone)]
pub struct TwoForm {
    model: GroupModel,
    base_dim: usize,
    comps: ComponentsFn,
}

impl fmt::Debug for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoForm({} on R^{})", self.model.id(), self.base_dim)
    }
}

impl TwoForm {
    pub fn new(model: GroupModel, base_dim: usize, comps: ComponentsFn) -> Self {
        Self { model, base_dim, comps }
    }

    pub fn zero(model: GroupModel, base_dim: usize) -> Self {
        let m = model.clone();
        Self::new(model, base_dim, Arc::new(move |_| Ok(vec![m.zero_algebra(); pair_count(base_dim)])))
    }

    /// bᵢⱼ(x) = cᵢⱼ + Σₖ Lᵢⱼₖ xₖ, pairs in lexicographic order.
    pub fn affine(model: GroupModel, base_dim: usize, constant: Vec<Vec<f64>>, linear: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let p = pair_count(base_dim);
        let d = model.dimension();
        if constant.len() != p
            || linear.len() != p
            || constant.iter().any(|c| c.len() != d)
            || linear.iter().any(|row| row.len() != base_dim || row.iter().any(|c| c.len() != d))
        {
            return Err(Error::Domain("affine 2-form coefficients have wrong shape".into()));
        }
        let m = model.clone();
        Ok(Self::new(
            model,
            base_dim,
            Arc::new(move |x| {
                check_dim(x, base_dim)?;
                (0..p)
                    .map(|q| {
                        let mut v = DVector::from_column_slice(&constant[q]);
                        for (k, xk) in x.iter().enumerate() {
                            v += DVector::from_column_slice(&linear[q][k]) * *xk;
                        }
                        m.algebra(v)
                    })
                    .collect()
            }),
        ))
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// b(x)(v, w) = Σ_{i<j} bᵢⱼ(x)(vᵢwⱼ − vⱼwᵢ).
    pub fn eval(&self, x: &DVector<f64>, v: &DVector<f64>, w: &DVector<f64>) -> Result<AlgebraElement> {
        check_dim(x.as_slice(), self.base_dim)?;
        let comps = (self.comps)(x.as_slice())?;
        Ok(contract_pairs(&self.model, self.base_dim, &comps, v, w))
    }
}

/// Group-valued function on the base.
#[derive(Clone)]
pub struct GroupField {
    model: GroupModel,
    base_dim: usize,
    f: FieldFn,
}

impl fmt::Debug for GroupField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupField({} on R^{})", self.model.id(), self.base_dim)
    }
}

impl GroupField {
    pub fn new(model: GroupModel, base_dim: usize, f: FieldFn) -> Self {
        Self { model, base_dim, f }
    }

    pub fn constant(model: GroupModel, base_dim: usize, value: GroupElement) -> Self {
        Self::new(model, base_dim, Arc::new(move |_| Ok(value.clone())))
    }

    /// x ↦ exp(c + Σₖ xₖ Lₖ).
    pub fn exp_affine(model: GroupModel, constant: Vec<f64>, linear: Vec<Vec<f64>>) -> Result<Self> {
        let d = model.dimension();
        let n = linear.len();
        if constant.len() != d || linear.iter().any(|c| c.len() != d) {
            return Err(Error::Domain("field coefficients have wrong shape".into()));
        }
        let m = model.clone();
        Ok(Self::new(
            model,
            n,
            Arc::new(move |x| {
                check_dim(x, n)?;
                let mut v = DVector::from_column_slice(&constant);
                for (k, xk) in x.iter().enumerate() {
                    v += DVector::from_column_slice(&linear[k]) * *xk;
                }
                m.exp(&m.algebra(v)?)
            }),
        ))
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn eval(&self, x: &DVector<f64>) -> Result<GroupElement> {
        check_dim(x.as_slice(), self.base_dim)?;
        (self.f)(x.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: f64, b: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b])
    }

    #[test]
    fn pair_indices_are_lexicographic() {
        assert_eq!(pair_index(3, 0, 1), 0);
        assert_eq!(pair_index(3, 0, 2), 1);
        assert_eq!(pair_index(3, 1, 2), 2);
        assert_eq!(pair_index(4, 2, 3), 5);
    }

    #[test]
    fn constant_form_curvature_is_bracket() {
        let so3 = GroupModel::so(3).unwrap();
        let a = OneForm::affine(so3.clone(), vec![vec![0.3, 0.0, 0.1], vec![0.0, -0.2, 0.4]], vec![vec![vec![0.0; 3]; 2]; 2]).unwrap();
        let x = v(0.2, -0.7);
        let (e1, e2) = (v(1.0, 0.0), v(0.0, 1.0));
        let f = curvature(&a, &x, &e1, &e2).unwrap();
        let br = so3.bracket(&a.eval(&x, &e1).unwrap(), &a.eval(&x, &e2).unwrap()).unwrap();
        assert!(f.distance(&br) < 1e-15);
    }

    #[test]
    fn so2_area_curvature_by_finite_differences() {
        let so2 = GroupModel::so(2).unwrap();
        let m = so2.clone();
        // a = x₁ dx₂ · J, no analytic exterior derivative supplied
        let a = OneForm::new(
            so2.clone(),
            2,
            Arc::new(move |x| Ok(vec![m.zero_algebra(), m.algebra_from_slice(&[x[0]])?])),
        );
        let f = curvature(&a, &v(0.4, 1.3), &v(1.0, 0.0), &v(0.0, 1.0)).unwrap();
        assert!((f.coeffs()[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn curvature_is_exactly_antisymmetric() {
        let so3 = GroupModel::so(3).unwrap();
        let lin = vec![vec![vec![0.1, 0.2, 0.0], vec![0.0, 0.3, -0.1]], vec![vec![0.2, 0.0, 0.1], vec![-0.3, 0.1, 0.2]]];
        let a = OneForm::affine(so3, vec![vec![0.3, 0.0, 0.1], vec![0.0, -0.2, 0.4]], lin).unwrap();
        let x = v(0.5, 0.25);
        let (p, q) = (v(0.3, -1.1), v(0.7, 0.2));
        let f1 = curvature(&a, &x, &p, &q).unwrap();
        let f2 = curvature(&a, &x, &q, &p).unwrap();
        assert_eq!(f1, -f2);
    }

    #[test]
    fn analytic_and_numeric_exterior_agree() {
        let so3 = GroupModel::so(3).unwrap();
        let lin = vec![vec![vec![0.1, 0.2, 0.0], vec![0.0, 0.3, -0.1]], vec![vec![0.2, 0.0, 0.1], vec![-0.3, 0.1, 0.2]]];
        let a = OneForm::affine(so3.clone(), vec![vec![0.0; 3]; 2], lin).unwrap();
        let numeric = OneForm::new(so3, 2, a.comps.clone());
        let x = [0.3, -0.4];
        let d1 = a.exterior_components(&x).unwrap();
        let d2 = numeric.exterior_components(&x).unwrap();
        assert!(d1[0].distance(&d2[0]) < 1e-9);
    }

    #[test]
    fn two_form_contraction() {
        let so2 = GroupModel::so(2).unwrap();
        let b = TwoForm::affine(so2, 2, vec![vec![1.0]], vec![vec![vec![0.0]; 2]]).unwrap();
        let val = b.eval(&v(0.0, 0.0), &v(1.0, 2.0), &v(3.0, 4.0)).unwrap();
        assert_eq!(val.coeffs()[0], 1.0 * 4.0 - 2.0 * 3.0);
    }
}
