//! Numeric carriers for groups and their Lie algebras.
//!
//! A [`GroupModel`] is one of three kinds: a matrix Lie group described by a
//! basis of its Lie algebra, an additive vector group ℝⁿ, or a finite group
//! given by a Cayley table. Elements carry the identifier of the model that
//! produced them and every model operation checks it.

mod finite;
pub mod matrix;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use finite::CayleyTable;

use crate::error::{Error, Result};

/// Identifier shared by a model and the elements it creates.
pub type ModelId = Arc<str>;

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Matrix(DMatrix<f64>),
    Vector(DVector<f64>),
    Index(usize),
}

impl Payload {
    /// Max-norm of the payload difference; infinite when the payload kinds
    /// or shapes differ, 0/1 for finite indices.
    pub fn max_diff(&self, other: &Payload) -> f64 {
        match (self, other) {
            (Payload::Matrix(a), Payload::Matrix(b)) if a.shape() == b.shape() => (a - b).amax(),
            (Payload::Vector(a), Payload::Vector(b)) if a.len() == b.len() => {
                if a.is_empty() {
                    0.0
                } else {
                    (a - b).amax()
                }
            }
            (Payload::Index(a), Payload::Index(b)) => f64::from(u8::from(a != b)),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    model: ModelId,
    payload: Payload,
}

impl GroupElement {
    pub fn model_id(&self) -> &str {
        &self.model
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn matrix(&self) -> Option<&DMatrix<f64>> {
        match &self.payload {
            Payload::Matrix(m) => Some(m),
            _ => None,
        }
    }

    pub fn vector(&self) -> Option<&DVector<f64>> {
        match &self.payload {
            Payload::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self.payload {
            Payload::Index(i) => Some(i),
            _ => None,
        }
    }

    /// Payload distance without consulting a model.
    pub fn max_diff(&self, other: &GroupElement) -> f64 {
        if self.model != other.model {
            return f64::INFINITY;
        }
        self.payload.max_diff(&other.payload)
    }
}

/// Lie algebra element as coefficients in the owning model's basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    model: ModelId,
    coeffs: DVector<f64>,
}

impl AlgebraElement {
    pub fn model_id(&self) -> &str {
        &self.model
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn norm_max(&self) -> f64 {
        if self.coeffs.is_empty() {
            0.0
        } else {
            self.coeffs.amax()
        }
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement { model: self.model.clone(), coeffs: &self.coeffs * s }
    }

    /// Max-norm distance; infinite across models.
    pub fn distance(&self, other: &AlgebraElement) -> f64 {
        if self.model != other.model || self.coeffs.len() != other.coeffs.len() {
            return f64::INFINITY;
        }
        if self.coeffs.is_empty() {
            return 0.0;
        }
        (&self.coeffs - &other.coeffs).amax()
    }

    fn same_model(&self, other: &AlgebraElement) {
        assert!(
            self.model == other.model,
            "algebra elements from different models: {} vs {}",
            self.model,
            other.model
        );
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    /// Panics when the operands belong to different models.
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.same_model(rhs);
        AlgebraElement { model: self.model.clone(), coeffs: &self.coeffs + &rhs.coeffs }
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        &self + &rhs
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.same_model(rhs);
        AlgebraElement { model: self.model.clone(), coeffs: &self.coeffs - &rhs.coeffs }
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        &self - &rhs
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { model: self.model.clone(), coeffs: -&self.coeffs }
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

impl Mul<f64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, s: f64) -> AlgebraElement {
        self.scale(s)
    }
}

impl Mul<f64> for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, s: f64) -> AlgebraElement {
        self.scale(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Matrix,
    AdditiveVector,
    FiniteTable,
}

#[derive(Debug)]
struct MatrixLie {
    size: usize,
    basis: Vec<DMatrix<f64>>,
    gram_inv: DMatrix<f64>,
    orthogonal: bool,
}

#[derive(Debug)]
enum Kind {
    Matrix(MatrixLie),
    Additive { dim: usize },
    Finite(CayleyTable),
}

/// A group together with its Lie algebra (when it has one).
#[derive(Clone)]
pub struct GroupModel {
    id: ModelId,
    kind: Arc<Kind>,
}

impl fmt::Debug for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupModel({})", self.id)
    }
}

impl PartialEq for GroupModel {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

/// Maximal residuals reported by [`GroupModel::group_axiom_report`].
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub seed: Option<u64>,
    pub samples: usize,
    pub associativity: f64,
    pub identity: f64,
    pub inverse: f64,
}

impl AxiomReport {
    pub fn max(&self) -> f64 {
        self.associativity.max(self.identity).max(self.inverse)
    }
}

impl GroupModel {
    /// Matrix Lie group whose algebra is spanned by `basis` (linearly
    /// independent `size`×`size` matrices). `orthogonal` asserts that every
    /// element satisfies gᵀg = I, which enables transposed inverses.
    pub fn matrix_lie(name: &str, size: usize, basis: Vec<DMatrix<f64>>, orthogonal: bool) -> Result<Self> {
        if basis.iter().any(|b| b.shape() != (size, size)) {
            return Err(Error::Domain(format!("basis of {name} has wrong matrix shape")));
        }
        let d = basis.len();
        let gram = DMatrix::from_fn(d, d, |i, j| basis[i].dot(&basis[j]));
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::Domain(format!("basis of {name} is linearly dependent")))?;
        Ok(Self {
            id: Arc::from(name),
            kind: Arc::new(Kind::Matrix(MatrixLie { size, basis, gram_inv, orthogonal })),
        })
    }

    /// SO(2) with basis J = [[0,−1],[1,0]], or SO(3) with basis the hat
    /// matrices of e₁, e₂, e₃.
    pub fn so(n: usize) -> Result<Self> {
        match n {
            2 => Self::matrix_lie("SO(2)", 2, vec![DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])], true),
            3 => Self::matrix_lie("SO(3)", 3, (0..3).map(|k| hat3(k, 1.0)).collect(), true),
            _ => Err(Error::Domain(format!("SO({n}) is not provided"))),
        }
    }

    /// The additive group ℝⁿ; its algebra is ℝⁿ and exp is the identity map.
    pub fn additive(dim: usize) -> Self {
        Self { id: Arc::from(format!("R^{dim}").as_str()), kind: Arc::new(Kind::Additive { dim }) }
    }

    pub fn finite(name: &str, table: CayleyTable) -> Self {
        Self { id: Arc::from(name), kind: Arc::new(Kind::Finite(table)) }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> ModelKind {
        match *self.kind {
            Kind::Matrix(_) => ModelKind::Matrix,
            Kind::Additive { .. } => ModelKind::AdditiveVector,
            Kind::Finite(_) => ModelKind::FiniteTable,
        }
    }

    /// Lie algebra dimension (0 for finite groups).
    pub fn dimension(&self) -> usize {
        match &*self.kind {
            Kind::Matrix(m) => m.basis.len(),
            Kind::Additive { dim } => *dim,
            Kind::Finite(_) => 0,
        }
    }

    /// Matrix size for matrix models.
    pub fn matrix_size(&self) -> Option<usize> {
        match &*self.kind {
            Kind::Matrix(m) => Some(m.size),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&CayleyTable> {
        match &*self.kind {
            Kind::Finite(t) => Some(t),
            _ => None,
        }
    }

    /// Number of elements for finite models.
    pub fn order(&self) -> Option<usize> {
        self.table().map(CayleyTable::order)
    }

    fn unsupported(&self, op: &'static str) -> Error {
        Error::Unsupported { op, model: self.id.to_string() }
    }

    fn check_element(&self, g: &GroupElement) -> Result<()> {
        if g.model != self.id {
            return Err(Error::Domain(format!("element of {} used with model {}", g.model, self.id)));
        }
        Ok(())
    }

    fn check_algebra(&self, x: &AlgebraElement) -> Result<()> {
        if x.model != self.id {
            return Err(Error::Domain(format!("algebra element of {} used with model {}", x.model, self.id)));
        }
        Ok(())
    }

    fn wrap(&self, payload: Payload) -> GroupElement {
        GroupElement { model: self.id.clone(), payload }
    }

    fn wrap_alg(&self, coeffs: DVector<f64>) -> AlgebraElement {
        AlgebraElement { model: self.id.clone(), coeffs }
    }

    pub fn identity(&self) -> GroupElement {
        match &*self.kind {
            Kind::Matrix(m) => self.wrap(Payload::Matrix(DMatrix::identity(m.size, m.size))),
            Kind::Additive { dim } => self.wrap(Payload::Vector(DVector::zeros(*dim))),
            Kind::Finite(t) => self.wrap(Payload::Index(t.identity())),
        }
    }

    /// Builds an element from a matrix, checking shape, invertibility and
    /// (for orthogonal models) gᵀg = I within 1e−10.
    pub fn element_from_matrix(&self, m: DMatrix<f64>) -> Result<GroupElement> {
        let Kind::Matrix(lie) = &*self.kind else {
            return Err(self.unsupported("element_from_matrix"));
        };
        if m.shape() != (lie.size, lie.size) {
            return Err(Error::Domain(format!("matrix shape {:?} does not fit {}", m.shape(), self.id)));
        }
        if lie.orthogonal {
            let defect = (m.transpose() * &m - DMatrix::<f64>::identity(lie.size, lie.size)).amax();
            if defect > 1e-10 {
                return Err(Error::Domain(format!("matrix is not orthogonal (defect {defect:.3e})")));
            }
        } else if m.determinant().abs() < 1e-14 {
            return Err(Error::Domain("matrix is singular".into()));
        }
        Ok(self.wrap(Payload::Matrix(m)))
    }

    pub fn element_from_vector(&self, v: DVector<f64>) -> Result<GroupElement> {
        match &*self.kind {
            Kind::Additive { dim } if v.len() == *dim => Ok(self.wrap(Payload::Vector(v))),
            Kind::Additive { .. } => Err(Error::Domain(format!("vector length {} does not fit {}", v.len(), self.id))),
            _ => Err(self.unsupported("element_from_vector")),
        }
    }

    pub fn element_from_index(&self, i: usize) -> Result<GroupElement> {
        match &*self.kind {
            Kind::Finite(t) if i < t.order() => Ok(self.wrap(Payload::Index(i))),
            Kind::Finite(_) => Err(Error::Domain(format!("index {i} out of range for {}", self.id))),
            _ => Err(self.unsupported("element_from_index")),
        }
    }

    /// All elements of a finite model in index order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.table().map(|t| (0..t.order()).map(|i| self.wrap(Payload::Index(i))).collect())
    }

    pub fn algebra(&self, coeffs: DVector<f64>) -> Result<AlgebraElement> {
        if coeffs.len() != self.dimension() {
            return Err(Error::Domain(format!(
                "coefficient vector of length {} for algebra of dimension {}",
                coeffs.len(),
                self.dimension()
            )));
        }
        Ok(self.wrap_alg(coeffs))
    }

    pub fn algebra_from_slice(&self, coeffs: &[f64]) -> Result<AlgebraElement> {
        self.algebra(DVector::from_column_slice(coeffs))
    }

    pub fn zero_algebra(&self) -> AlgebraElement {
        self.wrap_alg(DVector::zeros(self.dimension()))
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let payload = match (&*self.kind, &a.payload, &b.payload) {
            (Kind::Matrix(_), Payload::Matrix(x), Payload::Matrix(y)) => Payload::Matrix(x * y),
            (Kind::Additive { .. }, Payload::Vector(x), Payload::Vector(y)) => Payload::Vector(x + y),
            (Kind::Finite(t), Payload::Index(x), Payload::Index(y)) => Payload::Index(t.mul(*x, *y)),
            _ => return Err(Error::Domain(format!("payload kind does not match model {}", self.id))),
        };
        Ok(self.wrap(payload))
    }

    /// Product of a sequence, left to right.
    pub fn product(&self, items: &[&GroupElement]) -> Result<GroupElement> {
        let mut acc = self.identity();
        for g in items {
            acc = self.multiply(&acc, g)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        let payload = match (&*self.kind, &a.payload) {
            (Kind::Matrix(lie), Payload::Matrix(x)) => {
                if lie.orthogonal {
                    Payload::Matrix(x.transpose())
                } else {
                    Payload::Matrix(
                        x.clone()
                            .try_inverse()
                            .ok_or_else(|| Error::Domain("singular group element".into()))?,
                    )
                }
            }
            (Kind::Additive { .. }, Payload::Vector(x)) => Payload::Vector(-x),
            (Kind::Finite(t), Payload::Index(x)) => Payload::Index(t.inv(*x)),
            _ => return Err(Error::Domain(format!("payload kind does not match model {}", self.id))),
        };
        Ok(self.wrap(payload))
    }

    /// Matrix of an algebra element (matrix models only).
    pub fn algebra_matrix(&self, x: &AlgebraElement) -> Result<DMatrix<f64>> {
        self.check_algebra(x)?;
        let Kind::Matrix(lie) = &*self.kind else {
            return Err(self.unsupported("algebra_matrix"));
        };
        let mut m = DMatrix::zeros(lie.size, lie.size);
        for (c, b) in x.coeffs.iter().zip(&lie.basis) {
            if *c != 0.0 {
                m += b * *c;
            }
        }
        Ok(m)
    }

    /// Coordinates of a matrix in the algebra basis (orthogonal projection in
    /// the Frobenius inner product).
    pub fn algebra_from_matrix(&self, m: &DMatrix<f64>) -> Result<AlgebraElement> {
        let Kind::Matrix(lie) = &*self.kind else {
            return Err(self.unsupported("algebra_from_matrix"));
        };
        let rhs = DVector::from_iterator(lie.basis.len(), lie.basis.iter().map(|b| b.dot(m)));
        Ok(self.wrap_alg(&lie.gram_inv * rhs))
    }

    pub fn exp(&self, x: &AlgebraElement) -> Result<GroupElement> {
        self.check_algebra(x)?;
        match &*self.kind {
            Kind::Matrix(_) => Ok(self.wrap(Payload::Matrix(matrix::expm(&self.algebra_matrix(x)?)))),
            Kind::Additive { .. } => Ok(self.wrap(Payload::Vector(x.coeffs.clone()))),
            Kind::Finite(_) => Err(self.unsupported("exp")),
        }
    }

    /// Logarithm for elements near the identity.
    pub fn log_near_identity(&self, g: &GroupElement) -> Result<AlgebraElement> {
        self.check_element(g)?;
        match (&*self.kind, &g.payload) {
            (Kind::Matrix(_), Payload::Matrix(m)) => self.algebra_from_matrix(&matrix::logm(m)?),
            (Kind::Additive { .. }, Payload::Vector(v)) => Ok(self.wrap_alg(v.clone())),
            (Kind::Finite(_), _) => Err(self.unsupported("log_near_identity")),
            _ => Err(Error::Domain(format!("payload kind does not match model {}", self.id))),
        }
    }

    /// Adjoint action Ad(g)X = gXg⁻¹; identity on abelian additive models.
    pub fn ad(&self, g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(g)?;
        self.check_algebra(x)?;
        match (&*self.kind, &g.payload) {
            (Kind::Matrix(_), Payload::Matrix(m)) => {
                let inv = self.inverse(g)?;
                let inv = inv.matrix().expect("matrix payload");
                self.algebra_from_matrix(&(m * self.algebra_matrix(x)? * inv))
            }
            (Kind::Additive { .. }, _) => Ok(x.clone()),
            (Kind::Finite(_), _) => Err(self.unsupported("ad")),
            _ => Err(Error::Domain(format!("payload kind does not match model {}", self.id))),
        }
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_algebra(x)?;
        self.check_algebra(y)?;
        match &*self.kind {
            Kind::Matrix(_) => {
                let a = self.algebra_matrix(x)?;
                let b = self.algebra_matrix(y)?;
                self.algebra_from_matrix(&(&a * &b - &b * &a))
            }
            Kind::Additive { .. } => Ok(self.zero_algebra()),
            Kind::Finite(_) => Err(self.unsupported("bracket")),
        }
    }

    /// Max-norm of the payload difference (0/1 for finite models).
    pub fn distance(&self, a: &GroupElement, b: &GroupElement) -> Result<f64> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(a.payload.max_diff(&b.payload))
    }

    /// Point halfway along the one-parameter subgroup from `a` to `b`:
    /// a·exp(½·log(a⁻¹b)). Right-equivariant: midpoint(ag, bg) = midpoint(a, b)·g.
    pub fn midpoint(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        match &*self.kind {
            Kind::Additive { .. } => {
                self.check_element(a)?;
                self.check_element(b)?;
                let (Some(x), Some(y)) = (a.vector(), b.vector()) else {
                    return Err(Error::Domain("payload kind does not match model".into()));
                };
                Ok(self.wrap(Payload::Vector((x + y) * 0.5)))
            }
            Kind::Matrix(_) => {
                let rel = self.multiply(&self.inverse(a)?, b)?;
                let half = self.log_near_identity(&rel)?.scale(0.5);
                self.multiply(a, &self.exp(&half)?)
            }
            Kind::Finite(_) => Err(self.unsupported("midpoint")),
        }
    }

    /// Random element: exp of a uniformly drawn algebra element with
    /// coefficients in [−2, 2] (matrix), dyadic multiples of 2⁻¹⁰ in [−1, 1]ⁿ
    /// (additive, so sums of samples are exact), or a uniform index (finite).
    pub fn sample<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match &*self.kind {
            Kind::Matrix(_) => {
                let x = self.sample_algebra(rng, 2.0);
                self.exp(&x).expect("own algebra element")
            }
            Kind::Additive { dim } => {
                self.wrap(Payload::Vector(DVector::from_fn(*dim, |_, _| {
                    f64::from(rng.gen_range(-1024i32..=1024)) / 1024.0
                })))
            }
            Kind::Finite(t) => self.wrap(Payload::Index(rng.gen_range(0..t.order()))),
        }
    }

    /// Algebra element with coefficients uniform in [−scale, scale].
    pub fn sample_algebra<R: Rng>(&self, rng: &mut R, scale: f64) -> AlgebraElement {
        let d = self.dimension();
        self.wrap_alg(DVector::from_fn(d, |_, _| rng.gen_range(-scale..=scale)))
    }

    /// Maximal associativity, identity and inverse residuals. Finite models
    /// are checked exhaustively (the seed is then not used); other models on
    /// `samples` seeded random triples.
    pub fn group_axiom_report(&self, samples: usize, seed: u64) -> Result<AxiomReport> {
        let e = self.identity();
        let mut assoc = 0.0f64;
        let mut ident = 0.0f64;
        let mut inv = 0.0f64;
        let mut visit = |a: &GroupElement, b: &GroupElement, c: &GroupElement| -> Result<()> {
            let left = self.multiply(&self.multiply(a, b)?, c)?;
            let right = self.multiply(a, &self.multiply(b, c)?)?;
            assoc = assoc.max(self.distance(&left, &right)?);
            ident = ident
                .max(self.distance(&self.multiply(&e, a)?, a)?)
                .max(self.distance(&self.multiply(a, &e)?, a)?);
            let ai = self.inverse(a)?;
            inv = inv
                .max(self.distance(&self.multiply(a, &ai)?, &e)?)
                .max(self.distance(&self.multiply(&ai, a)?, &e)?);
            Ok(())
        };
        if let Some(all) = self.elements() {
            for a in &all {
                for b in &all {
                    for c in &all {
                        visit(a, b, c)?;
                    }
                }
            }
            let n = all.len();
            return Ok(AxiomReport { seed: None, samples: n * n * n, associativity: assoc, identity: ident, inverse: inv });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let a = self.sample(&mut rng);
            let b = self.sample(&mut rng);
            let c = self.sample(&mut rng);
            visit(&a, &b, &c)?;
        }
        Ok(AxiomReport { seed: Some(seed), samples, associativity: assoc, identity: ident, inverse: inv })
    }
}

/// Hat matrix of c·e_k in so(3).
fn hat3(k: usize, c: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(3, 3);
    let (i, j) = match k {
        0 => (2, 1),
        1 => (0, 2),
        _ => (1, 0),
    };
    m[(i, j)] = c;
    m[(j, i)] = -c;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn so3() -> GroupModel {
        GroupModel::so(3).unwrap()
    }

    fn rodrigues(axis: [f64; 3], theta: f64) -> DMatrix<f64> {
        let k = DMatrix::from_row_slice(3, 3, &[0.0, -axis[2], axis[1], axis[2], 0.0, -axis[0], -axis[1], axis[0], 0.0]);
        DMatrix::identity(3, 3) + &k * theta.sin() + &k * &k * (1.0 - theta.cos())
    }

    #[test]
    fn exp_of_zero_is_identity() {
        for m in [GroupModel::so(2).unwrap(), so3(), GroupModel::additive(3)] {
            let e = m.exp(&m.zero_algebra()).unwrap();
            assert_eq!(e, m.identity());
        }
    }

    #[test]
    fn quarter_turn_in_so2() {
        let so2 = GroupModel::so(2).unwrap();
        let g = so2.exp(&so2.algebra_from_slice(&[PI / 2.0]).unwrap()).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((g.matrix().unwrap() - expected).amax() < 1e-15);
    }

    #[test]
    fn so3_exp_matches_rodrigues() {
        let m = so3();
        for theta in [0.1, 1.0, 2.5, 3.1] {
            let g = m.exp(&m.algebra_from_slice(&[0.0, 0.0, theta]).unwrap()).unwrap();
            assert!((g.matrix().unwrap() - rodrigues([0.0, 0.0, 1.0], theta)).amax() < 1e-12);
        }
        let axis = [1.0 / 3f64.sqrt(); 3];
        let g = m.exp(&m.algebra_from_slice(&[1.2 * axis[0], 1.2 * axis[1], 1.2 * axis[2]]).unwrap()).unwrap();
        assert!((g.matrix().unwrap() - rodrigues(axis, 1.2)).amax() < 1e-12);
    }

    #[test]
    fn exp_times_exp_negative_is_identity() {
        let m = so3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = m.sample_algebra(&mut rng, 2.0);
            let p = m.multiply(&m.exp(&x).unwrap(), &m.exp(&-&x).unwrap()).unwrap();
            assert!(m.distance(&p, &m.identity()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn ad_by_identity_and_by_conjugation() {
        let m = so3();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = m.sample_algebra(&mut rng, 1.0);
        assert_eq!(m.ad(&m.identity(), &x).unwrap(), x);
        for _ in 0..20 {
            let g = m.sample(&mut rng);
            let gm = g.matrix().unwrap();
            let direct = gm * m.algebra_matrix(&x).unwrap() * gm.clone().try_inverse().unwrap();
            let ad = m.algebra_matrix(&m.ad(&g, &x).unwrap()).unwrap();
            assert!((direct - ad).amax() < 1e-12);
        }
    }

    #[test]
    fn ad_is_a_homomorphism() {
        let m = so3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (g1, g2) = (m.sample(&mut rng), m.sample(&mut rng));
            let x = m.sample_algebra(&mut rng, 1.0);
            let lhs = m.ad(&m.multiply(&g1, &g2).unwrap(), &x).unwrap();
            let rhs = m.ad(&g1, &m.ad(&g2, &x).unwrap()).unwrap();
            assert!(lhs.distance(&rhs) < 1e-11);
        }
    }

    #[test]
    fn axiom_reports() {
        let z4 = GroupModel::finite("Z4", CayleyTable::cyclic(4));
        let r = z4.group_axiom_report(1, 0).unwrap();
        assert_eq!(r.max(), 0.0);
        assert_eq!(r.samples, 64);
        let r = so3().group_axiom_report(100, 11).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
        assert_eq!(r.seed, Some(11));
        let r = GroupModel::additive(3).group_axiom_report(100, 2).unwrap();
        assert_eq!(r.max(), 0.0);
    }

    #[test]
    fn finite_models_reject_lie_operations() {
        let z4 = GroupModel::finite("Z4", CayleyTable::cyclic(4));
        let err = z4.exp(&z4.zero_algebra()).unwrap_err();
        assert!(matches!(err, Error::Unsupported { op: "exp", .. }));
    }

    #[test]
    fn model_mismatch_is_a_domain_error() {
        let so2 = GroupModel::so(2).unwrap();
        let x = so3().zero_algebra();
        assert!(matches!(so2.exp(&x), Err(Error::Domain(_))));
        assert!(matches!(so2.ad(&so2.identity(), &x), Err(Error::Domain(_))));
    }

    #[test]
    fn midpoint_is_right_equivariant() {
        let m = so3();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = m.sample(&mut rng);
        let step = m.exp(&m.sample_algebra(&mut rng, 0.05)).unwrap();
        let b = m.multiply(&a, &step).unwrap();
        let g = m.sample(&mut rng);
        let lhs = m.midpoint(&m.multiply(&a, &g).unwrap(), &m.multiply(&b, &g).unwrap()).unwrap();
        let rhs = m.multiply(&m.midpoint(&a, &b).unwrap(), &g).unwrap();
        assert!(m.distance(&lhs, &rhs).unwrap() < 1e-14);
    }
}
