//! Named scenarios: a crossed module with its double and a catalog of base
//! forms A, Ā, B, C, C₁, C₂ and Φ on ℝ².

use crate::crossed::{CrossedModule, DoubleModule};
use crate::error::{Error, Result};
use crate::forms::{GroupField, OneForm, TwoForm};
use crate::group::GroupModel;

/// Stable scenario identifiers.
pub const SCENARIOS: [&str; 5] = ["flat", "so2_area", "so3_conj", "so3_r3", "double"];

const BASE_DIM: usize = 2;

/// Base-space representatives of the connection data.
#[derive(Clone, Debug)]
pub struct FormCatalog {
    /// L(G)-valued, the connection A.
    pub a: OneForm,
    /// L(G)-valued, the connection Ā used for horizontal paths.
    pub abar: OneForm,
    /// L(H)-valued 2-form B.
    pub b: TwoForm,
    /// L(H)-valued 1-form C of the categorical connection.
    pub c: OneForm,
    /// L(K)-valued 1-form C₁.
    pub c1: OneForm,
    /// L(K)-valued 2-form C₂.
    pub c2: TwoForm,
    /// H-valued function Φ.
    pub phi: GroupField,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub double: DoubleModule,
    pub forms: FormCatalog,
    pub base_dim: usize,
}

impl Scenario {
    pub fn cm(&self) -> &CrossedModule {
        self.double.base()
    }
}

/// Deterministic coefficient vector of length `d` with entries of size
/// about `amp`.
fn wave(tag: f64, d: usize, amp: f64) -> Vec<f64> {
    (0..d).map(|k| amp * (1.7 * tag + 2.3 * k as f64 + 0.4).sin()).collect()
}

fn affine_one(model: &GroupModel, tag: f64, amp: f64, slope: f64) -> Result<OneForm> {
    let d = model.dimension();
    let constant = (0..BASE_DIM).map(|i| wave(tag + i as f64, d, amp)).collect();
    let linear = (0..BASE_DIM)
        .map(|i| (0..BASE_DIM).map(|k| wave(tag + 10.0 + 3.0 * i as f64 + k as f64, d, slope)).collect())
        .collect();
    OneForm::affine(model.clone(), constant, linear)
}

fn affine_two(model: &GroupModel, tag: f64, amp: f64, slope: f64) -> Result<TwoForm> {
    let d = model.dimension();
    let linear = vec![(0..BASE_DIM).map(|k| wave(tag + 20.0 + k as f64, d, slope)).collect()];
    TwoForm::affine(model.clone(), BASE_DIM, vec![wave(tag, d, amp)], linear)
}

fn affine_field(model: &GroupModel, tag: f64, amp: f64) -> Result<GroupField> {
    let d = model.dimension();
    let linear = (0..BASE_DIM).map(|k| wave(tag + 5.0 + k as f64, d, amp)).collect();
    GroupField::exp_affine(model.clone(), wave(tag, d, amp), linear)
}

fn zero_catalog(double: &DoubleModule) -> FormCatalog {
    let (g, h, k) = (double.base().g(), double.base().h(), double.k());
    FormCatalog {
        a: OneForm::zero(g.clone(), BASE_DIM),
        abar: OneForm::zero(g.clone(), BASE_DIM),
        b: TwoForm::zero(h.clone(), BASE_DIM),
        c: OneForm::zero(h.clone(), BASE_DIM),
        c1: OneForm::zero(k.clone(), BASE_DIM),
        c2: TwoForm::zero(k.clone(), BASE_DIM),
        phi: GroupField::constant(h.clone(), BASE_DIM, h.identity()),
    }
}

fn generic_catalog(double: &DoubleModule, with_c1: bool) -> Result<FormCatalog> {
    let (g, h, k) = (double.base().g(), double.base().h(), double.k());
    Ok(FormCatalog {
        a: affine_one(g, 1.0, 0.3, 0.2)?,
        abar: affine_one(g, 2.0, 0.3, 0.2)?,
        b: affine_two(h, 3.0, 0.3, 0.2)?,
        c: affine_one(h, 4.0, 0.3, 0.2)?,
        c1: if with_c1 { affine_one(k, 5.0, 0.2, 0.1)? } else { OneForm::zero(k.clone(), BASE_DIM) },
        c2: affine_two(k, 6.0, 0.2, 0.1)?,
        phi: affine_field(h, 7.0, 0.3)?,
    })
}

/// Looks a scenario up by name.
pub fn scenario(name: &str) -> Result<Scenario> {
    let so3 = || GroupModel::so(3);
    match name {
        "flat" => {
            let double = DoubleModule::from_conjugation(CrossedModule::conjugation(so3()?))?;
            Ok(Scenario {
                name: "flat",
                description: "SO(3) conjugation module, every form zero",
                forms: zero_catalog(&double),
                double,
                base_dim: BASE_DIM,
            })
        }
        "so2_area" => {
            let so2 = GroupModel::so(2)?;
            let double = DoubleModule::from_conjugation(CrossedModule::conjugation(so2.clone()))?;
            let mut forms = zero_catalog(&double);
            forms.b = TwoForm::affine(so2.clone(), BASE_DIM, vec![vec![1.0]], vec![vec![vec![0.0]; 2]])?;
            forms.c = affine_one(&so2, 4.0, 0.3, 0.2)?;
            forms.phi = affine_field(&so2, 7.0, 0.3)?;
            Ok(Scenario {
                name: "so2_area",
                description: "SO(2) conjugation module, A = Ā = 0, B = dx1∧dx2·J",
                forms,
                double,
                base_dim: BASE_DIM,
            })
        }
        "so3_conj" => {
            let double = DoubleModule::from_conjugation(CrossedModule::conjugation(so3()?))?;
            Ok(Scenario {
                name: "so3_conj",
                description: "SO(3) conjugation module, affine-coefficient A, Ā, B, C, C1, C2, Φ",
                forms: generic_catalog(&double, true)?,
                double,
                base_dim: BASE_DIM,
            })
        }
        "so3_r3" => {
            let double = DoubleModule::from_abelian(CrossedModule::abelian(3)?)?;
            Ok(Scenario {
                name: "so3_r3",
                description: "SO(3) acting on R^3 (τ trivial), affine-coefficient forms, K = SE(3)",
                forms: generic_catalog(&double, true)?,
                double,
                base_dim: BASE_DIM,
            })
        }
        "double" => {
            let double = DoubleModule::from_conjugation(CrossedModule::conjugation(so3()?))?;
            Ok(Scenario {
                name: "double",
                description: "so3_conj forms with C1 = 0 and C2 ≠ 0, for doubly decorated transport",
                forms: generic_catalog(&double, false)?,
                double,
                base_dim: BASE_DIM,
            })
        }
        other => Err(Error::Domain(format!("unknown scenario `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_scenario_builds() {
        for name in SCENARIOS {
            let s = scenario(name).unwrap();
            assert_eq!(s.name, name);
            assert_eq!(s.forms.c2.model().id(), s.double.k().id());
        }
        assert!(scenario("nope").is_err());
    }
}
