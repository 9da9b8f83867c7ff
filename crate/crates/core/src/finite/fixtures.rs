//! Finite bundle fixtures: discrete G-set bundles, path-category bundles
//! with a codiscrete structure group, covering-group bundles, a decorated
//! bundle with its undecorated reduction, and planted counterexamples.

use crate::crossed::CrossedModule;
use crate::error::{Error, Result};
use crate::group::CayleyTable;

use super::bundle::{quotient_bundle, FiniteAction, PrincipalBundle};
use super::catgroup::FiniteCategoricalGroup;
use super::category::{FiniteCategory, FiniteFunctor};

/// Points 0 < 1 < … < n−1 with one morphism i → j for i ≤ j.
#[derive(Clone, Debug)]
pub struct ChainCategory {
    pub cat: FiniteCategory,
    /// Morphism index ↦ (i, j).
    pub arrows: Vec<(usize, usize)>,
}

pub fn chain(n: usize) -> ChainCategory {
    let arrows: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let index = |i: usize, j: usize| arrows.iter().position(|&a| a == (i, j)).expect("arrow");
    let ids = (0..n).map(|i| index(i, i)).collect();
    let cat = FiniteCategory::from_rule(
        n,
        arrows.iter().map(|a| a.0).collect(),
        arrows.iter().map(|a| a.1).collect(),
        ids,
        |m2, m1| index(arrows[m1].0, arrows[m2].1),
    )
    .expect("chain category");
    ChainCategory { cat, arrows }
}

/// Multiplication table of a subgroup, elements relabeled in the order given.
pub fn subgroup_table(k: &CayleyTable, z: &[usize]) -> Result<CayleyTable> {
    if !k.is_subgroup(z) {
        return Err(Error::Domain("not a subgroup".into()));
    }
    let pos = |x: usize| z.iter().position(|&y| y == x).expect("closed");
    CayleyTable::from_rows(z.iter().map(|&a| z.iter().map(|&b| pos(k.mul(a, b))).collect()).collect())
}

/// Discrete bundle of the free G-set G × {0..components}: object c·|G| + g,
/// acted on by right multiplication.
pub fn p1_bundle(g: &CayleyTable, components: usize) -> Result<PrincipalBundle> {
    let n = g.order();
    let total = FiniteCategory::discrete(components * n);
    let structure = FiniteCategoricalGroup::discrete(g);
    let act = |x: usize, a: usize| (x / n) * n + g.mul(x % n, a);
    let action = FiniteAction::from_rules(&total, &structure, act, act);
    quotient_bundle(total, structure, action)
}

/// Trivial bundle over the chain category of `points` points: objects
/// (x, g), morphisms (γ; p, q) with arbitrary p over s(γ) and q over t(γ),
/// acted on by the codiscrete categorical group on G through
/// (γ; p, q)·(a, b) = (γ; pa, qb).
pub fn p2_bundle(g: &CayleyTable, points: usize) -> Result<PrincipalBundle> {
    let n = g.order();
    let base = chain(points);
    let arrows = base.arrows.clone();
    let nm = arrows.len() * n * n;
    let split = |m: usize| (m / (n * n), (m / n) % n, m % n);
    let source = (0..nm).map(|m| { let (c, p, _) = split(m); arrows[c].0 * n + p }).collect();
    let target = (0..nm).map(|m| { let (c, _, q) = split(m); arrows[c].1 * n + q }).collect();
    let ids = (0..points * n)
        .map(|o| base.cat.identity(o / n) * n * n + (o % n) * n + o % n)
        .collect();
    let total = FiniteCategory::from_rule(points * n, source, target, ids, |m2, m1| {
        let (c1, p, _) = split(m1);
        let (c2, _, r) = split(m2);
        base.cat.compose(c2, c1).expect("composable") * n * n + p * n + r
    })?;
    let structure = FiniteCategoricalGroup::codiscrete(g);
    let action = FiniteAction::from_rules(
        &total,
        &structure,
        |o, a| (o / n) * n + g.mul(o % n, a),
        |m, ab| {
            let (c, p, q) = split(m);
            c * n * n + g.mul(p, ab / n) * n + g.mul(q, ab % n)
        },
    );
    let projection = FiniteFunctor { obj: (0..points * n).map(|o| o / n).collect(), mor: (0..nm).map(|m| m / (n * n)).collect() };
    Ok(PrincipalBundle { total, base: base.cat, structure, action, projection })
}

/// Codiscrete category on K̂ acted on by the discrete categorical group on a
/// subgroup Z by right multiplication; Z need not be central.
pub fn covering_bundle(hat_k: &CayleyTable, z: &[usize]) -> Result<PrincipalBundle> {
    let zt = subgroup_table(hat_k, z)?;
    let n = hat_k.order();
    let total = FiniteCategory::codiscrete(n);
    let structure = FiniteCategoricalGroup::discrete(&zt);
    let action = FiniteAction::from_rules(
        &total,
        &structure,
        |a, i| hat_k.mul(a, z[i]),
        |m, i| hat_k.mul(m / n, z[i]) * n + hat_k.mul(m % n, z[i]),
    );
    quotient_bundle(total, structure, action)
}

/// Four objects, ℤ₂ swapping 0↔1 and 2↔3, everything projected to a single
/// base object: the fiber is two orbits, so transitivity fails.
pub fn non_transitive_bundle() -> PrincipalBundle {
    let total = FiniteCategory::discrete(4);
    let structure = FiniteCategoricalGroup::discrete(&CayleyTable::cyclic(2));
    let act = |x: usize, g: usize| x ^ g;
    let action = FiniteAction::from_rules(&total, &structure, act, act);
    PrincipalBundle {
        total,
        base: FiniteCategory::discrete(1),
        structure,
        action,
        projection: FiniteFunctor { obj: vec![0; 4], mor: vec![0; 4] },
    }
}

/// A finite decorated bundle over the chain category together with its
/// undecorated bundle and the reduction (γ, g) ↦ (γ, g, e), β(g) = (e, g).
#[derive(Clone, Debug)]
pub struct DecoratedFixture {
    pub undecorated: PrincipalBundle,
    pub decorated: PrincipalBundle,
    pub f: FiniteFunctor,
    pub beta: FiniteFunctor,
}

impl DecoratedFixture {
    /// β sending everything to the identity: a homomorphism, but not one
    /// that makes f equivariant.
    pub fn broken_beta(&self) -> FiniteFunctor {
        let s = &self.decorated.structure;
        let e = s.obj_group.identity();
        FiniteFunctor {
            obj: vec![e; self.beta.obj.len()],
            mor: vec![s.cat.identity(e); self.beta.mor.len()],
        }
    }
}

/// Horizontal morphisms (γ, g) from (s(γ), g) to (t(γ), g); decorated
/// morphisms (γ, g, h) with target (t(γ), gτ(h⁻¹)), composition
/// (γ₂, gτ(h₁⁻¹), h₂)∘(γ₁, g, h₁) = (γ₂γ₁, g, h₂h₁) and action
/// (γ, g, h)·(h₁, g₁) = (γ, gg₁, α(g₁⁻¹)(h₁⁻¹h)).
pub fn decorated_fixture(cm: &CrossedModule, points: usize) -> Result<DecoratedFixture> {
    let structure = FiniteCategoricalGroup::from_crossed_module(cm)?;
    let gt = structure.obj_group.clone();
    let ht = cm.h().table().expect("finite").clone();
    let (ng, nh) = (gt.order(), ht.order());
    let tau: Vec<usize> = (0..nh).map(|h| structure.cat.target(h * ng + gt.identity())).collect();
    let alpha = |g: usize, h: usize| -> usize {
        // α(g)(h) = 1_g (h, e) 1_g⁻¹ in H ⋊ G
        let mg = &structure.mor_group;
        let i = structure.cat.identity(g);
        mg.mul(mg.mul(i, h * ng + gt.identity()), mg.inv(i)) / ng
    };
    let base = chain(points);
    let arrows = base.arrows.clone();
    let n_obj = points * ng;

    let und_mor = arrows.len() * ng;
    let undecorated_total = FiniteCategory::from_rule(
        n_obj,
        (0..und_mor).map(|m| arrows[m / ng].0 * ng + m % ng).collect(),
        (0..und_mor).map(|m| arrows[m / ng].1 * ng + m % ng).collect(),
        (0..n_obj).map(|o| base.cat.identity(o / ng) * ng + o % ng).collect(),
        |m2, m1| base.cat.compose(m2 / ng, m1 / ng).expect("composable") * ng + m1 % ng,
    )?;
    let discrete = FiniteCategoricalGroup::discrete(&gt);
    let right = |o: usize, a: usize| (o / ng) * ng + gt.mul(o % ng, a);
    let undecorated_action = FiniteAction::from_rules(&undecorated_total, &discrete, right, right);
    let undecorated = PrincipalBundle {
        projection: FiniteFunctor {
            obj: (0..n_obj).map(|o| o / ng).collect(),
            mor: (0..und_mor).map(|m| m / ng).collect(),
        },
        total: undecorated_total,
        base: base.cat.clone(),
        structure: discrete,
        action: undecorated_action,
    };

    let dec_mor = und_mor * nh;
    let split = |m: usize| (m / (ng * nh), (m / nh) % ng, m % nh);
    let join = |c: usize, g: usize, h: usize| (c * ng + g) * nh + h;
    let decorated_total = FiniteCategory::from_rule(
        n_obj,
        (0..dec_mor).map(|m| { let (c, g, _) = split(m); arrows[c].0 * ng + g }).collect(),
        (0..dec_mor).map(|m| { let (c, g, h) = split(m); arrows[c].1 * ng + gt.mul(g, tau[ht.inv(h)]) }).collect(),
        (0..n_obj).map(|o| join(base.cat.identity(o / ng), o % ng, ht.identity())).collect(),
        |m2, m1| {
            let (c1, g, h1) = split(m1);
            let (c2, _, h2) = split(m2);
            join(base.cat.compose(c2, c1).expect("composable"), g, ht.mul(h2, h1))
        },
    )?;
    let decorated_action = FiniteAction::from_rules(&decorated_total, &structure, right, |m, phi| {
        let (c, g, h) = split(m);
        let (h1, g1) = (phi / ng, phi % ng);
        join(c, gt.mul(g, g1), alpha(gt.inv(g1), ht.mul(ht.inv(h1), h)))
    });
    let decorated = PrincipalBundle {
        projection: FiniteFunctor {
            obj: (0..n_obj).map(|o| o / ng).collect(),
            mor: (0..dec_mor).map(|m| split(m).0).collect(),
        },
        total: decorated_total,
        base: base.cat,
        structure,
        action: decorated_action,
    };
    let f = FiniteFunctor { obj: (0..n_obj).collect(), mor: (0..und_mor).map(|m| join(m / ng, m % ng, ht.identity())).collect() };
    let beta = FiniteFunctor { obj: (0..ng).collect(), mor: (0..ng).map(|g| ht.identity() * ng + g).collect() };
    Ok(DecoratedFixture { undecorated, decorated, f, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{build_cg2, check_principal_axioms, check_reduction};
    use crate::group::GroupModel;

    #[test]
    fn chain_is_a_category() {
        let c = chain(4);
        assert_eq!(c.cat.morphisms(), 10);
        assert!(c.cat.check().passed());
    }

    #[test]
    fn p1_and_p2_satisfy_the_axioms() {
        let s3 = CayleyTable::symmetric(3);
        let p1 = p1_bundle(&s3, 3).unwrap();
        assert_eq!(p1.base.objects(), 3);
        assert!(check_principal_axioms(&p1).passed());
        let p2 = p2_bundle(&s3, 3).unwrap();
        let r = check_principal_axioms(&p2);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn covering_bundle_base_is_the_cg2_category() {
        for (k, z) in [(CayleyTable::cyclic(4), vec![0, 2]), (CayleyTable::quaternion(), vec![0, 1])] {
            let b = covering_bundle(&k, &z).unwrap();
            assert!(check_principal_axioms(&b).passed());
            assert_eq!(b.base, build_cg2(&k, &z).unwrap().cat);
        }
        // non-central subgroup is fine for the bundle
        let s3 = CayleyTable::symmetric(3);
        assert!(check_principal_axioms(&covering_bundle(&s3, &[0, 2]).unwrap()).passed());
    }

    #[test]
    fn non_transitive_fiber_has_a_witness() {
        let r = check_principal_axioms(&non_transitive_bundle());
        assert!(!r.passed());
        assert!(r.witness("transitive on object fibers").is_some());
    }

    #[test]
    fn decorated_reduction_holds_and_broken_beta_fails() {
        let cm = CrossedModule::conjugation(GroupModel::finite("S3", CayleyTable::symmetric(3)));
        let fx = decorated_fixture(&cm, 2).unwrap();
        let r = check_principal_axioms(&fx.decorated);
        assert!(r.passed(), "{r}");
        assert!(check_principal_axioms(&fx.undecorated).passed());
        let r = check_reduction(&fx.undecorated, &fx.decorated, &fx.f, &fx.beta);
        assert!(r.passed(), "{r}");
        let bad = check_reduction(&fx.undecorated, &fx.decorated, &fx.f, &fx.broken_beta());
        assert!(bad.witness("equivariant").is_some(), "{bad}");
    }
}
