//! Finite categorical groups: a finite category whose objects and morphisms
//! carry group structures with functorial operations. Conversion to and from
//! finite crossed modules and the covering-group construction K̂ → K̂/Z.

use crate::crossed::CrossedModule;
use crate::error::{Error, Result};
use crate::group::{CayleyTable, GroupModel};

use super::category::{first_witness, FiniteCategory, FiniteReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategoricalGroup {
    pub cat: FiniteCategory,
    pub obj_group: CayleyTable,
    pub mor_group: CayleyTable,
}

impl FiniteCategoricalGroup {
    pub fn new(cat: FiniteCategory, obj_group: CayleyTable, mor_group: CayleyTable) -> Result<Self> {
        if obj_group.order() != cat.objects() || mor_group.order() != cat.morphisms() {
            return Err(Error::Domain("group tables do not match the category".into()));
        }
        Ok(Self { cat, obj_group, mor_group })
    }

    /// Objects G, identity morphisms only.
    pub fn discrete(g: &CayleyTable) -> Self {
        Self { cat: FiniteCategory::discrete(g.order()), obj_group: g.clone(), mor_group: g.clone() }
    }

    /// Objects G, one morphism (a, b) for each pair, componentwise product.
    pub fn codiscrete(g: &CayleyTable) -> Self {
        Self { cat: FiniteCategory::codiscrete(g.order()), obj_group: g.clone(), mor_group: g.direct_product(g) }
    }

    /// Category laws, group axioms, s, t and 1_• homomorphisms and the
    /// exchange law (m₂∘m₁)(n₂∘n₁) = (m₂n₂)∘(m₁n₁).
    pub fn check(&self) -> FiniteReport {
        let mut r = self.cat.check();
        let (c, og, mg) = (&self.cat, &self.obj_group, &self.mor_group);
        r.push("object group associative", og.associativity_witness().map(|w| format!("{w:?}")));
        r.push("morphism group associative", mg.associativity_witness().map(|w| format!("{w:?}")));
        let n = c.morphisms();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        r.push(
            "source homomorphism",
            first_witness(pairs.iter().copied(), |(a, b)| {
                (c.source(mg.mul(a, b)) != og.mul(c.source(a), c.source(b))).then(|| format!("s({a}·{b})"))
            }),
        );
        r.push(
            "target homomorphism",
            first_witness(pairs.iter().copied(), |(a, b)| {
                (c.target(mg.mul(a, b)) != og.mul(c.target(a), c.target(b))).then(|| format!("t({a}·{b})"))
            }),
        );
        r.push(
            "identity homomorphism",
            first_witness((0..c.objects()).flat_map(|a| (0..c.objects()).map(move |b| (a, b))), |(a, b)| {
                (c.identity(og.mul(a, b)) != mg.mul(c.identity(a), c.identity(b))).then(|| format!("1_({a}·{b})"))
            }),
        );
        let composable: Vec<(usize, usize)> = c.composable_pairs().collect();
        r.push(
            "exchange law",
            first_witness(composable.iter(), |&(m1, m2)| {
                let left = c.compose(m2, m1)?;
                composable.iter().find_map(|&(n1, n2)| {
                    let lhs = mg.mul(left, c.compose(n2, n1)?);
                    let rhs = c.compose(mg.mul(m2, n2), mg.mul(m1, n1));
                    (rhs != Some(lhs)).then(|| format!("m=({m1},{m2}), n=({n1},{n2})"))
                })
            }),
        );
        r
    }

    /// Elements of ker s in increasing order.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.cat.morphisms()).filter(|&m| self.cat.source(m) == self.obj_group.identity()).collect()
    }

    /// G = objects, H = ker s, τ = t|_H, α(g)(h) = 1_g·h·1_g⁻¹.
    pub fn to_crossed_module(&self, name: &str) -> Result<CrossedModule> {
        let ker = self.kernel();
        let pos = |m: usize| ker.iter().position(|&k| k == m).ok_or_else(|| Error::Domain("kernel not closed".into()));
        let mg = &self.mor_group;
        let h_rows = ker
            .iter()
            .map(|&a| ker.iter().map(|&b| pos(mg.mul(a, b))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let h = CayleyTable::from_rows(h_rows)?;
        let alpha = (0..self.cat.objects())
            .map(|g| {
                let i = self.cat.identity(g);
                ker.iter().map(|&k| pos(mg.mul(mg.mul(i, k), mg.inv(i)))).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let tau = ker.iter().map(|&k| self.cat.target(k)).collect();
        CrossedModule::from_tables(
            name,
            GroupModel::finite(&format!("{name}.G"), self.obj_group.clone()),
            GroupModel::finite(&format!("{name}.H"), h),
            alpha,
            tau,
        )
    }

    /// Objects G, morphisms H ⋊ G with (h, a) at index h·|G| + a, source a,
    /// target τ(h)a, composition (h₂, τ(h₁)a)∘(h₁, a) = (h₂h₁, a).
    pub fn from_crossed_module(cm: &CrossedModule) -> Result<Self> {
        let (gt, ht) = match (cm.g().table(), cm.h().table()) {
            (Some(g), Some(h)) => (g.clone(), h.clone()),
            _ => return Err(Error::Unsupported { op: "finite categorical group", model: cm.name().to_string() }),
        };
        let (ng, nh) = (gt.order(), ht.order());
        let el_g = |i: usize| cm.g().element_from_index(i);
        let el_h = |i: usize| cm.h().element_from_index(i);
        let tau = (0..nh).map(|h| Ok(cm.tau(&el_h(h)?)?.index().expect("finite"))).collect::<Result<Vec<_>>>()?;
        let alpha = (0..ng)
            .map(|g| (0..nh).map(|h| Ok(cm.alpha(&el_g(g)?, &el_h(h)?)?.index().expect("finite"))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let n = nh * ng;
        let source: Vec<usize> = (0..n).map(|m| m % ng).collect();
        let target: Vec<usize> = (0..n).map(|m| gt.mul(tau[m / ng], m % ng)).collect();
        let ids = (0..ng).map(|a| ht.identity() * ng + a).collect();
        let cat = FiniteCategory::from_rule(ng, source, target, ids, |m2, m1| ht.mul(m2 / ng, m1 / ng) * ng + m1 % ng)?;
        let rows = (0..n)
            .map(|x| (0..n).map(|y| ht.mul(x / ng, alpha[x % ng][y / ng]) * ng + gt.mul(x % ng, y % ng)).collect())
            .collect();
        Self::new(cat, gt, CayleyTable::from_rows(rows)?)
    }
}

/// Categorical group → crossed module → categorical group, with the explicit
/// isomorphism m ↦ (m·1_{s(m)}⁻¹, s(m)) checked on every structure map.
pub fn catgroup_roundtrip(cg: &FiniteCategoricalGroup) -> Result<FiniteReport> {
    let cm = cg.to_crossed_module("roundtrip")?;
    let back = FiniteCategoricalGroup::from_crossed_module(&cm)?;
    let ker = cg.kernel();
    let ng = cg.obj_group.order();
    let (c, mg) = (&cg.cat, &cg.mor_group);
    let phi: Vec<usize> = (0..c.morphisms())
        .map(|m| {
            let a = c.source(m);
            let k = mg.mul(m, mg.inv(c.identity(a)));
            ker.iter().position(|&x| x == k).expect("in kernel") * ng + a
        })
        .collect();
    let mut r = FiniteReport::default();
    r.extend("rebuilt", back.check());
    let mut seen = vec![false; back.cat.morphisms()];
    phi.iter().for_each(|&p| seen[p] = true);
    r.push(
        "bijection",
        (phi.len() != back.cat.morphisms() || seen.iter().any(|s| !s)).then(|| "morphism map is not bijective".to_string()),
    );
    r.push(
        "endpoints preserved",
        first_witness(0..c.morphisms(), |m| {
            (back.cat.source(phi[m]) != c.source(m) || back.cat.target(phi[m]) != c.target(m)).then(|| format!("morphism {m}"))
        }),
    );
    r.push(
        "identities preserved",
        first_witness(0..c.objects(), |o| (phi[c.identity(o)] != back.cat.identity(o)).then(|| format!("object {o}"))),
    );
    r.push(
        "product preserved",
        first_witness((0..c.morphisms()).flat_map(|a| (0..c.morphisms()).map(move |b| (a, b))), |(a, b)| {
            (phi[mg.mul(a, b)] != back.mor_group.mul(phi[a], phi[b])).then(|| format!("{a}·{b}"))
        }),
    );
    r.push(
        "composition preserved",
        first_witness(c.composable_pairs(), |(m1, m2)| {
            (back.cat.compose(phi[m2], phi[m1]) != c.compose(m2, m1).map(|x| phi[x])).then(|| format!("{m2}∘{m1}"))
        }),
    );
    Ok(r)
}

/// Crossed module → categorical group → crossed module: H is matched with
/// {(h, e)} and α, τ and the H-product are compared exhaustively.
pub fn crossed_roundtrip(cm: &CrossedModule) -> Result<FiniteReport> {
    let cg = FiniteCategoricalGroup::from_crossed_module(cm)?;
    let back = cg.to_crossed_module("roundtrip")?;
    let ht = cm.h().table().expect("finite").clone();
    let ng = cg.obj_group.order();
    let ker = cg.kernel();
    let e = cg.obj_group.identity();
    let psi: Vec<usize> = (0..ht.order()).map(|h| ker.iter().position(|&k| k == h * ng + e).expect("kernel")).collect();
    let el = |m: &GroupModel, i: usize| m.element_from_index(i);
    let mut r = FiniteReport::default();
    r.extend("categorical group", cg.check());
    let bh = back.h().table().expect("finite");
    r.push(
        "H product preserved",
        first_witness((0..ht.order()).flat_map(|a| (0..ht.order()).map(move |b| (a, b))), |(a, b)| {
            (psi[ht.mul(a, b)] != bh.mul(psi[a], psi[b])).then(|| format!("{a}·{b}"))
        }),
    );
    let mut tau_w = None;
    let mut alpha_w = None;
    for h in 0..ht.order() {
        let t1 = cm.tau(&el(cm.h(), h)?)?.index();
        let t2 = back.tau(&el(back.h(), psi[h])?)?.index();
        if t1 != t2 && tau_w.is_none() {
            tau_w = Some(format!("τ({h})"));
        }
        for g in 0..ng {
            let a1 = cm.alpha(&el(cm.g(), g)?, &el(cm.h(), h)?)?.index().map(|i| psi[i]);
            let a2 = back.alpha(&el(back.g(), g)?, &el(back.h(), psi[h])?)?.index();
            if a1 != a2 && alpha_w.is_none() {
                alpha_w = Some(format!("α({g})({h})"));
            }
        }
    }
    r.push("τ preserved", tau_w);
    r.push("α preserved", alpha_w);
    Ok(r)
}

/// Covering-group categorical group: objects K̂/Z, morphisms Z-orbits of
/// pairs (â, b̂) under (â, b̂)z = (âz, b̂z), product [(â, b̂)][(ĉ, d̂)] =
/// [(âĉ, b̂d̂)]. Z must be a central subgroup.
pub fn build_cg2(hat_k: &CayleyTable, z: &[usize]) -> Result<FiniteCategoricalGroup> {
    if !hat_k.is_subgroup(z) {
        return Err(Error::Domain("Z is not a subgroup".into()));
    }
    if let Some((a, b)) = hat_k.centrality_witness(z) {
        return Err(Error::Centrality { a, b });
    }
    let n = hat_k.order();
    // cosets âZ, numbered by first appearance
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for a in 0..n {
        if coset[a] == usize::MAX {
            for &zz in z {
                coset[hat_k.mul(a, zz)] = reps.len();
            }
            reps.push(a);
        }
    }
    let mut orbit = vec![usize::MAX; n * n];
    let mut orbit_reps = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if orbit[a * n + b] == usize::MAX {
                for &zz in z {
                    orbit[hat_k.mul(a, zz) * n + hat_k.mul(b, zz)] = orbit_reps.len();
                }
                orbit_reps.push((a, b));
            }
        }
    }
    let objects = reps.len();
    let obj_rows = reps.iter().map(|&a| reps.iter().map(|&b| coset[hat_k.mul(a, b)]).collect()).collect();
    let mor_rows = orbit_reps
        .iter()
        .map(|&(a, b)| orbit_reps.iter().map(|&(c, d)| orbit[hat_k.mul(a, c) * n + hat_k.mul(b, d)]).collect())
        .collect();
    let source = orbit_reps.iter().map(|&(a, _)| coset[a]).collect();
    let target = orbit_reps.iter().map(|&(_, b)| coset[b]).collect();
    let ids = reps.iter().map(|&a| orbit[a * n + a]).collect();
    let cat = FiniteCategory::from_rule(objects, source, target, ids, |m2, m1| {
        // shift m2's representative so its first entry is m1's second entry
        let (a, b1) = orbit_reps[m1];
        let (b2, c) = orbit_reps[m2];
        let zz = hat_k.mul(hat_k.inv(b2), b1);
        orbit[a * n + hat_k.mul(c, zz)]
    })?;
    FiniteCategoricalGroup::new(cat, CayleyTable::from_rows(obj_rows)?, CayleyTable::from_rows(mor_rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cg2_on_z4_has_z2_objects() {
        let cg = build_cg2(&CayleyTable::cyclic(4), &[0, 2]).unwrap();
        assert_eq!(cg.cat.objects(), 2);
        assert_eq!(cg.cat.morphisms(), 8);
        assert!(cg.check().passed(), "{}", cg.check());
    }

    #[test]
    fn trivial_z_gives_codiscrete() {
        let k = CayleyTable::symmetric(3);
        let cg = build_cg2(&k, &[k.identity()]).unwrap();
        assert_eq!(cg.cat.morphisms(), 36);
        assert!(cg.check().passed());
    }

    #[test]
    fn non_central_z_is_rejected() {
        let k = CayleyTable::symmetric(3);
        // {id, (0 1)} in one-line order: [1,0,2] has index 2
        let err = build_cg2(&k, &[0, 2]).unwrap_err();
        assert!(matches!(err, Error::Centrality { .. }));
    }

    #[test]
    fn from_crossed_module_is_categorical_group() {
        let cg = FiniteCategoricalGroup::from_crossed_module(&CrossedModule::z4_to_z2()).unwrap();
        assert!(cg.check().passed(), "{}", cg.check());
        assert!(crossed_roundtrip(&CrossedModule::z4_to_z2()).unwrap().passed());
    }
}
