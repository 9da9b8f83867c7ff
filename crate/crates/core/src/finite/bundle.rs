//! Finite principal categorical bundles: a right action of a finite
//! categorical group on a finite category, the quotient by orbits, the
//! principal-bundle axioms and reductions, all checked by enumeration.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::catgroup::FiniteCategoricalGroup;
use super::category::{first_witness, FiniteCategory, FiniteFunctor, FiniteReport};

/// Right action tables: `obj[p][g] = p·g`, `mor[f][φ] = f·φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAction {
    pub obj: Vec<Vec<usize>>,
    pub mor: Vec<Vec<usize>>,
}

impl FiniteAction {
    pub fn from_rules(
        total: &FiniteCategory,
        structure: &FiniteCategoricalGroup,
        obj: impl Fn(usize, usize) -> usize,
        mor: impl Fn(usize, usize) -> usize,
    ) -> Self {
        Self {
            obj: (0..total.objects()).map(|p| (0..structure.cat.objects()).map(|g| obj(p, g)).collect()).collect(),
            mor: (0..total.morphisms()).map(|f| (0..structure.cat.morphisms()).map(|m| mor(f, m)).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrincipalBundle {
    pub total: FiniteCategory,
    pub base: FiniteCategory,
    pub structure: FiniteCategoricalGroup,
    pub action: FiniteAction,
    pub projection: FiniteFunctor,
}

fn check_shape(total: &FiniteCategory, structure: &FiniteCategoricalGroup, action: &FiniteAction) -> Result<()> {
    let (no, nm) = (structure.cat.objects(), structure.cat.morphisms());
    let ok = action.obj.len() == total.objects()
        && action.mor.len() == total.morphisms()
        && action.obj.iter().all(|r| r.len() == no && r.iter().all(|&p| p < total.objects()))
        && action.mor.iter().all(|r| r.len() == nm && r.iter().all(|&f| f < total.morphisms()));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain("action tables have the wrong shape".into()))
    }
}

/// First (x, g) with x·g = x and g ≠ e.
fn fixed_point(table: &[Vec<usize>], identity: usize) -> Option<(usize, usize)> {
    table
        .iter()
        .enumerate()
        .find_map(|(x, row)| row.iter().enumerate().find(|&(g, &y)| y == x && g != identity).map(|(g, _)| (x, g)))
}

/// Orbit labels numbered by first appearance.
fn orbits(table: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; table.len()];
    let mut count = 0;
    for x in 0..table.len() {
        if label[x] == usize::MAX {
            for &y in &table[x] {
                label[y] = count;
            }
            count += 1;
        }
    }
    (label, count)
}

/// Quotient of `total` by a free action: objects and morphisms are orbits;
/// composites are formed from representatives made composable by acting
/// with an identity morphism 1_g, and the choice is checked to be irrelevant.
pub fn quotient_bundle(total: FiniteCategory, structure: FiniteCategoricalGroup, action: FiniteAction) -> Result<PrincipalBundle> {
    check_shape(&total, &structure, &action)?;
    let (og, mg) = (&structure.obj_group, &structure.mor_group);
    if let Some((p, g)) = fixed_point(&action.obj, og.identity()) {
        return Err(Error::Freeness(format!("object {p} is fixed by group object {g}")));
    }
    if let Some((f, m)) = fixed_point(&action.mor, mg.identity()) {
        return Err(Error::Freeness(format!("morphism {f} is fixed by group morphism {m}")));
    }
    let (obj_label, n_obj) = orbits(&action.obj);
    let (mor_label, n_mor) = orbits(&action.mor);
    let mut rep = vec![usize::MAX; n_mor];
    for f in (0..total.morphisms()).rev() {
        rep[mor_label[f]] = f;
    }
    let source: Vec<usize> = rep.iter().map(|&f| obj_label[total.source(f)]).collect();
    let target: Vec<usize> = rep.iter().map(|&f| obj_label[total.target(f)]).collect();
    let mut ids = vec![usize::MAX; n_obj];
    for p in 0..total.objects() {
        ids[obj_label[p]] = mor_label[total.identity(p)];
    }
    let mut compose: HashMap<(usize, usize), usize> = HashMap::new();
    for (f1, f2) in total.composable_pairs() {
        let c = mor_label[total.compose(f2, f1).expect("composable")];
        match compose.insert((mor_label[f2], mor_label[f1]), c) {
            Some(prev) if prev != c => {
                return Err(Error::Fixture(format!("orbit composite of {f2}∘{f1} is not well defined")));
            }
            _ => {}
        }
    }
    let base = FiniteCategory::new(n_obj, source, target, ids, compose)?;
    if let Some((a, b)) = base.composable_pairs().find(|&(a, b)| base.compose(b, a).is_none()) {
        return Err(Error::Fixture(format!("composable orbits {b}∘{a} have no composable representatives")));
    }
    let projection = FiniteFunctor { obj: obj_label, mor: mor_label };
    Ok(PrincipalBundle { total, base, structure, action, projection })
}

/// Transitivity on the fibers of `label`: every fiber is one orbit.
fn transitivity_witness(table: &[Vec<usize>], label: &[usize], kind: &str) -> Option<String> {
    let mut first: HashMap<usize, usize> = HashMap::new();
    for (x, &l) in label.iter().enumerate() {
        let x0 = *first.entry(l).or_insert(x);
        if !table[x0].contains(&x) {
            return Some(format!("{kind} {x} is not in the orbit of {x0} over the same base {kind}"));
        }
    }
    None
}

/// Right-action laws x·e = x and (x·a)·b = x·(ab).
fn action_witness(table: &[Vec<usize>], group: &crate::group::CayleyTable, kind: &str) -> Option<String> {
    let n = group.order();
    first_witness(0..table.len(), |x| {
        if table[x][group.identity()] != x {
            return Some(format!("{kind} {x}·e ≠ {x}"));
        }
        (0..n).find_map(|a| {
            (0..n).find_map(|b| (table[table[x][a]][b] != table[x][group.mul(a, b)]).then(|| format!("{kind} {x}: ({x}·{a})·{b} ≠ {x}·({a}{b})")))
        })
    })
}

/// Surjectivity, freeness, fiber-transitivity, the action laws, their
/// compatibility with source, target, identities and composition, and
/// invariance of the projection.
pub fn check_principal_axioms(b: &PrincipalBundle) -> FiniteReport {
    let mut r = FiniteReport::default();
    let (p, s, a, pi) = (&b.total, &b.structure, &b.action, &b.projection);
    let (og, mg) = (&s.obj_group, &s.mor_group);
    r.extend("total", p.check());
    r.extend("base", b.base.check());
    r.extend("structure", s.check());
    r.extend("projection", pi.check(p, &b.base));
    if check_shape(p, s, a).is_err() {
        r.push("action shape", Some("action tables have the wrong shape".into()));
        return r;
    }
    let mut hit_o = vec![false; b.base.objects()];
    for &o in &pi.obj {
        if let Some(h) = hit_o.get_mut(o) {
            *h = true;
        }
    }
    r.push("surjective on objects", hit_o.iter().position(|h| !h).map(|o| format!("base object {o} not covered")));
    let mut hit_m = vec![false; b.base.morphisms()];
    for &m in &pi.mor {
        if let Some(h) = hit_m.get_mut(m) {
            *h = true;
        }
    }
    r.push("surjective on morphisms", hit_m.iter().position(|h| !h).map(|m| format!("base morphism {m} not covered")));
    r.push("right action on objects", action_witness(&a.obj, og, "object"));
    r.push("right action on morphisms", action_witness(&a.mor, mg, "morphism"));
    r.push(
        "free on objects",
        fixed_point(&a.obj, og.identity()).map(|(x, g)| format!("object {x} fixed by {g}")),
    );
    r.push(
        "free on morphisms",
        fixed_point(&a.mor, mg.identity()).map(|(x, g)| format!("morphism {x} fixed by {g}")),
    );
    r.push("transitive on object fibers", transitivity_witness(&a.obj, &pi.obj, "object"));
    r.push("transitive on morphism fibers", transitivity_witness(&a.mor, &pi.mor, "morphism"));
    r.push(
        "projection invariant",
        first_witness(0..p.morphisms(), |f| {
            (0..mg.order()).find_map(|m| (pi.mor[a.mor[f][m]] != pi.mor[f]).then(|| format!("π({f}·{m}) ≠ π({f})")))
        })
        .or_else(|| {
            first_witness(0..p.objects(), |x| {
                (0..og.order()).find_map(|g| (pi.obj[a.obj[x][g]] != pi.obj[x]).then(|| format!("π({x}·{g}) ≠ π({x})")))
            })
        }),
    );
    let sc = &s.cat;
    r.push(
        "action respects source and target",
        first_witness(0..p.morphisms(), |f| {
            (0..mg.order()).find_map(|m| {
                let fm = a.mor[f][m];
                (p.source(fm) != a.obj[p.source(f)][sc.source(m)] || p.target(fm) != a.obj[p.target(f)][sc.target(m)])
                    .then(|| format!("endpoints of {f}·{m}"))
            })
        }),
    );
    r.push(
        "action respects identities",
        first_witness(0..p.objects(), |x| {
            (0..og.order()).find_map(|g| {
                (a.mor[p.identity(x)][sc.identity(g)] != p.identity(a.obj[x][g])).then(|| format!("1_{x}·1_{g} ≠ 1_({x}·{g})"))
            })
        }),
    );
    let sp: Vec<(usize, usize)> = sc.composable_pairs().collect();
    r.push(
        "action respects composition",
        first_witness(p.composable_pairs(), |(f1, f2)| {
            let f = p.compose(f2, f1)?;
            sp.iter().find_map(|&(m1, m2)| {
                let m = sc.compose(m2, m1)?;
                (p.compose(a.mor[f2][m2], a.mor[f1][m1]) != Some(a.mor[f][m])).then(|| format!("({f2}∘{f1})·({m2}∘{m1})"))
            })
        }),
    );
    r
}

/// Checks that (f, β) is a reduction from `from` to `to` over the same base:
/// both are functors, β is a homomorphism on objects and morphisms, f
/// preserves fibers and f(p·g) = f(p)·β(g) on objects and morphisms.
pub fn check_reduction(from: &PrincipalBundle, to: &PrincipalBundle, f: &FiniteFunctor, beta: &FiniteFunctor) -> FiniteReport {
    let mut r = FiniteReport::default();
    let fr = f.check(&from.total, &to.total);
    let br = beta.check(&from.structure.cat, &to.structure.cat);
    let shapes_ok = fr.checks[0].passed() && br.checks[0].passed();
    r.extend("f", fr);
    r.extend("β", br);
    if !shapes_ok {
        return r;
    }
    let (g1, g2) = (&from.structure, &to.structure);
    r.push(
        "β homomorphism",
        first_witness((0..g1.mor_group.order()).flat_map(|x| (0..g1.mor_group.order()).map(move |y| (x, y))), |(x, y)| {
            (beta.mor[g1.mor_group.mul(x, y)] != g2.mor_group.mul(beta.mor[x], beta.mor[y])).then(|| format!("β({x}·{y})"))
        })
        .or_else(|| {
            first_witness((0..g1.obj_group.order()).flat_map(|x| (0..g1.obj_group.order()).map(move |y| (x, y))), |(x, y)| {
                (beta.obj[g1.obj_group.mul(x, y)] != g2.obj_group.mul(beta.obj[x], beta.obj[y])).then(|| format!("β({x}·{y}) on objects"))
            })
        }),
    );
    r.push(
        "fiber preserving",
        first_witness(0..from.total.morphisms(), |m| {
            (to.projection.mor[f.mor[m]] != from.projection.mor[m]).then(|| format!("morphism {m}"))
        })
        .or_else(|| {
            first_witness(0..from.total.objects(), |o| {
                (to.projection.obj[f.obj[o]] != from.projection.obj[o]).then(|| format!("object {o}"))
            })
        }),
    );
    r.push(
        "equivariant on objects",
        first_witness(0..from.total.objects(), |p| {
            (0..g1.obj_group.order()).find_map(|g| {
                (f.obj[from.action.obj[p][g]] != to.action.obj[f.obj[p]][beta.obj[g]]).then(|| format!("f({p}·{g}) ≠ f({p})·β({g})"))
            })
        }),
    );
    r.push(
        "equivariant on morphisms",
        first_witness(0..from.total.morphisms(), |m| {
            (0..g1.mor_group.order()).find_map(|phi| {
                (f.mor[from.action.mor[m][phi]] != to.action.mor[f.mor[m]][beta.mor[phi]])
                    .then(|| format!("f({m}·{phi}) ≠ f({m})·β({phi})"))
            })
        }),
    );
    r
}
