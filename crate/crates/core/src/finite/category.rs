//! Finite categories with explicit composition tables, functors between
//! them and exhaustive law reports.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Outcome of one exhaustively checked law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: String,
    /// First violation found, if any.
    pub witness: Option<String>,
}

impl AxiomCheck {
    pub fn new(name: &str, witness: Option<String>) -> Self {
        Self { name: name.to_string(), witness }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// A list of checked laws.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteReport {
    pub checks: Vec<AxiomCheck>,
}

impl FiniteReport {
    pub fn push(&mut self, name: &str, witness: Option<String>) {
        self.checks.push(AxiomCheck::new(name, witness));
    }

    /// Appends the checks of `other` with names prefixed by `prefix`.
    pub fn extend(&mut self, prefix: &str, other: FiniteReport) {
        for c in other.checks {
            self.checks.push(AxiomCheck { name: format!("{prefix}: {}", c.name), witness: c.witness });
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    /// The first failing check containing `name`.
    pub fn witness(&self, name: &str) -> Option<&str> {
        self.checks
            .iter()
            .find(|c| c.name.contains(name) && !c.passed())
            .and_then(|c| c.witness.as_deref())
    }
}

impl fmt::Display for FiniteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "pass  {}", c.name)?,
                Some(w) => writeln!(f, "FAIL  {}: {w}", c.name)?,
            }
        }
        Ok(())
    }
}

/// First item produced by `f` over `items`, as a witness.
pub(crate) fn first_witness<T>(items: impl IntoIterator<Item = T>, f: impl FnMut(T) -> Option<String>) -> Option<String> {
    items.into_iter().find_map(f)
}

/// Objects `0..objects`, morphisms `0..sources.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: usize,
    source: Vec<usize>,
    target: Vec<usize>,
    identities: Vec<usize>,
    /// (m2, m1) ↦ m2∘m1 for t(m1) = s(m2).
    compose: HashMap<(usize, usize), usize>,
    outgoing: Vec<Vec<usize>>,
}

impl FiniteCategory {
    pub fn new(
        objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let n = source.len();
        if target.len() != n || identities.len() != objects {
            return Err(Error::Domain("category tables have inconsistent lengths".into()));
        }
        if source.iter().chain(&target).any(|&o| o >= objects) || identities.iter().any(|&m| m >= n) {
            return Err(Error::Domain("category table entry out of range".into()));
        }
        if compose.iter().any(|(&(a, b), &c)| a >= n || b >= n || c >= n) {
            return Err(Error::Domain("composition entry out of range".into()));
        }
        let mut outgoing = vec![Vec::new(); objects];
        for (m, &s) in source.iter().enumerate() {
            outgoing[s].push(m);
        }
        Ok(Self { objects, source, target, identities, compose, outgoing })
    }

    /// Builds the composition table from a rule evaluated on every
    /// composable pair.
    pub fn from_rule(
        objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        identities: Vec<usize>,
        rule: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut outgoing = vec![Vec::new(); objects];
        for (m, &s) in source.iter().enumerate() {
            if s >= objects {
                return Err(Error::Domain("source out of range".into()));
            }
            outgoing[s].push(m);
        }
        let mut compose = HashMap::new();
        for (m1, &t) in target.iter().enumerate() {
            for &m2 in outgoing.get(t).ok_or_else(|| Error::Domain("target out of range".into()))? {
                compose.insert((m2, m1), rule(m2, m1));
            }
        }
        Self::new(objects, source, target, identities, compose)
    }

    /// Only identity morphisms; morphism i is 1_i.
    pub fn discrete(objects: usize) -> Self {
        let ids: Vec<usize> = (0..objects).collect();
        Self::from_rule(objects, ids.clone(), ids.clone(), ids, |m2, _| m2).expect("discrete category")
    }

    /// Exactly one morphism between any two objects; (a, b) has index a·n + b.
    pub fn codiscrete(objects: usize) -> Self {
        let n = objects;
        let source = (0..n * n).map(|m| m / n).collect();
        let target = (0..n * n).map(|m| m % n).collect();
        let ids = (0..n).map(|a| a * n + a).collect();
        Self::from_rule(n, source, target, ids, |m2, m1| (m1 / n) * n + m2 % n).expect("codiscrete category")
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn morphisms(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self, m: usize) -> usize {
        self.source[m]
    }

    pub fn target(&self, m: usize) -> usize {
        self.target[m]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn outgoing(&self, o: usize) -> &[usize] {
        &self.outgoing[o]
    }

    /// m2∘m1 when defined.
    pub fn compose(&self, m2: usize, m1: usize) -> Option<usize> {
        self.compose.get(&(m2, m1)).copied()
    }

    /// Every pair (m1, m2) with t(m1) = s(m2).
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.morphisms()).flat_map(move |m1| self.outgoing[self.target[m1]].iter().map(move |&m2| (m1, m2)))
    }

    /// Closure, identity and associativity laws.
    pub fn check(&self) -> FiniteReport {
        let mut r = FiniteReport::default();
        r.push(
            "identities",
            first_witness(0..self.objects, |o| {
                let i = self.identities[o];
                (self.source[i] != o || self.target[i] != o).then(|| format!("1_{o} = {i} has wrong endpoints"))
            }),
        );
        r.push(
            "composites defined",
            first_witness(self.composable_pairs(), |(m1, m2)| match self.compose(m2, m1) {
                None => Some(format!("{m2}∘{m1} missing")),
                Some(c) if self.source[c] != self.source[m1] || self.target[c] != self.target[m2] => {
                    Some(format!("{m2}∘{m1} = {c} has wrong endpoints"))
                }
                _ => None,
            }),
        );
        r.push(
            "identity laws",
            first_witness(0..self.morphisms(), |m| {
                let left = self.compose(self.identities[self.target[m]], m);
                let right = self.compose(m, self.identities[self.source[m]]);
                (left != Some(m) || right != Some(m)).then(|| format!("identity law fails at {m}"))
            }),
        );
        r.push(
            "associativity",
            first_witness(self.composable_pairs(), |(m1, m2)| {
                let c12 = self.compose(m2, m1)?;
                self.outgoing[self.target[m2]].iter().find_map(|&m3| {
                    let lhs = self.compose(m3, c12);
                    let rhs = self.compose(m3, m2).and_then(|c23| self.compose(c23, m1));
                    (lhs != rhs).then(|| format!("({m3}∘{m2})∘{m1} ≠ {m3}∘({m2}∘{m1})"))
                })
            }),
        );
        r
    }
}

/// Object and morphism maps between finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteFunctor {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl FiniteFunctor {
    pub fn identity(c: &FiniteCategory) -> Self {
        Self { obj: (0..c.objects()).collect(), mor: (0..c.morphisms()).collect() }
    }

    /// Shape, endpoints, identities and composition.
    pub fn check(&self, from: &FiniteCategory, to: &FiniteCategory) -> FiniteReport {
        let mut r = FiniteReport::default();
        let shape = self.obj.len() != from.objects()
            || self.mor.len() != from.morphisms()
            || self.obj.iter().any(|&o| o >= to.objects())
            || self.mor.iter().any(|&m| m >= to.morphisms());
        r.push("functor shape", shape.then(|| "map tables have the wrong size or range".to_string()));
        if shape {
            return r;
        }
        r.push(
            "functor endpoints",
            first_witness(0..from.morphisms(), |m| {
                let fm = self.mor[m];
                (to.source(fm) != self.obj[from.source(m)] || to.target(fm) != self.obj[from.target(m)])
                    .then(|| format!("F({m}) = {fm} has wrong endpoints"))
            }),
        );
        r.push(
            "functor identities",
            first_witness(0..from.objects(), |o| {
                (self.mor[from.identity(o)] != to.identity(self.obj[o])).then(|| format!("F(1_{o}) ≠ 1_F({o})"))
            }),
        );
        r.push(
            "functor composition",
            first_witness(from.composable_pairs(), |(m1, m2)| {
                let c = from.compose(m2, m1)?;
                (to.compose(self.mor[m2], self.mor[m1]) != Some(self.mor[c])).then(|| format!("F({m2}∘{m1}) ≠ F({m2})∘F({m1})"))
            }),
        );
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_and_codiscrete_are_categories() {
        assert!(FiniteCategory::discrete(4).check().passed());
        let c = FiniteCategory::codiscrete(5);
        assert_eq!(c.morphisms(), 25);
        assert!(c.check().passed());
        assert!(FiniteFunctor::identity(&c).check(&c, &c).passed());
    }

    #[test]
    fn broken_composition_is_reported() {
        let mut table = HashMap::new();
        // two objects, codiscrete shape, but 1∘2 wrongly set to 1
        let c = FiniteCategory::codiscrete(2);
        for (m1, m2) in c.composable_pairs() {
            table.insert((m2, m1), c.compose(m2, m1).unwrap());
        }
        table.insert((2, 1), 1);
        let bad = FiniteCategory::new(2, vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 3], table).unwrap();
        let r = bad.check();
        assert!(!r.passed());
        assert!(r.witness("composites defined").unwrap().contains("2∘1"));
    }
}
