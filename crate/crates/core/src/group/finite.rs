//! Finite groups given by Cayley tables.

use std::io::Read;

use crate::error::{Error, Result};

/// Multiplication table of a finite group on elements `0..n`.
///
/// `table[a][b]` is the product `a·b` (row = left factor, column = right
/// factor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl CayleyTable {
    /// Validates the table shape, the existence of a two-sided identity and of
    /// inverses. Associativity is not assumed; see [`CayleyTable::associativity_witness`].
    pub fn from_rows(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Domain("empty Cayley table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::Domain(format!("entry {bad} in row {i} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Domain("Cayley table has no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::Domain(format!("element {a} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(Self { table, identity, inverse })
    }

    /// Reads a headerless CSV table of element indices.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|f| {
                    f.parse::<usize>()
                        .map_err(|_| Error::Domain(format!("bad Cayley entry `{f}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    /// Writes the table as headerless CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.table {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_rows(rows).expect("cyclic table is a group")
    }

    /// Quaternion group Q₈. Index `2u + s` encodes the unit
    /// u ∈ {1, i, j, k} with sign `(-1)^s`; so 0 = 1 and 1 = −1.
    pub fn quaternion() -> Self {
        // unit products: (sign, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let rows = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (neg, u) = UNIT[a / 2][b / 2];
                        let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                        2 * u + usize::from(sign)
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows).expect("quaternion table is a group")
    }

    /// Symmetric group on `k` letters, elements in lexicographic order of
    /// their one-line notation; product is composition `(σπ)(x) = σ(π(x))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let rows = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|p| index(&p.iter().map(|&x| s[x]).collect()))
                    .collect()
            })
            .collect();
        Self::from_rows(rows).expect("symmetric table is a group")
    }

    /// Direct product; element `(a, b)` has index `a * other.order() + b`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let m = other.order();
        let n = self.order() * m;
        let rows = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_rows(rows).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// First triple violating associativity, if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Checks that `subset` commutes with every element; returns a violating
    /// pair `(z, a)` otherwise.
    pub fn centrality_witness(&self, subset: &[usize]) -> Option<(usize, usize)> {
        for &z in subset {
            for a in 0..self.order() {
                if self.mul(z, a) != self.mul(a, z) {
                    return Some((z, a));
                }
            }
        }
        None
    }

    /// True when `subset` contains the identity and is closed under products
    /// and inverses.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        subset.contains(&self.identity)
            && subset.iter().all(|&a| {
                subset.contains(&self.inv(a)) && subset.iter().all(|&b| subset.contains(&self.mul(a, b)))
            })
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for x in 0..k {
            if !prefix.contains(&x) {
                prefix.push(x);
                go(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), k, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_relations() {
        let q = CayleyTable::quaternion();
        let (one, minus_one, i, j, k) = (0, 1, 2, 4, 6);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), q.mul(minus_one, k));
        assert_eq!(q.identity(), one);
        assert!(q.associativity_witness().is_none());
        assert!(q.centrality_witness(&[0, 1]).is_none());
        assert!(q.centrality_witness(&[2]).is_some());
    }

    #[test]
    fn symmetric_three_is_nonabelian_group() {
        let s = CayleyTable::symmetric(3);
        assert_eq!(s.order(), 6);
        assert!(s.associativity_witness().is_none());
        assert!(s.centrality_witness(&(0..6).collect::<Vec<_>>()).is_some());
    }

    #[test]
    fn csv_round_trip() {
        let z4 = CayleyTable::cyclic(4);
        let back = CayleyTable::from_csv(z4.to_csv().as_bytes()).unwrap();
        assert_eq!(back, z4);
    }

    #[test]
    fn rejects_table_without_identity() {
        let err = CayleyTable::from_rows(vec![vec![1, 0], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
