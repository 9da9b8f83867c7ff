//! Freely reduced words over a finite alphabet with formal inverses: the
//! finite shadow of loop composition with backtracks erased.

use std::fmt;

/// Letter `+k` is generator k − 1 and `−k` its formal inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ReducedWord(Vec<i32>);

impl ReducedWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Freely reduces an arbitrary letter sequence. Letter 0 is rejected.
    pub fn new(letters: &[i32]) -> Option<Self> {
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 {
                return None;
            }
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Some(Self(out))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation followed by cancellation at the junction.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| -l).collect())
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| if l > 0 { format!("x{l}") } else { format!("x{}⁻¹", -l) })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backtracks_cancel() {
        let w = ReducedWord::new(&[1, 2, -2, 3, -3, -1, 2]).unwrap();
        assert_eq!(w.letters(), &[2]);
        let a = ReducedWord::new(&[1, 2]).unwrap();
        assert!(a.compose(&a.inverse()).is_empty());
        assert_eq!(ReducedWord::new(&[0]), None);
        assert_eq!(a.to_string(), "x1x2");
    }
}
