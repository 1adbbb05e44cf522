use std::cmp::Ordering;
use std::fmt;

use crate::order::{Elem, LinearOrder};
use crate::{Error, Result};

/// A width-n tuple over a base order, written (a_n,…,a_1): the leftmost
/// entry carries index n and is the most significant for comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexTuple {
    base: LinearOrder,
    entries: Vec<Elem>,
}

impl LexTuple {
    pub fn new(base: LinearOrder, entries: Vec<Elem>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("lex tuple must have width >= 1".into()));
        }
        for e in &entries {
            if !base.contains(e) {
                return Err(Error::ElementNotInUniverse(e.to_string(), format!("{base:?}")));
            }
        }
        Ok(LexTuple { base, entries })
    }

    pub fn base(&self) -> &LinearOrder {
        &self.base
    }

    pub fn width(&self) -> usize {
        self.entries.len()
    }

    /// Entries in written order: index n first, index 1 last.
    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    /// Entry at position j in the n-down-to-1 indexing.
    pub fn component(&self, j: usize) -> Option<&Elem> {
        let n = self.entries.len();
        if j == 0 || j > n {
            return None;
        }
        Some(&self.entries[n - j])
    }

    /// Lexicographic comparison scanning from position n down to 1.
    pub fn cmp_lex(&self, other: &LexTuple) -> Result<Ordering> {
        if self.width() != other.width() {
            return Err(Error::WidthMismatch(self.width(), other.width()));
        }
        if self.base != other.base {
            return Err(Error::MismatchedBaseOrder);
        }
        for (a, b) in self.entries.iter().zip(&other.entries) {
            match self.base.compare(a, b)? {
                Ordering::Equal => {}
                ord => return Ok(ord),
            }
        }
        Ok(Ordering::Equal)
    }

    /// True iff `value` occurs among the entries.
    pub fn mentions(&self, value: &Elem) -> bool {
        self.entries.iter().any(|e| e == value)
    }
}

impl fmt::Display for LexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat_tuple(entries: &[u64]) -> LexTuple {
        LexTuple::new(
            LinearOrder::Naturals,
            entries.iter().map(|&n| Elem::Nat(n)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn leftmost_dominates() {
        assert_eq!(nat_tuple(&[1, 0]).cmp_lex(&nat_tuple(&[1, 0])).unwrap(), Ordering::Equal);
        assert_eq!(
            nat_tuple(&[2, 0]).cmp_lex(&nat_tuple(&[1, 9])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            nat_tuple(&[1, 3]).cmp_lex(&nat_tuple(&[1, 2])).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn width_mismatch_is_an_error() {
        assert_eq!(
            nat_tuple(&[1]).cmp_lex(&nat_tuple(&[1, 2])),
            Err(Error::WidthMismatch(1, 2))
        );
    }

    #[test]
    fn paper_indexing_runs_n_down_to_1() {
        let t = nat_tuple(&[7, 8, 9]);
        assert_eq!(t.component(3), Some(&Elem::Nat(7)));
        assert_eq!(t.component(1), Some(&Elem::Nat(9)));
        assert_eq!(t.component(0), None);
        assert_eq!(t.component(4), None);
    }
}
