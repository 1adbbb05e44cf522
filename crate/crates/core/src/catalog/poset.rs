use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite poset given by an explicit ≤ table. Sizes stay small (≤ 6 in the
/// harness), so every check is an exhaustive loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePoset {
    size: usize,
    /// Row-major: `leq[i * size + j]` iff i ≤_P j.
    leq: Vec<bool>,
}

impl FinitePoset {
    pub fn new(size: usize, leq: Vec<bool>) -> Result<Self> {
        if size == 0 || leq.len() != size * size {
            return Err(Error::NotAPartialOrder(format!(
                "table size {} does not match n={size}",
                leq.len()
            )));
        }
        let p = FinitePoset { size, leq };
        for i in 0..size {
            if !p.leq(i, i) {
                return Err(Error::NotAPartialOrder(format!("not reflexive at {i}")));
            }
            for j in 0..size {
                if i != j && p.leq(i, j) && p.leq(j, i) {
                    return Err(Error::NotAPartialOrder(format!("not antisymmetric at ({i},{j})")));
                }
                for k in 0..size {
                    if p.leq(i, j) && p.leq(j, k) && !p.leq(i, k) {
                        return Err(Error::NotAPartialOrder(format!(
                            "not transitive at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Chain 0 <_P 1 <_P … <_P n−1.
    pub fn chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                leq[i * n + j] = true;
            }
        }
        FinitePoset { size: n, leq }
    }

    /// Reversed chain 0 >_P 1 >_P … >_P n−1.
    pub fn reversed_chain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..=i {
                leq[i * n + j] = true;
            }
        }
        FinitePoset { size: n, leq }
    }

    /// Antichain on n elements.
    pub fn antichain(n: usize) -> Self {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        FinitePoset { size: n, leq }
    }

    /// Componentwise product. Element index encodes the tuple in mixed radix
    /// with the first factor most significant.
    pub fn product(factors: &[&FinitePoset]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyList);
        }
        let size: usize = factors.iter().map(|p| p.size).product();
        let mut leq = vec![false; size * size];
        for a in 0..size {
            for b in 0..size {
                let mut rel = true;
                let (mut x, mut y) = (a, b);
                for p in factors.iter().rev() {
                    let (i, j) = (x % p.size, y % p.size);
                    if !p.leq(i, j) {
                        rel = false;
                        break;
                    }
                    x /= p.size;
                    y /= p.size;
                }
                leq[a * size + b] = rel;
            }
        }
        Ok(FinitePoset { size, leq })
    }

    /// Decompose a product-poset index back into factor indices.
    pub fn unpack_product_index(factor_sizes: &[usize], mut index: usize) -> Vec<usize> {
        let mut out = vec![0; factor_sizes.len()];
        for (slot, &s) in factor_sizes.iter().enumerate().rev() {
            out[slot] = index % s;
            index /= s;
        }
        out
    }

    pub fn pack_product_index(factor_sizes: &[usize], parts: &[usize]) -> usize {
        let mut idx = 0;
        for (&s, &p) in factor_sizes.iter().zip(parts) {
            idx = idx * s + p;
        }
        idx
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.size + j]
    }

    pub fn related_pairs(&self) -> usize {
        self.leq.iter().filter(|&&b| b).count()
    }
}

/// Deterministic linear extension by Kahn-style peeling: among the minimal
/// elements of the remaining set, always take the lowest original index.
/// The result lists original indices p_1, …, p_n with p_i ≤_P p_j ⇒ i ≤ j.
pub fn linear_extension(p: &FinitePoset) -> Vec<usize> {
    let n = p.size();
    let mut remaining: Vec<bool> = vec![true; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&i| remaining[i])
            .find(|&i| {
                (0..n).all(|j| !remaining[j] || j == i || !p.leq(j, i) || p.leq(i, j))
            })
            .expect("a finite poset always has a minimal element");
        remaining[next] = false;
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_extension_breaks_ties_by_index() {
        assert_eq!(linear_extension(&FinitePoset::antichain(3)), vec![0, 1, 2]);
    }

    #[test]
    fn chain_extension_is_the_chain() {
        assert_eq!(linear_extension(&FinitePoset::chain(3)), vec![0, 1, 2]);
        assert_eq!(linear_extension(&FinitePoset::reversed_chain(3)), vec![2, 1, 0]);
    }

    #[test]
    fn diamond_extension_peels_with_index_tiebreak() {
        // ⊥=0 < {l=1, r=2} < ⊤=3
        let n = 4;
        let mut leq = vec![false; n * n];
        let mut set = |i: usize, j: usize| leq[i * n + j] = true;
        for i in 0..n {
            set(i, i);
        }
        set(0, 1);
        set(0, 2);
        set(0, 3);
        set(1, 3);
        set(2, 3);
        let p = FinitePoset::new(n, leq).unwrap();
        assert_eq!(linear_extension(&p), vec![0, 1, 2, 3]);
    }

    #[test]
    fn invalid_tables_are_rejected() {
        // missing reflexivity
        assert!(FinitePoset::new(2, vec![false, false, false, true]).is_err());
        // 0 ≤ 1 and 1 ≤ 0 with 0 ≠ 1
        assert!(FinitePoset::new(2, vec![true, true, true, true]).is_err());
    }

    #[test]
    fn product_of_two_chains_has_nine_related_pairs() {
        let c2 = FinitePoset::chain(2);
        let p = FinitePoset::product(&[&c2, &c2]).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.related_pairs(), 9);
    }

    /// Enumerate all posets on n labeled elements by assigning each unordered
    /// pair one of three states (i<j, j<i, incomparable) and keeping the
    /// transitive ones.
    fn all_posets(n: usize) -> Vec<FinitePoset> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let mut out = Vec::new();
        let total = 3usize.pow(pairs.len() as u32);
        for code in 0..total {
            let mut leq = vec![false; n * n];
            for i in 0..n {
                leq[i * n + i] = true;
            }
            let mut c = code;
            for &(i, j) in &pairs {
                match c % 3 {
                    1 => leq[i * n + j] = true,
                    2 => leq[j * n + i] = true,
                    _ => {}
                }
                c /= 3;
            }
            if let Ok(p) = FinitePoset::new(n, leq) {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn extension_respects_order_exhaustively() {
        for n in 1..=5 {
            for p in all_posets(n) {
                let ext = linear_extension(&p);
                for a in 0..n {
                    for b in 0..n {
                        if p.leq(ext[a], ext[b]) {
                            assert!(a <= b || ext[a] == ext[b], "violated for n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn labeled_poset_counts_match_known_values() {
        // OEIS A001035: 1, 3, 19, 219, 4231
        assert_eq!(all_posets(2).len(), 3);
        assert_eq!(all_posets(3).len(), 19);
        assert_eq!(all_posets(4).len(), 219);
        assert_eq!(all_posets(5).len(), 4231);
    }
}
