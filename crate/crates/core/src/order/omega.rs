use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::order::{Elem, LinearOrder};
use crate::{Error, Result};

/// A term ⟨(b₀,a₀),…,(bₘ,aₘ)⟩ of the ω-power of a base order: finitely many
/// (exponent, coefficient) pairs with strictly decreasing natural exponents.
///
/// The empty term is allowed and is the least element. When the base order
/// declares a bottom element, no coefficient may equal it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaTerm {
    base: LinearOrder,
    pairs: Vec<(u64, Elem)>,
}

/// One component in the even/odd interleaving of a term: exponents sit at
/// even positions, coefficients at odd ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Exponent(u64),
    Coefficient(Elem),
    Undefined,
}

impl OmegaTerm {
    pub fn new(base: LinearOrder, pairs: Vec<(u64, Elem)>) -> Result<Self> {
        for (i, (exp, coeff)) in pairs.iter().enumerate() {
            if i > 0 && pairs[i - 1].0 <= *exp {
                return Err(Error::NonDecreasingExponents(i));
            }
            if !base.contains(coeff) {
                return Err(Error::ElementNotInUniverse(coeff.to_string(), format!("{base:?}")));
            }
            if base.bottom().as_ref() == Some(coeff) {
                return Err(Error::BottomCoefficient);
            }
        }
        Ok(OmegaTerm { base, pairs })
    }

    pub fn base(&self) -> &LinearOrder {
        &self.base
    }

    pub fn pairs(&self) -> &[(u64, Elem)] {
        &self.pairs
    }

    /// Term length |t| = 2m+2 for m+1 pairs (0 for the empty term); the least
    /// position at which `component` is undefined.
    pub fn len(&self) -> u64 {
        2 * self.pairs.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The s-th component: exponent b_{s/2} for even s, coefficient
    /// a_{(s−1)/2} for odd s, `Undefined` for s ≥ |t|.
    pub fn component(&self, s: u64) -> Component {
        if s >= self.len() {
            return Component::Undefined;
        }
        let (exp, coeff) = &self.pairs[(s / 2) as usize];
        if s % 2 == 0 {
            Component::Exponent(*exp)
        } else {
            Component::Coefficient(coeff.clone())
        }
    }

    /// True iff `self`'s pair list is a proper prefix of `other`'s.
    pub fn is_proper_prefix_of(&self, other: &OmegaTerm) -> bool {
        self.pairs.len() < other.pairs.len()
            && self.pairs == other.pairs[..self.pairs.len()]
    }

    /// Lexicographic comparison on the ω-power: a proper extension is
    /// greater; otherwise the least differing pair decides, first by
    /// exponent, then by coefficient under the base order.
    pub fn cmp_omega(&self, other: &OmegaTerm) -> Result<Ordering> {
        if self.base != other.base {
            return Err(Error::MismatchedBaseOrder);
        }
        for ((be, ae), (bo, ao)) in self.pairs.iter().zip(&other.pairs) {
            match be.cmp(bo) {
                Ordering::Equal => {}
                ord => return Ok(ord),
            }
            match self.base.compare(ae, ao)? {
                Ordering::Equal => {}
                ord => return Ok(ord),
            }
        }
        Ok(self.pairs.len().cmp(&other.pairs.len()))
    }

    /// Positional value Σ alpha^{b_i}·a_i used by the comparison oracle.
    pub fn cnf_value(&self, alpha: u32) -> Result<BigUint> {
        let radix = BigUint::from(alpha);
        let mut total = BigUint::from(0u32);
        for (exp, coeff) in &self.pairs {
            let digit = match coeff {
                Elem::Nat(d) if (1..u64::from(alpha)).contains(d) => *d,
                other => {
                    return Err(Error::CoefficientOutOfRange(other.to_string(), alpha));
                }
            };
            total += radix.pow(*exp as u32) * BigUint::from(digit);
        }
        Ok(total)
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (exp, coeff)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "({exp},{coeff})")?;
        }
        write!(f, "]")
    }
}

/// Independent comparison route for terms over `FiniteChain(alpha)`:
/// evaluate both terms positionally and compare the resulting naturals.
/// Orders base-alpha terms exactly as [`OmegaTerm::cmp_omega`] does.
pub fn cmp_via_cnf_oracle(alpha: u32, s: &OmegaTerm, t: &OmegaTerm) -> Result<Ordering> {
    Ok(s.cnf_value(alpha)?.cmp(&t.cnf_value(alpha)?))
}

/// Containment check: each `inner` element must occur as a coefficient of
/// the term its position hint points at, and the hints must be
/// non-decreasing.
pub fn is_contained(inner: &[(Elem, usize)], sigma: &[OmegaTerm]) -> bool {
    let mut last = 0usize;
    for (value, hint) in inner {
        if *hint < last || *hint >= sigma.len() {
            return false;
        }
        if !sigma[*hint].pairs.iter().any(|(_, c)| c == value) {
            return false;
        }
        last = *hint;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Elem {
        Elem::rational(1, 2)
    }
    fn r() -> Elem {
        Elem::rational(1, 3)
    }

    fn term(pairs: Vec<(u64, Elem)>) -> OmegaTerm {
        OmegaTerm::new(LinearOrder::Rationals, pairs).unwrap()
    }

    #[test]
    fn length_and_components() {
        let t = term(vec![(5, q()), (2, r())]);
        assert_eq!(t.len(), 4);
        assert_eq!(t.component(0), Component::Exponent(5));
        assert_eq!(t.component(3), Component::Coefficient(r()));
        assert_eq!(t.component(4), Component::Undefined);
    }

    #[test]
    fn extension_is_greater() {
        let s = term(vec![(2, q())]);
        let t = term(vec![(2, q()), (1, r())]);
        assert_eq!(s.cmp_omega(&t).unwrap(), Ordering::Less);
        assert!(s.is_proper_prefix_of(&t));
        let u = term(vec![(3, q())]);
        assert_eq!(u.cmp_omega(&u).unwrap(), Ordering::Equal);
    }

    #[test]
    fn first_difference_decides() {
        let s = term(vec![(3, q())]);
        let t = term(vec![(3, r()), (0, Elem::rational(5, 1))]);
        // first difference at position 1: 1/2 > 1/3
        assert_eq!(s.cmp_omega(&t).unwrap(), Ordering::Greater);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            OmegaTerm::new(LinearOrder::Rationals, vec![(2, q()), (2, r())]),
            Err(Error::NonDecreasingExponents(1))
        ));
        assert!(matches!(
            OmegaTerm::new(LinearOrder::FiniteChain(3), vec![(1, Elem::Nat(0))]),
            Err(Error::BottomCoefficient)
        ));
        let a = term(vec![(1, q())]);
        let b = OmegaTerm::new(LinearOrder::Naturals, vec![(1, Elem::Nat(2))]).unwrap();
        assert_eq!(a.cmp_omega(&b), Err(Error::MismatchedBaseOrder));
    }

    #[test]
    fn oracle_matches_printed_arithmetic() {
        let chain = LinearOrder::FiniteChain(3);
        let s = OmegaTerm::new(chain.clone(), vec![(1, Elem::Nat(2))]).unwrap();
        let t = OmegaTerm::new(chain, vec![(1, Elem::Nat(1)), (0, Elem::Nat(2))]).unwrap();
        assert_eq!(s.cnf_value(3).unwrap(), BigUint::from(6u32));
        assert_eq!(t.cnf_value(3).unwrap(), BigUint::from(5u32));
        assert_eq!(cmp_via_cnf_oracle(3, &s, &t).unwrap(), Ordering::Greater);
        assert_eq!(cmp_via_cnf_oracle(3, &t, &t).unwrap(), Ordering::Equal);
    }

    #[test]
    fn oracle_rejects_out_of_range_coefficients() {
        let s = OmegaTerm::new(LinearOrder::FiniteChain(5), vec![(1, Elem::Nat(4))]).unwrap();
        assert!(matches!(s.cnf_value(3), Err(Error::CoefficientOutOfRange(_, 3))));
    }

    /// All valid chain terms with few pairs and small exponents.
    fn enumerate_terms(alpha: u32, max_pairs: usize, max_exp: u64) -> Vec<OmegaTerm> {
        let chain = LinearOrder::FiniteChain(alpha);
        let mut out = vec![OmegaTerm::new(chain.clone(), vec![]).unwrap()];
        let exps: Vec<u64> = (0..max_exp).collect();
        // choose a strictly decreasing exponent sequence and coefficients
        fn go(
            chain: &LinearOrder,
            alpha: u32,
            exps: &[u64],
            max_pairs: usize,
            acc: &mut Vec<(u64, Elem)>,
            out: &mut Vec<OmegaTerm>,
        ) {
            if !acc.is_empty() {
                out.push(OmegaTerm::new(chain.clone(), acc.clone()).unwrap());
            }
            if acc.len() == max_pairs {
                return;
            }
            let floor = acc.last().map(|(e, _)| *e);
            for &e in exps {
                if floor.map_or(true, |f| e < f) {
                    for c in 1..u64::from(alpha) {
                        acc.push((e, Elem::Nat(c)));
                        go(chain, alpha, exps, max_pairs, acc, out);
                        acc.pop();
                    }
                }
            }
        }
        let mut acc = Vec::new();
        // recurse from the largest exponent downwards
        let mut exps_desc = exps.clone();
        exps_desc.reverse();
        go(&chain, alpha, &exps_desc, max_pairs, &mut acc, &mut out);
        out
    }

    #[test]
    fn oracle_agrees_exhaustively() {
        for alpha in [2u32, 3] {
            let terms = enumerate_terms(alpha, 3, 4);
            for s in &terms {
                for t in &terms {
                    assert_eq!(
                        s.cmp_omega(t).unwrap(),
                        cmp_via_cnf_oracle(alpha, s, t).unwrap(),
                        "disagreement on {s} vs {t} (alpha={alpha})"
                    );
                }
            }
        }
    }

    #[test]
    fn proper_prefixes_are_less() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2_000 {
            let len = rng.gen_range(1..5usize);
            let mut exp = rng.gen_range(len as u64..len as u64 + 6);
            let mut pairs = Vec::new();
            for _ in 0..len {
                pairs.push((exp, Elem::Rat(rat(rng.gen_range(-9..9), rng.gen_range(1..7)))));
                if exp == 0 {
                    break;
                }
                exp = rng.gen_range(0..exp);
            }
            let t = term(pairs.clone());
            for cut in 0..pairs.len() {
                let s = term(pairs[..cut].to_vec());
                assert_eq!(s.cmp_omega(&t).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn cmp_omega_total_order_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sample = |rng: &mut ChaCha8Rng| {
            let len = rng.gen_range(0..4usize);
            let mut pairs = Vec::new();
            let mut exp = 8;
            for _ in 0..len {
                if exp == 0 {
                    break;
                }
                exp = rng.gen_range(0..exp);
                pairs.push((exp, Elem::Rat(rat(rng.gen_range(-4..4), rng.gen_range(1..4)))));
            }
            // pairs were built with increasing positions but descending exps
            term(pairs)
        };
        for _ in 0..10_000 {
            let (a, b, c) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
            let ab = a.cmp_omega(&b).unwrap();
            assert_eq!(ab, b.cmp_omega(&a).unwrap().reverse());
            if ab == Ordering::Equal {
                assert_eq!(a, b);
            }
            let bc = b.cmp_omega(&c).unwrap();
            if ab == bc && ab != Ordering::Equal {
                assert_eq!(a.cmp_omega(&c).unwrap(), ab);
            }
        }
    }

    #[test]
    fn containment_examples() {
        let sigma = vec![term(vec![(2, q())])];
        assert!(is_contained(&[(q(), 0)], &sigma));
        assert!(!is_contained(&[(r(), 0)], &sigma));
        let sigma2 = vec![term(vec![(2, q())]), term(vec![(1, r())])];
        // hints must be non-decreasing
        assert!(!is_contained(&[(r(), 1), (q(), 0)], &sigma2));
        assert!(is_contained(&[(q(), 0), (r(), 1)], &sigma2));
    }

    #[test]
    fn term_display() {
        let t = term(vec![(5, q()), (2, r())]);
        assert_eq!(t.to_string(), "[(5,1/2);(2,1/3)]");
        assert_eq!(term(vec![]).to_string(), "[]");
    }
}
