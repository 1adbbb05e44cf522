use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shorthand for an exact rational from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form `p/q` (always with an explicit denominator).
pub fn rat_to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// An element of one of the supported universes.
///
/// Which variants are admissible is decided by the [`LinearOrder`] a value is
/// used with; `Elem` itself is just the sum of all carrier types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Nat(u64),
    Int(i64),
    Rat(BigRational),
    /// The top element of the extended nonnegative rationals.
    Infinity,
    Tuple(Vec<Elem>),
}

impl Elem {
    pub fn rational(num: i64, den: i64) -> Self {
        Elem::Rat(rat(num, den))
    }

    /// The j-th coordinate of a tuple element, 1-based from the left.
    pub fn coord(&self, j: usize) -> Option<&Elem> {
        match self {
            Elem::Tuple(parts) => parts.get(j - 1),
            _ => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Nat(n) => write!(f, "{n}"),
            Elem::Int(i) => write!(f, "{i}"),
            Elem::Rat(q) => write!(f, "{}", rat_to_string(q)),
            Elem::Infinity => write!(f, "inf"),
            Elem::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A linear order on a fixed universe, with a total three-way comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinearOrder {
    /// 0 < 1 < 2 < … ; declares 0 as its bottom element.
    Naturals,
    /// All integers with the order reversed: a ≤ b iff b ≤_Z a.
    ReversedIntegers,
    /// Exact rationals in their usual order. No bottom element.
    Rationals,
    /// {0, …, k−1} in natural order; declares 0 as its bottom element.
    FiniteChain(u32),
    /// Nonnegative rationals plus a top element `inf`. Comparison only;
    /// no arithmetic is defined on `inf`.
    ExtendedNonnegRationals,
    /// Lexicographic product of the factor orders, leftmost factor most
    /// significant.
    LexProduct(Vec<LinearOrder>),
    /// {1,…,n} × N × Q × {−n,…,−1}, each factor in natural order,
    /// compared lexicographically.
    CompositeNnqneg(u32),
}

impl LinearOrder {
    /// The designated bottom element, when this order declares one.
    pub fn bottom(&self) -> Option<Elem> {
        match self {
            LinearOrder::Naturals | LinearOrder::FiniteChain(_) => Some(Elem::Nat(0)),
            LinearOrder::ExtendedNonnegRationals => Some(Elem::Rat(rat(0, 1))),
            _ => None,
        }
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match (self, e) {
            (LinearOrder::Naturals, Elem::Nat(_)) => true,
            (LinearOrder::ReversedIntegers, Elem::Int(_)) => true,
            (LinearOrder::Rationals, Elem::Rat(_)) => true,
            (LinearOrder::FiniteChain(k), Elem::Nat(n)) => *n < u64::from(*k),
            (LinearOrder::ExtendedNonnegRationals, Elem::Infinity) => true,
            (LinearOrder::ExtendedNonnegRationals, Elem::Rat(q)) => {
                q.numer().sign() != num_bigint::Sign::Minus
            }
            (LinearOrder::LexProduct(factors), Elem::Tuple(parts)) => {
                parts.len() == factors.len()
                    && factors.iter().zip(parts).all(|(f, p)| f.contains(p))
            }
            (LinearOrder::CompositeNnqneg(n), Elem::Tuple(parts)) => {
                let n = i64::from(*n);
                matches!(parts.as_slice(),
                    [Elem::Nat(j), Elem::Nat(_), Elem::Rat(_), Elem::Int(d)]
                        if (1..=n as u64).contains(j) && (-n..=-1).contains(d))
            }
            _ => false,
        }
    }

    /// Total three-way comparison on the universe.
    pub fn compare(&self, a: &Elem, b: &Elem) -> Result<Ordering> {
        for e in [a, b] {
            if !self.contains(e) {
                return Err(Error::ElementNotInUniverse(e.to_string(), format!("{self:?}")));
            }
        }
        Ok(self.compare_unchecked(a, b))
    }

    fn compare_unchecked(&self, a: &Elem, b: &Elem) -> Ordering {
        match (self, a, b) {
            (LinearOrder::Naturals | LinearOrder::FiniteChain(_), Elem::Nat(x), Elem::Nat(y)) => {
                x.cmp(y)
            }
            (LinearOrder::ReversedIntegers, Elem::Int(x), Elem::Int(y)) => y.cmp(x),
            (LinearOrder::Rationals, Elem::Rat(x), Elem::Rat(y)) => x.cmp(y),
            (LinearOrder::ExtendedNonnegRationals, x, y) => match (x, y) {
                (Elem::Infinity, Elem::Infinity) => Ordering::Equal,
                (Elem::Infinity, _) => Ordering::Greater,
                (_, Elem::Infinity) => Ordering::Less,
                (Elem::Rat(x), Elem::Rat(y)) => x.cmp(y),
                _ => unreachable!("universe checked"),
            },
            (LinearOrder::LexProduct(factors), Elem::Tuple(xs), Elem::Tuple(ys)) => {
                for (f, (x, y)) in factors.iter().zip(xs.iter().zip(ys)) {
                    match f.compare_unchecked(x, y) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            (LinearOrder::CompositeNnqneg(_), Elem::Tuple(xs), Elem::Tuple(ys)) => {
                for (x, y) in xs.iter().zip(ys) {
                    let c = match (x, y) {
                        (Elem::Nat(a), Elem::Nat(b)) => a.cmp(b),
                        (Elem::Rat(a), Elem::Rat(b)) => a.cmp(b),
                        (Elem::Int(a), Elem::Int(b)) => a.cmp(b),
                        _ => unreachable!("universe checked"),
                    };
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }
            _ => unreachable!("universe checked"),
        }
    }

    /// Convenience constructor for a composite element (j, count, q, d).
    pub fn composite_elem(j: u64, count: u64, q: BigRational, d: i64) -> Elem {
        Elem::Tuple(vec![Elem::Nat(j), Elem::Nat(count), Elem::Rat(q), Elem::Int(d)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(order: &LinearOrder, rng: &mut ChaCha8Rng) -> Elem {
        match order {
            LinearOrder::Naturals => Elem::Nat(rng.gen_range(0..50)),
            LinearOrder::ReversedIntegers => Elem::Int(rng.gen_range(-50..50)),
            LinearOrder::Rationals => Elem::Rat(rat(rng.gen_range(-20..20), rng.gen_range(1..12))),
            LinearOrder::FiniteChain(k) => Elem::Nat(rng.gen_range(0..u64::from(*k))),
            LinearOrder::ExtendedNonnegRationals => {
                if rng.gen_bool(0.1) {
                    Elem::Infinity
                } else {
                    Elem::Rat(rat(rng.gen_range(0..30), rng.gen_range(1..9)))
                }
            }
            LinearOrder::LexProduct(fs) => {
                Elem::Tuple(fs.iter().map(|f| sample(f, rng)).collect())
            }
            LinearOrder::CompositeNnqneg(n) => LinearOrder::composite_elem(
                rng.gen_range(1..=u64::from(*n)),
                rng.gen_range(0..10),
                rat(rng.gen_range(-9..9), rng.gen_range(1..7)),
                rng.gen_range(-(i64::from(*n))..=-1),
            ),
        }
    }

    /// Antisymmetry, transitivity, and trichotomy on sampled triples for
    /// every supported order.
    #[test]
    fn total_order_axioms_on_sampled_triples() {
        let orders = vec![
            LinearOrder::Naturals,
            LinearOrder::ReversedIntegers,
            LinearOrder::Rationals,
            LinearOrder::FiniteChain(5),
            LinearOrder::ExtendedNonnegRationals,
            LinearOrder::LexProduct(vec![LinearOrder::FiniteChain(2), LinearOrder::Rationals]),
            LinearOrder::CompositeNnqneg(3),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for order in &orders {
            for _ in 0..10_000 {
                let (a, b, c) = (sample(order, &mut rng), sample(order, &mut rng), sample(order, &mut rng));
                let ab = order.compare(&a, &b).unwrap();
                let ba = order.compare(&b, &a).unwrap();
                assert_eq!(ab, ba.reverse(), "antisymmetry in {order:?}");
                assert_eq!(order.compare(&a, &a).unwrap(), Ordering::Equal);
                let bc = order.compare(&b, &c).unwrap();
                if ab == bc && ab != Ordering::Equal {
                    assert_eq!(order.compare(&a, &c).unwrap(), ab, "transitivity in {order:?}");
                }
                if ab == Ordering::Equal {
                    assert_eq!(a, b, "equal means identical in {order:?}");
                }
            }
        }
    }

    #[test]
    fn reversed_integers_reverse() {
        let o = LinearOrder::ReversedIntegers;
        assert_eq!(o.compare(&Elem::Int(3), &Elem::Int(5)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn infinity_tops_everything() {
        let o = LinearOrder::ExtendedNonnegRationals;
        assert_eq!(
            o.compare(&Elem::Infinity, &Elem::Rat(rat(1_000_000, 1))).unwrap(),
            Ordering::Greater
        );
        assert_eq!(o.compare(&Elem::Infinity, &Elem::Infinity).unwrap(), Ordering::Equal);
        assert!(o.compare(&Elem::Rat(rat(-1, 2)), &Elem::Infinity).is_err());
    }

    #[test]
    fn composite_is_lex_on_four_coordinates() {
        let o = LinearOrder::CompositeNnqneg(2);
        let hi = LinearOrder::composite_elem(2, 0, rat(1, 2), -2);
        let lo = LinearOrder::composite_elem(1, 99, rat(9, 1), -1);
        assert_eq!(o.compare(&hi, &lo).unwrap(), Ordering::Greater);
        let a = LinearOrder::composite_elem(1, 1, rat(1, 2), -1);
        let b = LinearOrder::composite_elem(1, 1, rat(1, 3), -2);
        assert_eq!(o.compare(&a, &b).unwrap(), Ordering::Greater);
        let c = LinearOrder::composite_elem(1, 1, rat(1, 3), -1);
        assert_eq!(o.compare(&b, &c).unwrap(), Ordering::Less);
    }

    #[test]
    fn display_formats() {
        assert_eq!(Elem::rational(3, 1).to_string(), "3/1");
        assert_eq!(Elem::rational(-4, 6).to_string(), "-2/3");
        assert_eq!(Elem::Infinity.to_string(), "inf");
        assert_eq!(
            LinearOrder::composite_elem(2, 1, rat(1, 2), -1).to_string(),
            "(2,1,1/2,-1)"
        );
    }
}
