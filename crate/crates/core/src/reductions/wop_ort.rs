use std::cmp::Ordering;
use std::sync::OnceLock;

use crate::catalog::{ColoringStream, DescendingStream, FinitePoset, MonotoneNatStream, WitnessStream};
use crate::order::{Component, OmegaTerm};
use crate::{Error, Result};

/// Pair color for i < j: the length of σ_j when σ_j is a proper prefix of
/// σ_i, otherwise the least component index where the two terms differ.
fn pair_color(si: &OmegaTerm, sj: &OmegaTerm) -> Result<u64> {
    if sj.is_proper_prefix_of(si) {
        return Ok(sj.len());
    }
    for s in 0..si.len() {
        let differ = match (si.component(s), sj.component(s)) {
            (Component::Exponent(a), Component::Exponent(b)) => a != b,
            (Component::Coefficient(a), Component::Coefficient(b)) => a != b,
            (Component::Undefined, Component::Undefined) => false,
            _ => true,
        };
        if differ {
            return Ok(s);
        }
    }
    // identical terms: the instance was not strictly descending
    Err(Error::NotDescending(0))
}

/// Translate a descending ω-power instance into a right-ordered coloring
/// over the reversed chain on 2k_σ+2 colors, k_σ the first exponent of σ₀.
///
/// Descent and the length bound are spot-checked lazily on every observed
/// pair; violations surface as `NotDescending` / `LengthOverflow`.
pub fn wop_to_ort_forward(
    sigma: DescendingStream<OmegaTerm>,
) -> Result<(FinitePoset, ColoringStream)> {
    let first = sigma.get(0)?;
    let k_sigma = first.pairs().first().map(|(b, _)| *b).unwrap_or(0);
    let bound = 2 * k_sigma + 2;
    let poset = FinitePoset::reversed_chain(bound as usize);
    let coloring = ColoringStream::new(bound as usize, move |i, j| {
        let si = sigma.get(i)?;
        let sj = sigma.get(j)?;
        for t in [&si, &sj] {
            if t.len() > bound {
                return Err(Error::LengthOverflow { got: t.len(), bound });
            }
        }
        if sj.cmp_omega(&si)? != Ordering::Less {
            return Err(Error::NotDescending(j));
        }
        Ok(pair_color(&si, &sj)? as usize)
    });
    Ok((poset, coloring))
}

/// Extract a descending contained sequence from a homogeneous set for the
/// forward image: the pair color c* of the set is odd, and the values are
/// the coefficients σ_{h_i}(c*).
pub fn wop_to_ort_backward(
    sigma: DescendingStream<OmegaTerm>,
    homogeneous: MonotoneNatStream,
) -> Result<WitnessStream> {
    backward_impl(sigma, homogeneous, false)
}

/// Planted-bug variant for mutation testing: reads the coefficient one pair
/// further along (index arithmetic (c*+1)/2 instead of (c*−1)/2).
pub(crate) fn wop_to_ort_backward_parity_flipped(
    sigma: DescendingStream<OmegaTerm>,
    homogeneous: MonotoneNatStream,
) -> Result<WitnessStream> {
    backward_impl(sigma, homogeneous, true)
}

fn backward_impl(
    sigma: DescendingStream<OmegaTerm>,
    homogeneous: MonotoneNatStream,
    parity_flip: bool,
) -> Result<WitnessStream> {
    let base = sigma.get(0)?.base().clone();
    let c_star: OnceLock<u64> = OnceLock::new();
    let gen = move |k: u64| -> Result<(crate::order::Elem, u64)> {
        let h_k = homogeneous.get(k)?;
        let h_next = homogeneous.get(k + 1)?;
        if h_next <= h_k {
            return Err(Error::Invalid(format!(
                "homogeneous set not strictly increasing at {k}"
            )));
        }
        let star = match c_star.get() {
            Some(&s) => s,
            None => {
                let h0 = homogeneous.get(0)?;
                let h1 = homogeneous.get(1)?;
                let c = pair_color(&sigma.get(h0)?, &sigma.get(h1)?)?;
                if c % 2 == 0 {
                    return Err(Error::EvenColor(c));
                }
                *c_star.get_or_init(|| c)
            }
        };
        // later pairs must agree with c*
        let c_here = pair_color(&sigma.get(h_k)?, &sigma.get(h_next)?)?;
        if c_here != star {
            return Err(Error::NotHomogeneous(h_k, h_next, c_here, star));
        }
        let read_at = if parity_flip { star + 2 } else { star };
        match sigma.get(h_k)?.component(read_at) {
            Component::Coefficient(v) => Ok((v, h_k)),
            other => Err(Error::MalformedValue(format!(
                "component {read_at} of term {h_k} is {other:?}, not a coefficient"
            ))),
        }
    };
    Ok(WitnessStream::new(base, gen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        gen_certified_instance, validate_right_ordered, Certificate, GenParams, InstancePayload,
        ProblemTag,
    };
    use crate::order::{Elem, LinearOrder};

    fn q() -> Elem {
        Elem::rational(1, 2)
    }
    fn r() -> Elem {
        Elem::rational(1, 3)
    }

    fn fixed_stream(terms: Vec<OmegaTerm>) -> DescendingStream<OmegaTerm> {
        DescendingStream::new(move |i| {
            terms
                .get(i as usize)
                .cloned()
                .ok_or_else(|| Error::Invalid("stream exhausted".into()))
        })
    }

    #[test]
    fn coloring_case_split() {
        let term = |pairs| OmegaTerm::new(LinearOrder::Rationals, pairs).unwrap();
        // prefix case: c = |σ₁| = 2
        let s0 = term(vec![(2, q()), (1, r())]);
        let s1 = term(vec![(2, q())]);
        assert_eq!(pair_color(&s0, &s1).unwrap(), 2);
        // exponents differ at component 0
        let s0 = term(vec![(3, q())]);
        let s1 = term(vec![(2, q())]);
        assert_eq!(pair_color(&s0, &s1).unwrap(), 0);
        // coefficients differ at component 1
        let s0 = term(vec![(3, q())]);
        let s1 = term(vec![(3, r())]);
        assert_eq!(pair_color(&s0, &s1).unwrap(), 1);
    }

    #[test]
    fn forward_poset_is_the_reversed_chain() {
        let term = |pairs| OmegaTerm::new(LinearOrder::Rationals, pairs).unwrap();
        let stream = fixed_stream(vec![
            term(vec![(2, q()), (1, r())]),
            term(vec![(2, q())]),
            term(vec![(2, r())]),
        ]);
        let (poset, coloring) = wop_to_ort_forward(stream).unwrap();
        assert_eq!(poset.size(), 6);
        assert!(poset.leq(3, 1));
        assert!(!poset.leq(1, 3));
        assert_eq!(coloring.color(0, 1).unwrap(), 2);
        assert_eq!(coloring.color(1, 2).unwrap(), 1);
        assert_eq!(coloring.color(0, 2).unwrap(), 1);
    }

    #[test]
    fn forward_flags_non_descending_pairs() {
        let term = |pairs| OmegaTerm::new(LinearOrder::Rationals, pairs).unwrap();
        let stream = fixed_stream(vec![term(vec![(2, q())]), term(vec![(2, q()), (1, r())])]);
        let (_p, c) = wop_to_ort_forward(stream).unwrap();
        assert!(matches!(c.color(0, 1), Err(Error::NotDescending(1))));
    }

    #[test]
    fn forward_image_of_generated_instances_is_right_ordered() {
        let inst =
            gen_certified_instance(ProblemTag::WopOmega, 21, &GenParams::default()).unwrap();
        let InstancePayload::WopOmega { stream, .. } = inst.payload() else { unreachable!() };
        let (poset, coloring) = wop_to_ort_forward(stream.clone()).unwrap();
        let report = validate_right_ordered(&poset, &coloring, 200).unwrap();
        assert!(report.is_ok(), "{:?}", report.verdict);
    }

    #[test]
    fn backward_emits_the_planted_slot() {
        let inst =
            gen_certified_instance(ProblemTag::WopOmega, 33, &GenParams::default()).unwrap();
        let InstancePayload::WopOmega { base, stream } = inst.payload() else { unreachable!() };
        let Certificate::Wop { witness, .. } = inst.certificate() else { unreachable!() };
        let homog = {
            let witness = witness.clone();
            MonotoneNatStream::new(move |k| Ok(witness.get(k)?.1))
        };
        let out = wop_to_ort_backward(stream.clone(), homog).unwrap();
        let values = out.prefix(100).unwrap();
        for w in values.windows(2) {
            assert_eq!(
                base.compare(&w[1].0, &w[0].0).unwrap(),
                Ordering::Less,
                "emitted values must strictly descend"
            );
        }
        let sigma = stream.prefix(values.last().unwrap().1 + 1).unwrap();
        let hinted: Vec<(Elem, usize)> =
            values.iter().map(|(v, t)| (v.clone(), *t as usize)).collect();
        assert!(crate::order::is_contained(&hinted, &sigma));
    }

    #[test]
    fn tampered_set_with_even_color_is_rejected() {
        let term = |pairs| OmegaTerm::new(LinearOrder::Rationals, pairs).unwrap();
        // σ₁ is a proper prefix of σ₀, so c(0,1) = |σ₁| = 2, an even color
        let stream = fixed_stream(vec![
            term(vec![(2, q()), (1, r())]),
            term(vec![(2, q())]),
            term(vec![(2, r())]),
        ]);
        let homog = MonotoneNatStream::new(|k| Ok(k));
        let out = wop_to_ort_backward(stream, homog).unwrap();
        assert!(matches!(out.get(0), Err(Error::EvenColor(2))));
    }

    #[test]
    fn disagreeing_later_pair_is_not_homogeneous() {
        let term = |pairs| OmegaTerm::new(LinearOrder::Rationals, pairs).unwrap();
        // c(0,1) = 1 but c(1,2) = 0
        let stream = fixed_stream(vec![
            term(vec![(3, q()), (1, q())]),
            term(vec![(3, r()), (1, q())]),
            term(vec![(2, r())]),
        ]);
        let homog = MonotoneNatStream::new(|k| Ok(k));
        let out = wop_to_ort_backward(stream, homog).unwrap();
        assert_eq!(out.get(0).unwrap().1, 0);
        assert!(matches!(out.get(1), Err(Error::NotHomogeneous(1, 2, 0, 1))));
    }
}
