use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::catalog::{DescendingStream, EnumerationStream};
use crate::order::{Elem, LexTuple, LinearOrder};
use crate::reset::{CycleStep, ResetState};
use crate::{Error, Result};

fn first_primes(k: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while primes.len() < k {
        if primes.iter().all(|p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

struct TcnStage {
    row: Vec<Elem>,
    guesses: Vec<u64>,
    update_mask: u32,
    cycle: CycleStep,
}

/// Staged encoding of n enumerations into a descending sequence over
/// [0,∞]^{2^n}: guesses are tracked by running minima, update sets feed the
/// reset/cycle bookkeeping, and the single updated column at each stage gets
/// count + 1/(p₁^{g₁}⋯pₙ^{gₙ}·p_{n+1}^i).
pub struct TcnLexEngine {
    n: usize,
    width: usize,
    budget: u64,
    enums: Vec<EnumerationStream>,
    primes: Vec<u64>,
    state: Mutex<TcnState>,
}

struct TcnState {
    reset: ResetState,
    guesses: Vec<u64>,
    seen: Vec<BTreeSet<u64>>,
    counts: Vec<u64>,
    peak: u64,
    stages: Vec<TcnStage>,
}

impl TcnLexEngine {
    pub fn new(enums: Vec<EnumerationStream>, budget: u64) -> Result<Arc<Self>> {
        let n = enums.len();
        if n == 0 || n > 16 {
            return Err(Error::ParamsOutOfRange(format!("{n} enumerations")));
        }
        let width = 1usize << n;
        let reset = ResetState::new(n as u32);
        // count_j(0) = 2^n − |A_j| in the popcount-then-value subset order
        let counts: Vec<u64> = (1..=width)
            .map(|j| (width as u64) - u64::from(reset.mask_of_j(j).count_ones()))
            .collect();
        Ok(Arc::new(TcnLexEngine {
            n,
            width,
            budget,
            enums,
            primes: first_primes(n + 1),
            state: Mutex::new(TcnState {
                reset,
                guesses: vec![0; n],
                seen: vec![BTreeSet::new(); n],
                counts,
                peak: 0,
                stages: Vec::new(),
            }),
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn ensure(&self, upto: u64) -> Result<()> {
        if upto >= self.budget {
            return Err(Error::StageBudgetExceeded(self.budget));
        }
        let mut st = self.state.lock().unwrap();
        while (st.stages.len() as u64) <= upto {
            let i = st.stages.len() as u64;

            // update set: coordinates whose pending guess was just enumerated
            let mut mask = 0u32;
            let mut enumerated = Vec::with_capacity(self.n);
            for m in 0..self.n {
                enumerated.push(self.enums[m].value(i));
            }
            for (m, &v) in enumerated.iter().enumerate() {
                if v == st.guesses[m] {
                    mask |= 1 << m;
                }
            }
            // g_m(i) = min(N − ran(e_m ↾ {0..i}))
            for (m, &v) in enumerated.iter().enumerate() {
                st.seen[m].insert(v);
                while st.seen[m].contains(&st.guesses[m]) {
                    let g = st.guesses[m];
                    st.guesses[m] = g + 1;
                }
            }

            let (next_reset, cycle) = st.reset.step(mask);
            st.reset = next_reset;
            let j_i = cycle.j;

            // value for the updated column
            let mut denom = BigUint::one();
            for (m, &g) in st.guesses.iter().enumerate() {
                denom *= BigUint::from(self.primes[m]).pow(g as u32);
            }
            denom *= BigUint::from(self.primes[self.n]).pow(i as u32);
            let fresh = BigRational::from(BigInt::from(st.counts[j_i - 1]))
                + BigRational::new(BigInt::one(), BigInt::from(denom));

            let mut row = Vec::with_capacity(self.width);
            for j in 1..=self.width {
                let value = if j > j_i {
                    if i == 0 {
                        Elem::Infinity
                    } else {
                        st.stages[i as usize - 1].row[j - 1].clone()
                    }
                } else if j == j_i {
                    Elem::Rat(fresh.clone())
                } else {
                    Elem::Infinity
                };
                row.push(value);
            }

            // count updates for the next stage
            st.peak = st.peak.max(st.counts[j_i - 1]);
            let v_mask = cycle.v_mask;
            for j in 1..=self.width {
                let a_j = st.reset.mask_of_j(j);
                if a_j != v_mask && a_j & v_mask == a_j {
                    let gained = u64::from((v_mask & !a_j).count_ones());
                    st.counts[j - 1] = st.peak + gained;
                }
            }

            let guesses = st.guesses.clone();
            st.stages.push(TcnStage { row, guesses, update_mask: mask, cycle });
        }
        Ok(())
    }

    /// Row σ_i = (a_{2^n}, …, a_1).
    pub fn row(&self, i: u64) -> Result<LexTuple> {
        self.ensure(i)?;
        let st = self.state.lock().unwrap();
        let mut entries = st.stages[i as usize].row.clone();
        entries.reverse();
        LexTuple::new(LinearOrder::ExtendedNonnegRationals, entries)
    }

    pub fn guesses_at(&self, i: u64) -> Result<Vec<u64>> {
        self.ensure(i)?;
        Ok(self.state.lock().unwrap().stages[i as usize].guesses.clone())
    }

    pub fn cycle_at(&self, i: u64) -> Result<CycleStep> {
        self.ensure(i)?;
        Ok(self.state.lock().unwrap().stages[i as usize].cycle)
    }

    pub fn update_mask_at(&self, i: u64) -> Result<u32> {
        self.ensure(i)?;
        Ok(self.state.lock().unwrap().stages[i as usize].update_mask)
    }

    /// Value of the updated column at stage i (always finite).
    pub fn stage_value(&self, i: u64) -> Result<BigRational> {
        self.ensure(i)?;
        let st = self.state.lock().unwrap();
        let j = st.stages[i as usize].cycle.j;
        match &st.stages[i as usize].row[j - 1] {
            Elem::Rat(q) => Ok(q.clone()),
            other => Err(Error::MalformedValue(other.to_string())),
        }
    }

    pub fn subset_index_of_mask(&self, mask: u32) -> usize {
        self.state.lock().unwrap().reset.j_of_mask(mask)
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }
}

/// Forward translation: n enumerations into the descending width-2ⁿ tuple
/// stream over the extended nonnegative rationals.
pub fn tcn_to_lex_forward(
    enums: Vec<EnumerationStream>,
    budget: u64,
) -> Result<(DescendingStream<LexTuple>, Arc<TcnLexEngine>)> {
    let engine = TcnLexEngine::new(enums, budget)?;
    let stream = {
        let engine = Arc::clone(&engine);
        DescendingStream::new(move |i| engine.row(i))
    };
    Ok((stream, engine))
}

/// Decode one finite solution value: c = ⌈a⌉ − 1, D = 1/(a − c), then trial
/// division of D over p₁,…,p_{n+1}; the exponents of p₁,…,pₙ are the
/// recovered guesses.
pub fn decode_tcn_value(n: usize, a: &BigRational) -> Result<Vec<u64>> {
    decode_impl(n, a, false)
}

fn decode_impl(n: usize, a: &BigRational, wrong_base: bool) -> Result<Vec<u64>> {
    if a.is_negative() {
        return Err(Error::MalformedValue(crate::order::rat_to_string(a)));
    }
    let c = a.ceil() - BigRational::one();
    let frac = a - &c;
    if !frac.numer().is_one() {
        return Err(Error::NonUnitFraction(crate::order::rat_to_string(&frac)));
    }
    let mut d: BigUint = frac
        .denom()
        .to_biguint()
        .ok_or_else(|| Error::MalformedValue(crate::order::rat_to_string(a)))?;
    let primes = first_primes(n + 1);
    let mut exponents = vec![0u64; n + 1];
    for (idx, &p) in primes.iter().enumerate() {
        let p = BigUint::from(p);
        while (&d % &p).is_zero() {
            d /= &p;
            exponents[idx] += 1;
        }
    }
    if !d.is_one() {
        return Err(Error::MalformedValue(format!(
            "denominator has a prime factor outside p1..p{}",
            n + 1
        )));
    }
    if wrong_base {
        Ok(exponents[1..=n].to_vec())
    } else {
        Ok(exponents[..n].to_vec())
    }
}

/// Pull a TC_N answer out of a solution stream for the forward image: skip
/// the at-most-one leading ∞, take the first finite value, decode it.
pub fn tcn_to_lex_backward(n: usize, x: &crate::catalog::WitnessStream) -> Result<Vec<u64>> {
    backward_impl(n, x, false)
}

pub(crate) fn tcn_to_lex_backward_wrong_base(
    n: usize,
    x: &crate::catalog::WitnessStream,
) -> Result<Vec<u64>> {
    backward_impl(n, x, true)
}

fn backward_impl(n: usize, x: &crate::catalog::WitnessStream, wrong_base: bool) -> Result<Vec<u64>> {
    for k in 0..8 {
        let (value, _) = x.get(k)?;
        match value {
            Elem::Infinity => continue,
            Elem::Rat(a) => return decode_impl(n, &a, wrong_base),
            other => return Err(Error::MalformedValue(other.to_string())),
        }
    }
    Err(Error::MalformedValue("no finite term among the first 8".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::validate_descending;
    use crate::order::rat;

    fn fixed_enum(values: Vec<u64>, then: u64) -> EnumerationStream {
        EnumerationStream::new(move |i| {
            values.get(i as usize).copied().unwrap_or(then + i)
        })
    }

    #[test]
    fn stage_zero_with_missed_guess() {
        // e₁ enumerates 5 first: U₀ = ∅, g₁(0) = 0, a₁⁰ = 2 + 1/1 = 3, a₂⁰ = ∞
        let e = fixed_enum(vec![5], 100);
        let engine = TcnLexEngine::new(vec![e], 50).unwrap();
        assert_eq!(engine.update_mask_at(0).unwrap(), 0);
        assert_eq!(engine.guesses_at(0).unwrap(), vec![0]);
        assert_eq!(engine.cycle_at(0).unwrap().j, 1);
        assert_eq!(engine.stage_value(0).unwrap(), rat(3, 1));
        let row = engine.row(0).unwrap();
        assert_eq!(row.to_string(), "(inf,3/1)");
    }

    #[test]
    fn stage_zero_with_hit_guess() {
        // e₁ enumerates 0 first: U₀ = {1}, g₁(0) = 1, a₂⁰ = 1 + 1/2
        let e = fixed_enum(vec![0], 100);
        let engine = TcnLexEngine::new(vec![e], 50).unwrap();
        assert_eq!(engine.update_mask_at(0).unwrap(), 0b1);
        assert_eq!(engine.guesses_at(0).unwrap(), vec![1]);
        assert_eq!(engine.cycle_at(0).unwrap().j, 2);
        assert_eq!(engine.stage_value(0).unwrap(), rat(3, 2));
        assert_eq!(engine.row(0).unwrap().to_string(), "(3/2,inf)");
    }

    #[test]
    fn generated_instances_descend_to_budget() {
        for n in 1..=3u32 {
            let inst = crate::catalog::gen_certified_instance(
                crate::catalog::ProblemTag::Tcn,
                40 + u64::from(n),
                &crate::catalog::GenParams { n, ..Default::default() },
            )
            .unwrap();
            let crate::catalog::InstancePayload::Tcn(enums) = inst.payload() else {
                unreachable!()
            };
            let (stream, _engine) = tcn_to_lex_forward(enums.clone(), 200).unwrap();
            let report = validate_descending(&stream, 120).unwrap();
            assert!(report.is_ok(), "n={n}: {:?}", report.verdict);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let e = fixed_enum(vec![], 0);
        let engine = TcnLexEngine::new(vec![e], 10).unwrap();
        assert!(matches!(engine.row(10), Err(Error::StageBudgetExceeded(10))));
    }

    #[test]
    fn decode_examples() {
        // a = 3 → c = 2, D = 1, all guesses 0
        assert_eq!(decode_tcn_value(1, &rat(3, 1)).unwrap(), vec![0]);
        // a = 1 + 1/2 → D = 2 = p₁ → g₁ = 1
        assert_eq!(decode_tcn_value(1, &rat(3, 2)).unwrap(), vec![1]);
        // a = c + 1/(2³·3²) → g₁ = 3, stage factor 3² discarded
        let a = rat(4, 1) + rat(1, 72);
        assert_eq!(decode_tcn_value(1, &a).unwrap(), vec![3]);
        // prime outside the alphabet
        let bad = rat(1, 11);
        assert!(matches!(
            decode_tcn_value(1, &bad),
            Err(Error::MalformedValue(_))
        ));
        // non-unit fraction
        assert!(matches!(
            decode_tcn_value(1, &rat(7, 5)),
            Err(Error::NonUnitFraction(_))
        ));
    }

    #[test]
    fn encode_decode_inverse_along_a_run() {
        let inst = crate::catalog::gen_certified_instance(
            crate::catalog::ProblemTag::Tcn,
            77,
            &crate::catalog::GenParams { n: 2, ..Default::default() },
        )
        .unwrap();
        let crate::catalog::InstancePayload::Tcn(enums) = inst.payload() else { unreachable!() };
        let engine = TcnLexEngine::new(enums.clone(), 200).unwrap();
        for i in 0..60 {
            let value = engine.stage_value(i).unwrap();
            let decoded = decode_tcn_value(2, &value).unwrap();
            assert_eq!(decoded, engine.guesses_at(i).unwrap(), "stage {i}");
        }
    }
}
