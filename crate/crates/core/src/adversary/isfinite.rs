use std::cmp::Ordering;

use crate::adversary::functional::{
    BiContinuousFunctional, ContinuousFunctional, FuelMeter, MonotoneGuard, Transcript, Verdict,
};
use crate::adversary::Stop;
use crate::order::{Elem, LinearOrder, OmegaTerm};
use crate::Result;

/// H's output: the base order it works over, then instance terms.
#[derive(Debug, Clone, PartialEq)]
pub enum IsfToken {
    Base(LinearOrder),
    Term(OmegaTerm),
}

/// A Sierpiński commitment: at most one token per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SierpToken {
    Top,
    Bot,
}

/// A candidate pair claiming IsFinite ≤ WOP(X↦X^ω): H maps binary strings
/// to descending instances, K maps (solution prefix, string prefix) to a
/// Sierpiński answer.
pub struct IsfiniteCandidate {
    pub h: ContinuousFunctional<bool, IsfToken>,
    pub k: BiContinuousFunctional<Elem, bool, SierpToken>,
}

/// Greedy descending-contained miner over H's emitted terms. Containment
/// hints are the rows the values were taken from, non-decreasing by
/// construction.
struct Miner {
    next_row: usize,
    current: Option<Elem>,
    mined: Vec<(Elem, u64)>,
    skip_first: bool,
    skipped: bool,
}

impl Miner {
    fn new(skip_first: bool) -> Self {
        Miner { next_row: 0, current: None, mined: Vec::new(), skip_first, skipped: false }
    }

    fn values(&self) -> Vec<Elem> {
        self.mined.iter().map(|(v, _)| v.clone()).collect()
    }

    fn try_extend(&mut self, terms: &[OmegaTerm], base: &LinearOrder) -> Result<bool> {
        while self.next_row < terms.len() {
            let term = &terms[self.next_row];
            for (_, coeff) in term.pairs() {
                let descends = match &self.current {
                    None => true,
                    Some(cur) => base.compare(coeff, cur)? == Ordering::Less,
                };
                if descends {
                    if self.skip_first && !self.skipped {
                        self.skipped = true;
                        continue;
                    }
                    self.current = Some(coeff.clone());
                    self.mined.push((coeff.clone(), self.next_row as u64));
                    return Ok(true);
                }
            }
            self.next_row += 1;
        }
        Ok(false)
    }
}

struct Game<'a> {
    cand: &'a IsfiniteCandidate,
    bits: Vec<bool>,
    fuel: FuelMeter,
    transcript: Transcript,
    h_guard: MonotoneGuard<IsfToken>,
}

type Step<T> = std::result::Result<T, Stop>;

/// Blocks to record before probing the infinitely-many-ones limit.
const BLOCKS: usize = 3;

impl<'a> Game<'a> {
    fn push_bit(&mut self, bit: bool) -> Step<()> {
        if !self.fuel.spend() {
            return Err(Stop::Verdict(Verdict::BudgetExhausted));
        }
        self.transcript.log(
            "ADV",
            format!("bit {}: {}", self.bits.len(), u8::from(bit)),
            String::new(),
            self.fuel.remaining(),
        );
        self.bits.push(bit);
        Ok(())
    }

    fn query_h(&mut self) -> Step<(LinearOrder, Vec<OmegaTerm>)> {
        if !self.fuel.spend() {
            return Err(Stop::Verdict(Verdict::BudgetExhausted));
        }
        let tokens = match self.h_guard.observe(self.cand.h.apply(&self.bits)) {
            Ok(t) => t.to_vec(),
            Err(reason) => return Err(Stop::Verdict(Verdict::CandidateIllFormed { reason })),
        };
        self.transcript.log(
            "H",
            format!("{} bits", self.bits.len()),
            format!("{} tokens", tokens.len()),
            self.fuel.remaining(),
        );
        let Some(IsfToken::Base(base)) = tokens.first() else {
            if tokens.is_empty() {
                return Ok((LinearOrder::Rationals, Vec::new()));
            }
            return Err(Stop::Verdict(Verdict::CandidateIllFormed {
                reason: "H emitted a term before declaring its base order".into(),
            }));
        };
        let mut terms = Vec::with_capacity(tokens.len() - 1);
        for t in &tokens[1..] {
            match t {
                IsfToken::Term(term) if term.base() == base => terms.push(term.clone()),
                IsfToken::Term(_) => {
                    return Err(Stop::Verdict(Verdict::CandidateIllFormed {
                        reason: "H emitted a term over a different base order".into(),
                    }))
                }
                IsfToken::Base(_) => {
                    return Err(Stop::Verdict(Verdict::CandidateIllFormed {
                        reason: "H re-declared its base order".into(),
                    }))
                }
            }
        }
        Ok((base.clone(), terms))
    }

    /// One K query plus, on a first answer, a confirmation query with one
    /// more input bit; an answer that moves is a retraction.
    fn query_k(
        &mut self,
        guard: &mut MonotoneGuard<SierpToken>,
        solution: &[Elem],
    ) -> Step<Option<SierpToken>> {
        for round in 0..2 {
            if !self.fuel.spend() {
                return Err(Stop::Verdict(Verdict::BudgetExhausted));
            }
            let answer = match guard.observe(self.cand.k.apply(solution, &self.bits)) {
                Ok(tokens) => match tokens {
                    [] => None,
                    [one] => Some(*one),
                    _ => {
                        return Err(Stop::Verdict(Verdict::CandidateIllFormed {
                            reason: "Sierpiński output must be a single commitment".into(),
                        }))
                    }
                },
                Err(reason) => return Err(Stop::Verdict(Verdict::CandidateIllFormed { reason })),
            };
            self.transcript.log(
                "K",
                format!("{} solution values, {} bits", solution.len(), self.bits.len()),
                format!("{answer:?}"),
                self.fuel.remaining(),
            );
            match (round, answer) {
                (0, None) => return Ok(None),
                (0, Some(_)) => self.push_bit(false)?,
                (1, answer) => return Ok(answer),
                _ => unreachable!(),
            }
        }
        unreachable!()
    }

    fn refute(&mut self, claimed: &[(Elem, u64)], contract: String) -> Verdict {
        Verdict::RefutationFound {
            transcript: std::mem::take(&mut self.transcript),
            claimed_output: claimed.iter().map(|(v, t)| format!("{v}@{t}")).collect(),
            violated_contract: contract,
        }
    }

    fn run(&mut self) -> Step<Verdict> {
        let mut miner = Miner::new(false);
        let mut blocks: Vec<Vec<(Elem, u64)>> = Vec::new();
        let mut base;

        // block loop: grow zeros until K commits on the current string
        for block in 0..BLOCKS {
            let mut guard: MonotoneGuard<SierpToken> = MonotoneGuard::new();
            loop {
                self.push_bit(false)?;
                let (b, terms) = self.query_h()?;
                base = b;
                miner.try_extend(&terms, &base).map_err(Stop::Error)?;
                if miner.mined.is_empty() {
                    continue;
                }
                match self.query_k(&mut guard, &miner.values())? {
                    None => continue,
                    Some(SierpToken::Top) => {
                        self.transcript.log(
                            "ADV",
                            format!("block {block} recorded"),
                            format!("{} solution values", miner.mined.len()),
                            self.fuel.remaining(),
                        );
                        blocks.push(miner.mined.clone());
                        self.push_bit(true)?;
                        break;
                    }
                    Some(SierpToken::Bot) => {
                        // the current string extended by zeros has finitely
                        // many ones, so the answer had to be ⊤
                        let contract = match blocks.last() {
                            None => "K committed to ⊥ on the all-zeros string, whose answer is ⊤"
                                .to_string(),
                            Some(y) => self.splice_contract(&base, &miner, y)?,
                        };
                        return Ok(self.refute(&miner.mined.clone(), contract));
                    }
                }
            }
        }

        // probe the limit with infinitely many ones: an independent miner
        // so the junction comparison against the recorded block is honest
        let recorded = blocks.last().expect("BLOCKS >= 1").clone();
        let y_last = recorded.last().expect("recorded blocks are nonempty").0.clone();
        let mut probe = Miner::new(true);
        let mut guard: MonotoneGuard<SierpToken> = MonotoneGuard::new();
        loop {
            self.push_bit(false)?;
            let (b, terms) = self.query_h()?;
            base = b;
            probe.try_extend(&terms, &base).map_err(Stop::Error)?;
            let below_junction = match &probe.current {
                Some(cur) => base.compare(cur, &y_last).map_err(Stop::Error)? == Ordering::Less,
                None => false,
            };
            if !below_junction {
                continue;
            }
            match self.query_k(&mut guard, &probe.values())? {
                None => {
                    // keep alternating ones in so the construction stays a
                    // genuinely infinite-ones limit
                    if self.bits.len() % 8 == 0 {
                        self.push_bit(true)?;
                    }
                }
                Some(SierpToken::Top) => {
                    let contract = format!(
                        "K emitted ⊤ while reading a prefix of the limit string with \
                         infinitely many ones; splicing its probe solution below the \
                         recorded value {} keeps the prefix a valid solution, so the \
                         answer had to stay ⊥",
                        y_last
                    );
                    return Ok(self.refute(&probe.mined.clone(), contract));
                }
                Some(SierpToken::Bot) => {
                    let contract = self.splice_contract(&base, &probe, &recorded)?;
                    return Ok(self.refute(&probe.mined.clone(), contract));
                }
            }
        }
    }

    /// The case split on the junction comparison x_m vs the last recorded
    /// block value, mirroring the two splice branches.
    fn splice_contract(
        &self,
        base: &LinearOrder,
        miner: &Miner,
        recorded: &[(Elem, u64)],
    ) -> Step<String> {
        let x_m = miner.mined.last().expect("bot commitments see mined values").0.clone();
        let y_m = recorded.last().expect("recorded blocks are nonempty").0.clone();
        let cmp = base.compare(&x_m, &y_m).map_err(Stop::Error)?;
        Ok(if cmp != Ordering::Less {
            format!(
                "K committed to ⊥, but its solution prefix ending at {x_m} extends by the \
                 recorded tail below {y_m} into a solution of the finitely-many-ones string, \
                 whose answer is ⊤"
            )
        } else {
            format!(
                "K committed to ⊥ after ⊤ stood on the recorded prefix ending at {y_m}; \
                 splicing the probe tail below {x_m} extends that prefix into a solution of \
                 the infinitely-many-ones limit, whose answer is ⊥ — the ⊤ was wrong"
            )
        })
    }
}

/// Play the block construction against a candidate IsFinite ≤ WOP(X↦X^ω)
/// pair.
pub fn adversary_isfinite_wop(cand: &IsfiniteCandidate, fuel: u64) -> Result<Verdict> {
    let mut game = Game {
        cand,
        bits: Vec::new(),
        fuel: FuelMeter::new(fuel),
        transcript: Transcript::new(),
        h_guard: MonotoneGuard::new(),
    };
    match game.run() {
        Ok(v) => Ok(v),
        Err(Stop::Verdict(v)) => Ok(v),
        Err(Stop::Error(e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::rat;

    #[test]
    fn miner_descends_through_terms() {
        let base = LinearOrder::Rationals;
        let terms: Vec<OmegaTerm> = (0..6)
            .map(|i| {
                OmegaTerm::new(base.clone(), vec![(1, Elem::Rat(rat(10 - i, 1)))]).unwrap()
            })
            .collect();
        let mut m = Miner::new(false);
        for _ in 0..4 {
            assert!(m.try_extend(&terms, &base).unwrap());
        }
        let vals: Vec<String> = m.values().iter().map(|v| v.to_string()).collect();
        assert_eq!(vals, vec!["10/1", "9/1", "8/1", "7/1"]);
        assert!(m.mined.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn skipping_miner_diverges() {
        let base = LinearOrder::Rationals;
        let terms: Vec<OmegaTerm> = (0..6)
            .map(|i| {
                OmegaTerm::new(base.clone(), vec![(1, Elem::Rat(rat(10 - i, 1)))]).unwrap()
            })
            .collect();
        let mut m = Miner::new(true);
        assert!(m.try_extend(&terms, &base).unwrap());
        assert_eq!(m.values()[0].to_string(), "9/1");
    }
}
