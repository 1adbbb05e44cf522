use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::adversary::functional::{
    ContinuousFunctional, FuelMeter, MonotoneGuard, Transcript, Verdict,
};
use crate::adversary::Stop;
use crate::order::{rat, rat_to_string, Elem, LexTuple, LinearOrder};
use crate::{Error, Result};

/// H's visible output: how many parallel limit questions it asks. The
/// question descriptions themselves never matter to the duel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpoToken {
    Arity(u32),
}

/// K reads the claimed answer string, then the instance rows.
#[derive(Debug, Clone, PartialEq)]
pub enum KLpoInput {
    Eta(Vec<bool>),
    Row(LexTuple),
}

/// A candidate pair claiming WOP(X↦X²_lex) reduces to finitely many
/// parallel limit questions, over X = Q.
pub struct LexLpoCandidate {
    pub h: ContinuousFunctional<LexTuple, LpoToken>,
    pub k: ContinuousFunctional<KLpoInput, Elem>,
}

/// Largest declared arity the duel will play out (2ⁿ stages).
pub const MAX_ARITY: u32 = 8;

/// Row i of stage j over Q²: ⟨0, 1/(i+1)⟩ at stage 0, ⟨−j, j+1/i⟩ after.
fn stage_row(j: u64, i: u64) -> LexTuple {
    let (hi, lo) = if j == 0 {
        (rat(0, 1), rat(1, i as i64 + 1))
    } else {
        (rat(-(j as i64), 1), rat(j as i64, 1) + rat(1, i as i64))
    };
    LexTuple::new(LinearOrder::Rationals, vec![Elem::Rat(hi), Elem::Rat(lo)])
        .expect("stage rows are valid")
}

/// j + 1/m ↦ (j, m) for integers j ≥ 0, m ≥ 1.
fn tail_shape(q: &BigRational) -> Option<(u64, u64)> {
    if q.is_negative() || q.numer().is_zero() {
        return None;
    }
    let whole = q.floor();
    let frac = q - &whole;
    if frac.numer().is_zero() {
        // an integer w > 0 is (w−1) + 1/1
        let w: u64 = whole.numer().try_into().ok()?;
        (w > 0).then(|| (w - 1, 1))
    } else if frac.numer().is_one() {
        let j: u64 = whole.numer().try_into().ok()?;
        let m: u64 = frac.denom().try_into().ok()?;
        Some((j, m))
    } else {
        None
    }
}

/// Which stage a rational can be drawn from in the constructed family, if
/// any: first components are 0 and −j, second components 1/(i+1) and j+1/i.
fn value_stage(q: &BigRational, final_stage: u64) -> Option<u64> {
    if q.is_negative() {
        if !q.denom().is_one() {
            return None;
        }
        let j: u64 = (-q).numer().try_into().ok()?;
        (j <= final_stage).then_some(j)
    } else if q.numer().is_zero() {
        Some(0)
    } else {
        let (j, _m) = tail_shape(q)?;
        (j <= final_stage).then_some(j)
    }
}

struct Game<'a> {
    cand: &'a LexLpoCandidate,
    rows: Vec<LexTuple>,
    stage: u64,
    in_stage: u64,
    fuel: FuelMeter,
    transcript: Transcript,
    h_guard: MonotoneGuard<LpoToken>,
}

type Step<T> = std::result::Result<T, Stop>;

impl<'a> Game<'a> {
    fn push_row(&mut self) -> Step<()> {
        if !self.fuel.spend() {
            return Err(Stop::Verdict(Verdict::BudgetExhausted));
        }
        let i = if self.stage == 0 { self.in_stage } else { self.in_stage + 1 };
        let row = stage_row(self.stage, i);
        self.transcript.log(
            "ADV",
            format!("row {}: {row} (stage {})", self.rows.len(), self.stage),
            String::new(),
            self.fuel.remaining(),
        );
        self.rows.push(row);
        self.in_stage += 1;
        Ok(())
    }

    fn open_stage(&mut self) -> Step<()> {
        self.stage += 1;
        self.in_stage = 0;
        self.push_row()
    }

    /// Feed stage-0 rows until H's first component converges to an arity.
    fn await_arity(&mut self) -> Step<u32> {
        loop {
            if !self.fuel.spend() {
                return Err(Stop::Verdict(Verdict::BudgetExhausted));
            }
            let tokens = match self.h_guard.observe(self.cand.h.apply(&self.rows)) {
                Ok(t) => t.to_vec(),
                Err(reason) => return Err(Stop::Verdict(Verdict::CandidateIllFormed { reason })),
            };
            self.transcript.log(
                "H",
                format!("{} rows", self.rows.len()),
                format!("{} tokens", tokens.len()),
                self.fuel.remaining(),
            );
            if let Some(LpoToken::Arity(n)) = tokens.first() {
                if *n > MAX_ARITY {
                    return Err(Stop::Error(Error::ExponentOverflow {
                        got: *n,
                        max: MAX_ARITY,
                    }));
                }
                return Ok(*n);
            }
            self.push_row()?;
        }
    }

    /// Keep observing H while waiting on K, so translation-side
    /// retractions surface even when K stays silent.
    fn check_h(&mut self) -> Step<()> {
        if !self.fuel.spend() {
            return Err(Stop::Verdict(Verdict::BudgetExhausted));
        }
        if let Err(reason) = self.h_guard.observe(self.cand.h.apply(&self.rows)) {
            return Err(Stop::Verdict(Verdict::CandidateIllFormed { reason }));
        }
        Ok(())
    }

    fn await_commitment(&mut self, eta: &[bool]) -> Step<Vec<Elem>> {
        let mut guard: MonotoneGuard<Elem> = MonotoneGuard::new();
        let mut confirmed = false;
        let mut input = Vec::with_capacity(self.rows.len() + 8);
        input.push(KLpoInput::Eta(eta.to_vec()));
        input.extend(self.rows.iter().cloned().map(KLpoInput::Row));
        loop {
            self.check_h()?;
            if !self.fuel.spend() {
                return Err(Stop::Verdict(Verdict::BudgetExhausted));
            }
            let before = guard.current().len();
            let values = match guard.observe(self.cand.k.apply(&input)) {
                Ok(v) => v.to_vec(),
                Err(reason) => return Err(Stop::Verdict(Verdict::CandidateIllFormed { reason })),
            };
            self.transcript.log(
                "K",
                format!("eta {:?}, {} rows", eta, self.rows.len()),
                format!("{} new values", values.len() - before),
                self.fuel.remaining(),
            );
            if !values.is_empty() {
                if confirmed {
                    return Ok(values);
                }
                confirmed = true;
            }
            self.push_row()?;
            input.push(KLpoInput::Row(self.rows.last().expect("just pushed").clone()));
        }
    }

    /// A committed prefix is still plausible for the limit sequence iff it
    /// strictly descends, every value occurs in the constructed family with
    /// non-decreasing stages, and the last value leaves room above the
    /// final chain ⟨2ⁿ + 1/m⟩.
    fn commitment_defect(&self, values: &[Elem], final_stage: u64) -> Option<String> {
        if values.is_empty() {
            return Some("empty committed solution".into());
        }
        let order = LinearOrder::Rationals;
        let mut last: Option<&Elem> = None;
        for v in values {
            if let Some(prev) = last {
                match order.compare(v, prev) {
                    Ok(std::cmp::Ordering::Less) => {}
                    _ => return Some(format!("committed values do not strictly descend at {v}")),
                }
            }
            last = Some(v);
        }
        // family membership with non-decreasing stage assignment
        let mut min_stage = 0u64;
        for v in values {
            let Elem::Rat(q) = v else { return Some(format!("{v} is not a rational")) };
            match value_stage(q, final_stage) {
                Some(s) if s >= min_stage => min_stage = s,
                Some(_) => {
                    return Some(format!(
                        "value {v} would have to come from an earlier stage than its predecessor"
                    ))
                }
                None => {
                    return Some(format!("value {v} never occurs in the constructed sequence"))
                }
            }
        }
        // extendability over the final chain 2ⁿ + 1/m
        let threshold = rat(final_stage as i64, 1);
        if let Some(Elem::Rat(q)) = values.last() {
            if q <= &threshold {
                return Some(format!(
                    "last committed value {} cannot dominate the final chain {}+1/m",
                    rat_to_string(q),
                    final_stage
                ));
            }
        }
        None
    }

    fn run(&mut self) -> Step<Verdict> {
        self.push_row()?;
        let n = self.await_arity()?;
        let stages = 1u64 << n;
        let mut commitments = Vec::with_capacity(stages as usize);
        for code in 0..stages {
            let eta: Vec<bool> = (0..n).map(|b| (code >> b) & 1 == 1).collect();
            let committed = self.await_commitment(&eta)?;
            commitments.push((eta, committed));
            self.open_stage()?;
        }
        // every answer string has been played; the final stage pins the
        // solution family, so if no commitment survives, the candidate is
        // wrong no matter which answer was true
        let defects: Vec<Option<String>> = commitments
            .iter()
            .map(|(_, c)| self.commitment_defect(c, stages))
            .collect();
        if defects.iter().all(|d| d.is_some()) {
            let (_, committed) = &commitments[0];
            let detail = defects
                .iter()
                .enumerate()
                .map(|(i, d)| format!("eta {i}: {}", d.as_ref().expect("all defective")))
                .collect::<Vec<_>>()
                .join("; ");
            return Ok(Verdict::RefutationFound {
                transcript: std::mem::take(&mut self.transcript),
                claimed_output: committed.iter().map(|v| v.to_string()).collect(),
                violated_contract: format!(
                    "every answer string led to a committed output invalid for the limit: {detail}"
                ),
            });
        }
        // some commitment remains plausible; play on until fuel runs out
        loop {
            self.push_row()?;
        }
    }
}

/// Play the 2ⁿ-stage diagonalization against a candidate
/// WOP(X↦X²_lex) ≤ (LPO′)* pair.
pub fn adversary_lex_lpo(cand: &LexLpoCandidate, fuel: u64) -> Result<Verdict> {
    let mut game = Game {
        cand,
        rows: Vec::new(),
        stage: 0,
        in_stage: 0,
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

    #[test]
    fn rows_descend_across_stage_boundaries() {
        let pairs = [
            (stage_row(0, 0), stage_row(0, 3)),
            (stage_row(0, 3), stage_row(1, 1)),
            (stage_row(1, 1), stage_row(1, 2)),
            (stage_row(1, 9), stage_row(2, 1)),
        ];
        for (a, b) in &pairs {
            assert_eq!(b.cmp_lex(a).unwrap(), std::cmp::Ordering::Less, "{b} < {a}");
        }
    }

    #[test]
    fn tail_shapes() {
        assert_eq!(tail_shape(&(rat(3, 1) + rat(1, 7))), Some((3, 7)));
        assert_eq!(tail_shape(&rat(4, 1)), Some((3, 1)));
        assert_eq!(tail_shape(&rat(7, 2)), None);
        assert_eq!(tail_shape(&rat(-2, 1)), None);
    }
}
