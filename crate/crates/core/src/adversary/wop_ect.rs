use num_traits::One;

use crate::adversary::functional::{
    ContinuousFunctional, FuelMeter, MonotoneGuard, Transcript, Verdict,
};
use crate::adversary::Stop;
use crate::order::{rat, Elem, LexTuple, LinearOrder};
use crate::Result;

/// Output alphabet of an emitted ECT instance: the color count, then one
/// color per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EctToken {
    Arity(usize),
    Color(usize),
}

/// K reads the claimed bound, then the instance rows.
#[derive(Debug, Clone, PartialEq)]
pub enum KEctInput {
    Bound(u64),
    Row(LexTuple),
}

/// A candidate pair claiming WOP(X↦X²_lex) ≤ ECT over X = 2 ×_lex Q.
pub struct WopEctCandidate {
    pub h: ContinuousFunctional<LexTuple, EctToken>,
    pub k: ContinuousFunctional<KEctInput, Elem>,
}

/// The base order 2 ×_lex Q the staged sequence lives over.
pub fn two_q_order() -> LinearOrder {
    LinearOrder::LexProduct(vec![LinearOrder::FiniteChain(2), LinearOrder::Rationals])
}

fn x_elem(bit: u64, num: i64, den: i64) -> Elem {
    Elem::Tuple(vec![Elem::Nat(bit), Elem::Rat(rat(num, den))])
}

/// Row i of stage j: ⟨(1,1),(0,1/(i+1))⟩ at stage 0, ⟨(1,1/(j+1)),(0,j+1/i)⟩
/// afterwards (i ≥ 1).
fn stage_row(j: u64, i: u64) -> LexTuple {
    let (hi, lo) = if j == 0 {
        (x_elem(1, 1, 1), x_elem(0, 1, i as i64 + 1))
    } else {
        (
            x_elem(1, 1, j as i64 + 1),
            Elem::Tuple(vec![
                Elem::Nat(0),
                Elem::Rat(rat(j as i64, 1) + rat(1, i as i64)),
            ]),
        )
    };
    LexTuple::new(two_q_order(), vec![hi, lo]).expect("stage rows are valid")
}

/// (1, 1/(l+1)) ↦ l; everything else is not a value of the limit chain.
fn chain_index(v: &Elem) -> Option<u64> {
    let Elem::Tuple(parts) = v else { return None };
    let [Elem::Nat(1), Elem::Rat(q)] = parts.as_slice() else { return None };
    if !q.numer().is_one() {
        return None;
    }
    let denom: u64 = q.denom().try_into().ok()?;
    Some(denom - 1)
}

/// Why a committed prefix cannot extend to a solution of the limit
/// sequence, or None when it stays plausible.
fn commitment_defect(values: &[Elem]) -> Option<String> {
    if values.is_empty() {
        return Some("empty committed solution".into());
    }
    let mut last: Option<u64> = None;
    for v in values {
        let Some(l) = chain_index(v) else {
            return Some(format!(
                "value {v} is outside the (1,1/m) chain that eventually carries all solutions"
            ));
        };
        if let Some(prev) = last {
            if l <= prev {
                return Some(format!("committed values do not strictly descend at {v}"));
            }
        }
        last = Some(l);
    }
    None
}

struct Game<'a> {
    cand: &'a WopEctCandidate,
    rows: Vec<LexTuple>,
    stage: u64,
    in_stage: u64,
    fuel: FuelMeter,
    transcript: Transcript,
    h_guard: MonotoneGuard<EctToken>,
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

    /// Query H and return (arity, colors) parsed from its output prefix.
    fn query_h(&mut self) -> Step<(Option<usize>, Vec<usize>)> {
        if !self.fuel.spend() {
            return Err(Stop::Verdict(Verdict::BudgetExhausted));
        }
        let before = self.h_guard.current().len();
        let response = self.cand.h.apply(&self.rows);
        let tokens = match self.h_guard.observe(response) {
            Ok(t) => t.to_vec(),
            Err(reason) => return Err(Stop::Verdict(Verdict::CandidateIllFormed { reason })),
        };
        self.transcript.log(
            "H",
            format!("{} rows", self.rows.len()),
            format!("{} new tokens", tokens.len() - before),
            self.fuel.remaining(),
        );
        let mut arity = None;
        let mut colors = Vec::new();
        for (idx, t) in tokens.iter().enumerate() {
            match (idx, t) {
                (0, EctToken::Arity(n)) => arity = Some(*n),
                (0, _) => {
                    return Err(Stop::Verdict(Verdict::CandidateIllFormed {
                        reason: "H emitted a color before declaring its arity".into(),
                    }))
                }
                (_, EctToken::Color(c)) => {
                    if arity.map_or(true, |n| *c >= n) {
                        return Err(Stop::Verdict(Verdict::CandidateIllFormed {
                            reason: format!("H emitted color {c} outside its declared range"),
                        }));
                    }
                    colors.push(*c);
                }
                (_, EctToken::Arity(_)) => {
                    return Err(Stop::Verdict(Verdict::CandidateIllFormed {
                        reason: "H re-declared its arity".into(),
                    }))
                }
            }
        }
        Ok((arity, colors))
    }

    /// Doubling-window palette-stabilization guess for an ECT bound of
    /// H's output, restarted with a larger window while the palette keeps
    /// growing late.
    fn guess_bound(&mut self, window: &mut u64) -> Step<u64> {
        loop {
            let colors = loop {
                let (_, colors) = self.query_h()?;
                if colors.len() as u64 >= *window {
                    break colors;
                }
                self.push_row()?;
            };
            let mut seen = std::collections::BTreeSet::new();
            let mut last_new = 0u64;
            for (pos, c) in colors.iter().take(*window as usize).enumerate() {
                if seen.insert(*c) {
                    last_new = pos as u64;
                }
            }
            if last_new < *window / 2 {
                self.transcript.log(
                    "ADV",
                    format!("palette stable in window {}", *window),
                    format!("bound guess {last_new}"),
                    self.fuel.remaining(),
                );
                return Ok(last_new);
            }
            *window *= 2;
        }
    }

    /// Feed (bound, rows) to K until it has emitted at least one value,
    /// then grow the input once more to confirm monotonicity.
    fn await_commitment(&mut self, bound: u64) -> Step<Vec<Elem>> {
        let mut guard: MonotoneGuard<Elem> = MonotoneGuard::new();
        let mut confirmed = false;
        let mut input = Vec::with_capacity(self.rows.len() + 8);
        input.push(KEctInput::Bound(bound));
        input.extend(self.rows.iter().cloned().map(KEctInput::Row));
        loop {
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
                format!("bound {bound}, {} rows", self.rows.len()),
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
            input.push(KEctInput::Row(self.rows.last().expect("just pushed").clone()));
        }
    }

    fn run(&mut self) -> Step<Verdict> {
        let mut window = 16u64;
        let mut last_bound: Option<u64> = None;
        self.push_row()?;
        loop {
            let guess = self.guess_bound(&mut window)?;
            let bound = match last_bound {
                Some(b) => guess.max(b + 1),
                None => guess,
            };
            last_bound = Some(bound);
            let committed = self.await_commitment(bound)?;
            // extend past the committed stage before judging: the limit
            // keeps opening new stages, which strands non-chain values
            self.open_stage()?;
            if let Some(defect) = commitment_defect(&committed) {
                let claimed = committed.iter().map(|v| v.to_string()).collect();
                return Ok(Verdict::RefutationFound {
                    transcript: std::mem::take(&mut self.transcript),
                    claimed_output: claimed,
                    violated_contract: defect,
                });
            }
        }
    }
}

/// Play the staged descending-sequence construction against a candidate
/// WOP(X↦X²_lex) ≤ ECT pair.
pub fn adversary_wop_ect(cand: &WopEctCandidate, fuel: u64) -> Result<Verdict> {
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
    fn stage_rows_descend_across_and_within_stages() {
        let order = two_q_order();
        let r0 = stage_row(0, 0);
        let r1 = stage_row(0, 5);
        let r2 = stage_row(1, 1);
        let r3 = stage_row(1, 2);
        let r4 = stage_row(2, 1);
        for (a, b) in [(&r0, &r1), (&r1, &r2), (&r2, &r3), (&r3, &r4)] {
            assert_eq!(b.cmp_lex(a).unwrap(), std::cmp::Ordering::Less, "{b} < {a}");
        }
        let _ = order;
    }

    #[test]
    fn chain_values_are_recognized() {
        assert_eq!(chain_index(&x_elem(1, 1, 1)), Some(0));
        assert_eq!(chain_index(&x_elem(1, 1, 4)), Some(3));
        assert_eq!(chain_index(&x_elem(0, 1, 4)), None);
        assert_eq!(chain_index(&x_elem(1, 2, 3)), None);
    }

    #[test]
    fn defects_are_spotted() {
        assert!(commitment_defect(&[]).is_some());
        assert!(commitment_defect(&[x_elem(0, 1, 2)]).is_some());
        assert!(commitment_defect(&[x_elem(1, 1, 2), x_elem(1, 1, 2)]).is_some());
        assert!(commitment_defect(&[x_elem(1, 1, 1), x_elem(1, 1, 2)]).is_none());
    }
}
