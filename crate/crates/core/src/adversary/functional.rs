use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

/// Reply of a monotone functional to a finite input prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Response<O> {
    /// The output prefix produced so far. Must extend every earlier output.
    Output(Vec<O>),
    NeedMoreInput,
}

/// A monotone finite-prefix → finite-prefix map with a query log: the
/// computational model of the candidate functionals H and K.
pub struct ContinuousFunctional<I, O> {
    apply: Arc<dyn Fn(&[I]) -> Response<O> + Send + Sync>,
    query_log: Mutex<Vec<usize>>,
}

impl<I, O> ContinuousFunctional<I, O> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[I]) -> Response<O> + Send + Sync + 'static,
    {
        ContinuousFunctional { apply: Arc::new(f), query_log: Mutex::new(Vec::new()) }
    }

    pub fn apply(&self, input: &[I]) -> Response<O> {
        self.query_log.lock().unwrap().push(input.len());
        (self.apply)(input)
    }

    /// Input lengths queried so far.
    pub fn queries(&self) -> Vec<usize> {
        self.query_log.lock().unwrap().clone()
    }
}

/// Two-tailed variant for candidates reading a pair of growing prefixes.
pub struct BiContinuousFunctional<A, B, O> {
    apply: Arc<dyn Fn(&[A], &[B]) -> Response<O> + Send + Sync>,
    query_log: Mutex<Vec<(usize, usize)>>,
}

impl<A, B, O> BiContinuousFunctional<A, B, O> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[A], &[B]) -> Response<O> + Send + Sync + 'static,
    {
        BiContinuousFunctional { apply: Arc::new(f), query_log: Mutex::new(Vec::new()) }
    }

    pub fn apply(&self, a: &[A], b: &[B]) -> Response<O> {
        self.query_log.lock().unwrap().push((a.len(), b.len()));
        (self.apply)(a, b)
    }
}

/// Tracks a candidate's output across one run and flags retractions.
/// The duels only ever extend inputs, so output extension is exactly the
/// monotonicity contract.
pub struct MonotoneGuard<O: Clone + PartialEq> {
    last: Vec<O>,
}

impl<O: Clone + PartialEq> MonotoneGuard<O> {
    pub fn new() -> Self {
        MonotoneGuard { last: Vec::new() }
    }

    /// Fold a response in; `Err` carries the ill-formedness reason.
    pub fn observe(&mut self, response: Response<O>) -> std::result::Result<&[O], String> {
        match response {
            Response::NeedMoreInput => Ok(&self.last),
            Response::Output(out) => {
                if out.len() < self.last.len() || out[..self.last.len()] != self.last[..] {
                    return Err("candidate retracted previously emitted output".into());
                }
                self.last = out;
                Ok(&self.last)
            }
        }
    }

    pub fn current(&self) -> &[O] {
        &self.last
    }
}

/// Ordered event log of one duel, serialized as JSON lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEvent {
    pub step: u64,
    pub actor: String,
    pub input_delta: String,
    pub output_delta: String,
    pub fuel_remaining: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub events: Vec<TranscriptEvent>,
}

impl Transcript {
    pub fn new() -> Self {
        Transcript { events: Vec::new() }
    }

    pub fn log(&mut self, actor: &str, input_delta: String, output_delta: String, fuel: u64) {
        let step = self.events.len() as u64;
        self.events.push(TranscriptEvent {
            step,
            actor: actor.to_string(),
            input_delta,
            output_delta,
            fuel_remaining: fuel,
        });
    }

    pub fn to_jsonl(&self) -> String {
        self.events
            .iter()
            .map(|e| serde_json::to_string(e).expect("transcript events serialize"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Outcome of one duel. Exhausting fuel is an ordinary outcome, not an
/// error: against a genuine reduction the duel may run forever.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    RefutationFound {
        transcript: Transcript,
        claimed_output: Vec<String>,
        violated_contract: String,
    },
    BudgetExhausted,
    CandidateIllFormed { reason: String },
}

impl Verdict {
    pub fn is_refutation(&self) -> bool {
        matches!(self, Verdict::RefutationFound { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::RefutationFound { .. } => "refutation-found",
            Verdict::BudgetExhausted => "budget-exhausted",
            Verdict::CandidateIllFormed { .. } => "candidate-ill-formed",
        }
    }
}

/// Simple countdown shared by a duel: every candidate query and every
/// constructed row or bit costs one unit.
pub struct FuelMeter {
    remaining: u64,
}

impl FuelMeter {
    pub fn new(fuel: u64) -> Self {
        FuelMeter { remaining: fuel }
    }

    #[must_use]
    pub fn spend(&mut self) -> bool {
        if self.remaining == 0 {
            false
        } else {
            self.remaining -= 1;
            true
        }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_accepts_extensions_and_flags_retractions() {
        let mut g: MonotoneGuard<u32> = MonotoneGuard::new();
        assert_eq!(g.observe(Response::NeedMoreInput).unwrap(), &[] as &[u32]);
        assert_eq!(g.observe(Response::Output(vec![1, 2])).unwrap(), &[1, 2]);
        assert_eq!(g.observe(Response::Output(vec![1, 2, 3])).unwrap(), &[1, 2, 3]);
        assert!(g.observe(Response::Output(vec![1, 9, 3])).is_err());
    }

    #[test]
    fn fuel_runs_out() {
        let mut f = FuelMeter::new(2);
        assert!(f.spend());
        assert!(f.spend());
        assert!(!f.spend());
        assert_eq!(f.remaining(), 0);
    }
}
