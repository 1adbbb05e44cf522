//! Built-in candidate (H, K) pairs, keyed by stable identifiers. Most are
//! deliberately planted bugs; the non-monotone ones exercise the contract
//! guard, and the silent ones exercise fuel semantics.

use serde::{Deserialize, Serialize};

use crate::adversary::{
    adversary_isfinite_wop, adversary_lex_lpo, adversary_wop_ect, BiContinuousFunctional,
    ContinuousFunctional, EctToken, IsfToken, IsfiniteCandidate, KEctInput, KLpoInput,
    LexLpoCandidate, LpoToken, Response, SierpToken, Verdict, WopEctCandidate,
};
use crate::order::{rat, Elem, LexTuple, LinearOrder, OmegaTerm};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdversaryKind {
    WopEct,
    LexLpo,
    IsfiniteWop,
}

impl AdversaryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdversaryKind::WopEct => "wop-ect",
            AdversaryKind::LexLpo => "lex-lpo",
            AdversaryKind::IsfiniteWop => "isfinite-wop",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "wop-ect" => Ok(AdversaryKind::WopEct),
            "lex-lpo" => Ok(AdversaryKind::LexLpo),
            "isfinite-wop" => Ok(AdversaryKind::IsfiniteWop),
            other => Err(Error::UnknownCandidate(format!("adversary kind {other}"))),
        }
    }
}

/// Candidates expected to be refuted within a generous fuel budget.
pub fn refutable_ids(kind: AdversaryKind) -> &'static [&'static str] {
    match kind {
        AdversaryKind::WopEct => &["const-column", "fabricator", "riser"],
        AdversaryKind::LexLpo => &["row-sampler", "eta-digit", "riser"],
        AdversaryKind::IsfiniteWop => &["window-judge", "zero-scan", "ones-parity", "eager-top"],
    }
}

/// Candidates that violate the monotone-functional contract.
pub fn nonmonotone_ids(kind: AdversaryKind) -> &'static [&'static str] {
    match kind {
        AdversaryKind::WopEct => &["h-flicker", "k-shrinker"],
        AdversaryKind::LexLpo => &["h-wobble"],
        AdversaryKind::IsfiniteWop => &["flip-flop", "h-mutator"],
    }
}

/// Candidates that never converge (fuel semantics).
pub fn silent_ids(kind: AdversaryKind) -> &'static [&'static str] {
    match kind {
        AdversaryKind::WopEct => &["mute"],
        AdversaryKind::LexLpo => &["h-shy"],
        AdversaryKind::IsfiniteWop => &["agnostic"],
    }
}

pub fn candidate_ids(kind: AdversaryKind) -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = Vec::new();
    ids.extend_from_slice(refutable_ids(kind));
    ids.extend_from_slice(nonmonotone_ids(kind));
    ids.extend_from_slice(silent_ids(kind));
    if kind == AdversaryKind::LexLpo {
        ids.push("h-overflow");
    }
    ids
}

/// Run the duel for `kind` against the built-in candidate `id`.
pub fn run_duel(kind: AdversaryKind, id: &str, fuel: u64) -> Result<Verdict> {
    match kind {
        AdversaryKind::WopEct => {
            let cand = wop_ect_candidate(id)?;
            adversary_wop_ect(&cand, fuel)
        }
        AdversaryKind::LexLpo => {
            let cand = lex_lpo_candidate(id)?;
            adversary_lex_lpo(&cand, fuel)
        }
        AdversaryKind::IsfiniteWop => {
            let cand = isfinite_candidate(id)?;
            adversary_isfinite_wop(&cand, fuel)
        }
    }
}

// ---------------------------------------------------------------------------
// wop-ect candidates
// ---------------------------------------------------------------------------

/// One color, everything colored 0: a valid ECT instance for any sequence.
fn honest_ect_h() -> ContinuousFunctional<LexTuple, EctToken> {
    ContinuousFunctional::new(|rows| {
        if rows.is_empty() {
            return Response::NeedMoreInput;
        }
        let mut out = vec![EctToken::Arity(1)];
        out.extend(std::iter::repeat(EctToken::Color(0)).take(rows.len()));
        Response::Output(out)
    })
}

fn ect_rows(input: &[KEctInput]) -> Vec<&LexTuple> {
    input
        .iter()
        .filter_map(|t| match t {
            KEctInput::Row(r) => Some(r),
            _ => None,
        })
        .collect()
}

fn wop_ect_candidate(id: &str) -> Result<WopEctCandidate> {
    let h = match id {
        "h-flicker" => ContinuousFunctional::new(|rows: &[LexTuple]| {
            if rows.is_empty() {
                return Response::NeedMoreInput;
            }
            let mut out = vec![EctToken::Arity(2)];
            // the first color depends on how much input has been read:
            // a retraction the moment the input grows
            out.push(EctToken::Color(rows.len() % 2));
            Response::Output(out)
        }),
        _ => honest_ect_h(),
    };
    let k = match id {
        // copies the second column of the first rows it sees; those values
        // are stranded once the next stage opens
        "const-column" => ContinuousFunctional::new(|input: &[KEctInput]| {
            let rows = ect_rows(input);
            if rows.len() < 6 {
                return Response::NeedMoreInput;
            }
            Response::Output(rows[..3].iter().map(|r| r.entries()[1].clone()).collect())
        }),
        // invents a value that never occurs in the sequence
        "fabricator" => ContinuousFunctional::new(|input: &[KEctInput]| {
            let rows = ect_rows(input);
            if rows.len() < 6 {
                return Response::NeedMoreInput;
            }
            Response::Output(vec![Elem::Tuple(vec![Elem::Nat(0), Elem::Rat(rat(42, 1))])])
        }),
        // echoes two early second-column values in ascending order
        "riser" => ContinuousFunctional::new(|input: &[KEctInput]| {
            let rows = ect_rows(input);
            if rows.len() < 6 {
                return Response::NeedMoreInput;
            }
            Response::Output(vec![rows[1].entries()[1].clone(), rows[0].entries()[1].clone()])
        }),
        "mute" | "h-flicker" => ContinuousFunctional::new(|_input: &[KEctInput]| {
            Response::NeedMoreInput
        }),
        "k-shrinker" => ContinuousFunctional::new(|input: &[KEctInput]| {
            let rows = ect_rows(input);
            match rows.len() {
                0..=5 => Response::NeedMoreInput,
                6 => Response::Output(vec![
                    rows[0].entries()[1].clone(),
                    rows[1].entries()[1].clone(),
                ]),
                _ => Response::Output(vec![rows[0].entries()[1].clone()]),
            }
        }),
        other => return Err(Error::UnknownCandidate(other.into())),
    };
    Ok(WopEctCandidate { h, k })
}

// ---------------------------------------------------------------------------
// lex-lpo candidates
// ---------------------------------------------------------------------------

fn lpo_rows(input: &[KLpoInput]) -> Vec<&LexTuple> {
    input
        .iter()
        .filter_map(|t| match t {
            KLpoInput::Row(r) => Some(r),
            _ => None,
        })
        .collect()
}

fn arity_h(reveal_at: usize, arity: u32) -> ContinuousFunctional<LexTuple, LpoToken> {
    ContinuousFunctional::new(move |rows: &[LexTuple]| {
        if rows.len() < reveal_at {
            Response::NeedMoreInput
        } else {
            Response::Output(vec![LpoToken::Arity(arity)])
        }
    })
}

fn lex_lpo_candidate(id: &str) -> Result<LexLpoCandidate> {
    let h = match id {
        "h-shy" => ContinuousFunctional::new(|_rows: &[LexTuple]| Response::NeedMoreInput),
        "h-wobble" => ContinuousFunctional::new(|rows: &[LexTuple]| {
            if rows.len() < 16 {
                Response::NeedMoreInput
            } else if rows.len() < 24 {
                Response::Output(vec![LpoToken::Arity(2)])
            } else {
                Response::Output(vec![LpoToken::Arity(3)])
            }
        }),
        "h-overflow" => arity_h(4, 20),
        _ => arity_h(16, 2),
    };
    let k = match id {
        // samples the second column at fixed even indices: a growing,
        // monotone output whose values can never dominate the final chain
        "row-sampler" => ContinuousFunctional::new(|input: &[KLpoInput]| {
            let rows = lpo_rows(input);
            if rows.len() < 4 {
                return Response::NeedMoreInput;
            }
            let values: Vec<Elem> = (1..rows.len() / 2)
                .map(|q| rows[2 * q].entries()[1].clone())
                .collect();
            Response::Output(values)
        }),
        // answers with the popcount of the answer string
        "eta-digit" => ContinuousFunctional::new(|input: &[KLpoInput]| {
            let rows = lpo_rows(input);
            if rows.len() < 4 {
                return Response::NeedMoreInput;
            }
            let ones = input
                .iter()
                .filter_map(|t| match t {
                    KLpoInput::Eta(e) => Some(e.iter().filter(|&&b| b).count()),
                    _ => None,
                })
                .next()
                .unwrap_or(0);
            Response::Output(vec![Elem::Rat(rat(ones as i64 + 1, 1))])
        }),
        // two early values in ascending order
        "riser" => ContinuousFunctional::new(|input: &[KLpoInput]| {
            let rows = lpo_rows(input);
            if rows.len() < 6 {
                return Response::NeedMoreInput;
            }
            Response::Output(vec![rows[4].entries()[1].clone(), rows[2].entries()[1].clone()])
        }),
        "h-shy" | "h-wobble" | "h-overflow" => {
            ContinuousFunctional::new(|_input: &[KLpoInput]| Response::NeedMoreInput)
        }
        other => return Err(Error::UnknownCandidate(other.into())),
    };
    Ok(LexLpoCandidate { h, k })
}

// ---------------------------------------------------------------------------
// isfinite-wop candidates
// ---------------------------------------------------------------------------

/// Ignores its input and emits one fixed descending instance over Q.
/// Output is capped so long silent duels stay linear in fuel.
fn constant_isf_h() -> ContinuousFunctional<bool, IsfToken> {
    ContinuousFunctional::new(|bits: &[bool]| {
        let mut out = vec![IsfToken::Base(LinearOrder::Rationals)];
        out.extend((0..(bits.len() / 2).min(64)).map(|i| {
            let term =
                OmegaTerm::new(LinearOrder::Rationals, vec![(1, Elem::Rat(rat(12 - i as i64, 1)))])
                    .expect("fixed instance terms are valid");
            IsfToken::Term(term)
        }));
        Response::Output(out)
    })
}

fn sierp(top: bool) -> Response<SierpToken> {
    Response::Output(vec![if top { SierpToken::Top } else { SierpToken::Bot }])
}

fn isfinite_candidate(id: &str) -> Result<IsfiniteCandidate> {
    let h = match id {
        "h-mutator" => ContinuousFunctional::new(|bits: &[bool]| {
            let mut out = vec![IsfToken::Base(LinearOrder::Rationals)];
            let term = OmegaTerm::new(
                LinearOrder::Rationals,
                vec![(1, Elem::Rat(rat(bits.len() as i64, 1)))],
            )
            .expect("term valid");
            out.push(IsfToken::Term(term));
            Response::Output(out)
        }),
        _ => constant_isf_h(),
    };
    let k = match id {
        // judges only a fixed window of the string
        "window-judge" => BiContinuousFunctional::new(|_sol: &[Elem], bits: &[bool]| {
            if bits.len() < 12 {
                return Response::NeedMoreInput;
            }
            sierp(!bits[..12].contains(&true))
        }),
        // declares ⊥ the moment any 1 has been read
        "zero-scan" => BiContinuousFunctional::new(|_sol: &[Elem], bits: &[bool]| {
            if bits.len() < 12 {
                return Response::NeedMoreInput;
            }
            sierp(!bits.contains(&true))
        }),
        "ones-parity" => BiContinuousFunctional::new(|_sol: &[Elem], bits: &[bool]| {
            if bits.len() < 12 {
                return Response::NeedMoreInput;
            }
            sierp(bits.iter().filter(|&&b| b).count() % 2 == 0)
        }),
        "eager-top" => BiContinuousFunctional::new(|_sol: &[Elem], bits: &[bool]| {
            if bits.len() < 4 {
                return Response::NeedMoreInput;
            }
            sierp(true)
        }),
        "agnostic" | "h-mutator" => {
            BiContinuousFunctional::new(|_sol: &[Elem], _bits: &[bool]| Response::NeedMoreInput)
        }
        "flip-flop" => BiContinuousFunctional::new(|_sol: &[Elem], bits: &[bool]| {
            if bits.len() < 12 {
                return Response::NeedMoreInput;
            }
            sierp(bits.len() % 2 == 0)
        }),
        other => return Err(Error::UnknownCandidate(other.into())),
    };
    Ok(IsfiniteCandidate { h, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FUEL: u64 = 1_000_000;

    #[test]
    fn planted_bugs_are_refuted() {
        for kind in [AdversaryKind::WopEct, AdversaryKind::LexLpo, AdversaryKind::IsfiniteWop] {
            for id in refutable_ids(kind) {
                let verdict = run_duel(kind, id, FUEL).unwrap();
                assert!(
                    verdict.is_refutation(),
                    "{}/{id} gave {verdict:?}",
                    kind.as_str()
                );
            }
        }
    }

    #[test]
    fn tiny_fuel_exhausts_before_any_verdict() {
        for kind in [AdversaryKind::WopEct, AdversaryKind::LexLpo, AdversaryKind::IsfiniteWop] {
            for id in refutable_ids(kind) {
                let verdict = run_duel(kind, id, 10).unwrap();
                assert_eq!(verdict, Verdict::BudgetExhausted, "{}/{id}", kind.as_str());
            }
        }
    }

    #[test]
    fn non_monotone_candidates_are_ill_formed() {
        for kind in [AdversaryKind::WopEct, AdversaryKind::LexLpo, AdversaryKind::IsfiniteWop] {
            for id in nonmonotone_ids(kind) {
                let verdict = run_duel(kind, id, FUEL).unwrap();
                assert!(
                    matches!(verdict, Verdict::CandidateIllFormed { .. }),
                    "{}/{id} gave {verdict:?}",
                    kind.as_str()
                );
            }
        }
    }

    #[test]
    fn silent_candidates_exhaust_fuel() {
        for kind in [AdversaryKind::WopEct, AdversaryKind::LexLpo, AdversaryKind::IsfiniteWop] {
            for id in silent_ids(kind) {
                let verdict = run_duel(kind, id, 50_000).unwrap();
                assert_eq!(verdict, Verdict::BudgetExhausted, "{}/{id}", kind.as_str());
            }
        }
    }

    #[test]
    fn oversized_arity_is_a_hard_error() {
        assert!(matches!(
            run_duel(AdversaryKind::LexLpo, "h-overflow", FUEL),
            Err(Error::ExponentOverflow { got: 20, max: 8 })
        ));
    }

    #[test]
    fn refutation_transcripts_replay_identically() {
        for (kind, id) in [
            (AdversaryKind::WopEct, "const-column"),
            (AdversaryKind::LexLpo, "eta-digit"),
            (AdversaryKind::IsfiniteWop, "ones-parity"),
        ] {
            let a = run_duel(kind, id, FUEL).unwrap();
            let b = run_duel(kind, id, FUEL).unwrap();
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
            if let Verdict::RefutationFound { transcript, .. } = &a {
                assert!(!transcript.to_jsonl().is_empty());
            }
        }
    }

    #[test]
    fn unknown_ids_are_rejected() {
        assert!(matches!(
            run_duel(AdversaryKind::WopEct, "nope", FUEL),
            Err(Error::UnknownCandidate(_))
        ));
    }
}
