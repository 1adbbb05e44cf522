//! Monotone-functional model and the three staged diagonalization duels.
//!
//! A duel can refute a candidate pair, never certify one: against a genuine
//! reduction it runs until fuel is exhausted, and `BudgetExhausted` is an
//! ordinary outcome. Candidates ship as a built-in catalog of deliberately
//! buggy pairs so the harness is self-contained.

pub mod catalog;
mod functional;
mod isfinite;
mod lex_lpo;
mod wop_ect;

pub use functional::{
    BiContinuousFunctional, ContinuousFunctional, FuelMeter, MonotoneGuard, Response, Transcript,
    TranscriptEvent, Verdict,
};
pub use isfinite::{adversary_isfinite_wop, IsfToken, IsfiniteCandidate, SierpToken};
pub use lex_lpo::{adversary_lex_lpo, KLpoInput, LexLpoCandidate, LpoToken, MAX_ARITY};
pub use wop_ect::{adversary_wop_ect, two_q_order, EctToken, KEctInput, WopEctCandidate};

/// Early exit from a duel: a final verdict or a hard error.
pub(crate) enum Stop {
    Verdict(Verdict),
    Error(crate::Error),
}
