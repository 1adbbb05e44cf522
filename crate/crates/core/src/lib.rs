//! Workbench for instance–solution problems on linear and partial orders.
//!
//! The crate has six parts:
//!
//! * [`order`] — linear orders, ω-power terms, lexicographic tuples, and an
//!   independent positional-arithmetic comparison oracle;
//! * [`catalog`] — problem families (ECT, TC_N, WOP, ORT) as validatable
//!   streams, plus seeded generators that attach hidden certificates so
//!   instances can be solved honestly at desk scale;
//! * [`reductions`] — the forward/backward stream transformers between the
//!   problems; these never see certificates;
//! * [`reset`] — reset/cycle bookkeeping for update-set sequences, with a
//!   brute-force uniqueness oracle;
//! * [`adversary`] — a monotone-functional model and three staged
//!   diagonalization duels that refute buggy candidate reductions;
//! * [`harness`] — certified solvers, round-trip verification pipelines,
//!   and machine-readable reports.

pub mod adversary;
pub mod catalog;
pub mod error;
pub mod harness;
pub mod order;
pub mod reductions;
pub mod reset;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
