//! Linear orders, ω-power terms, lexicographic tuples, and the
//! positional-arithmetic comparison oracle.
//!
//! Everything here is a plain immutable value; all comparisons are pure and
//! exact (arbitrary-precision rationals, no floating point).

mod lex;
mod linear;
mod omega;

pub use lex::LexTuple;
pub use linear::{rat, rat_to_string, Elem, LinearOrder};
pub use omega::{cmp_via_cnf_oracle, is_contained, Component, OmegaTerm};
