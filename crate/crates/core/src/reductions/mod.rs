//! Forward (instance translation) and backward (solution back-translation)
//! functionals for every positive reduction in the workbench.
//!
//! Functionals receive instance payloads only — never certificates — and
//! are addressable by the stable identifiers used by the CLI:
//! `wop-to-ort`, `ort-product`, `ort-to-ect-wop`, `lex-to-omega`,
//! `tcn-to-lex`, `ort-full-pipeline`.

mod lex_omega;
mod ort_ect_wop;
mod ort_product;
mod tcn_lex;
mod wop_ort;

pub use lex_omega::lex_to_omega_forward;
pub use ort_ect_wop::{ort_to_ectwop_backward, ort_to_ectwop_forward, OrtEctWopEngine};
pub use ort_product::{ort_product_backward, ort_product_forward};
pub use tcn_lex::{decode_tcn_value, tcn_to_lex_backward, tcn_to_lex_forward, TcnLexEngine};
pub use wop_ort::{wop_to_ort_backward, wop_to_ort_forward};

pub(crate) use ort_ect_wop::ort_to_ectwop_backward_with_stride;
pub(crate) use tcn_lex::tcn_to_lex_backward_wrong_base;
pub(crate) use wop_ort::wop_to_ort_backward_parity_flipped;

/// Stable reduction identifiers.
pub const REDUCTION_IDS: [&str; 6] = [
    "wop-to-ort",
    "ort-product",
    "ort-to-ect-wop",
    "lex-to-omega",
    "tcn-to-lex",
    "ort-full-pipeline",
];
