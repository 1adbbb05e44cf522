use crate::catalog::DescendingStream;
use crate::order::{LexTuple, OmegaTerm};
use crate::Result;

/// Embed width-n tuples as ω-power terms with exponents n,…,1:
/// (a_n,…,a_1) ↦ ⟨(n,a_n),…,(1,a_1)⟩, an order embedding of length 2n.
///
/// The backward direction is the identity: any descending contained
/// sequence for the image is one for the original tuples.
pub fn lex_to_omega_forward(sigma: DescendingStream<LexTuple>) -> DescendingStream<OmegaTerm> {
    DescendingStream::new(move |i| {
        let row = sigma.get(i)?;
        let n = row.width() as u64;
        let pairs = row
            .entries()
            .iter()
            .enumerate()
            .map(|(idx, e)| (n - idx as u64, e.clone()))
            .collect();
        OmegaTerm::new(row.base().clone(), pairs)
    })
}

/// Image of a single tuple, for pairwise comparison checks.
pub fn lex_tuple_to_term(row: &LexTuple) -> Result<OmegaTerm> {
    let n = row.width() as u64;
    let pairs = row
        .entries()
        .iter()
        .enumerate()
        .map(|(idx, e)| (n - idx as u64, e.clone()))
        .collect();
    OmegaTerm::new(row.base().clone(), pairs)
}
