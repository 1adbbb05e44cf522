use crate::catalog::{ColoringStream, FinitePoset, MonotoneNatStream};
use crate::{Error, Result};

/// Bundle finitely many right-ordered colorings into one over the product
/// poset: the tuple color is encoded in mixed radix, first factor most
/// significant.
pub fn ort_product_forward(
    inputs: &[(FinitePoset, ColoringStream)],
) -> Result<(FinitePoset, ColoringStream)> {
    if inputs.is_empty() {
        return Err(Error::EmptyList);
    }
    let posets: Vec<&FinitePoset> = inputs.iter().map(|(p, _)| p).collect();
    let product = FinitePoset::product(&posets)?;
    let sizes: Vec<usize> = inputs.iter().map(|(p, _)| p.size()).collect();
    let colorings: Vec<ColoringStream> = inputs.iter().map(|(_, c)| c.clone()).collect();
    let coloring = ColoringStream::new(product.size(), move |x, y| {
        let parts: Vec<usize> = colorings
            .iter()
            .map(|c| c.color(x, y))
            .collect::<Result<_>>()?;
        Ok(FinitePoset::pack_product_index(&sizes, &parts))
    });
    Ok((product, coloring))
}

/// A homogeneous set for the product is homogeneous for every coordinate:
/// the backward direction just duplicates it.
pub fn ort_product_backward(h: MonotoneNatStream, n: usize) -> Vec<MonotoneNatStream> {
    (0..n).map(|_| h.clone()).collect()
}
