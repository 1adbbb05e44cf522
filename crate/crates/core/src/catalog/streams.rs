use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::order::{Elem, LexTuple, LinearOrder, OmegaTerm};
use crate::{Error, Result};

/// Append-only memo over a deterministic index function. Clones share the
/// table, so repeated queries (from any thread) return identical values and
/// the underlying closure runs at most once per index.
struct MemoSeq<T> {
    gen: Arc<dyn Fn(u64) -> Result<T> + Send + Sync>,
    memo: Arc<Mutex<Vec<T>>>,
}

impl<T: Clone> MemoSeq<T> {
    fn new(gen: Arc<dyn Fn(u64) -> Result<T> + Send + Sync>) -> Self {
        MemoSeq { gen, memo: Arc::new(Mutex::new(Vec::new())) }
    }

    fn get(&self, i: u64) -> Result<T> {
        let mut memo = self.memo.lock().unwrap();
        while (memo.len() as u64) <= i {
            let next = (self.gen)(memo.len() as u64)?;
            memo.push(next);
        }
        Ok(memo[i as usize].clone())
    }
}

impl<T> Clone for MemoSeq<T> {
    fn clone(&self) -> Self {
        MemoSeq { gen: Arc::clone(&self.gen), memo: Arc::clone(&self.memo) }
    }
}

/// Deterministic total coloring f : N → n_colors.
#[derive(Clone)]
pub struct UnaryColorStream {
    n_colors: usize,
    seq: MemoSeq<usize>,
}

impl UnaryColorStream {
    pub fn new<F>(n_colors: usize, f: F) -> Self
    where
        F: Fn(u64) -> Result<usize> + Send + Sync + 'static,
    {
        UnaryColorStream { n_colors, seq: MemoSeq::new(Arc::new(f)) }
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn color(&self, x: u64) -> Result<usize> {
        let c = self.seq.get(x)?;
        if c >= self.n_colors {
            return Err(Error::ColorOutOfRange { got: c, size: self.n_colors });
        }
        Ok(c)
    }
}

/// Deterministic pair coloring c(i, j) for i < j.
#[derive(Clone)]
pub struct ColoringStream {
    n_colors: usize,
    gen: Arc<dyn Fn(u64, u64) -> Result<usize> + Send + Sync>,
    memo: Arc<Mutex<HashMap<(u64, u64), usize>>>,
}

impl ColoringStream {
    pub fn new<F>(n_colors: usize, f: F) -> Self
    where
        F: Fn(u64, u64) -> Result<usize> + Send + Sync + 'static,
    {
        ColoringStream {
            n_colors,
            gen: Arc::new(f),
            memo: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn n_colors(&self) -> usize {
        self.n_colors
    }

    pub fn color(&self, i: u64, j: u64) -> Result<usize> {
        assert!(i < j, "pair coloring is defined for i < j");
        if let Some(&c) = self.memo.lock().unwrap().get(&(i, j)) {
            return Ok(c);
        }
        let c = (self.gen)(i, j)?;
        if c >= self.n_colors {
            return Err(Error::ColorOutOfRange { got: c, size: self.n_colors });
        }
        self.memo.lock().unwrap().insert((i, j), c);
        Ok(c)
    }
}

/// Deterministic enumeration e : N → N.
#[derive(Clone)]
pub struct EnumerationStream {
    seq: MemoSeq<u64>,
}

impl EnumerationStream {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        EnumerationStream { seq: MemoSeq::new(Arc::new(move |i| Ok(f(i)))) }
    }

    pub fn value(&self, i: u64) -> u64 {
        self.seq.get(i).expect("enumeration streams are total")
    }
}

/// Items a descending stream can range over.
pub trait OrderedItem: Clone + Send + Sync + 'static {
    fn cmp_item(&self, other: &Self) -> Result<Ordering>;
    fn render(&self) -> String;
}

impl OrderedItem for OmegaTerm {
    fn cmp_item(&self, other: &Self) -> Result<Ordering> {
        self.cmp_omega(other)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl OrderedItem for LexTuple {
    fn cmp_item(&self, other: &Self) -> Result<Ordering> {
        self.cmp_lex(other)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Lazily generated sequence of terms, descent checked on demand by the
/// validators rather than at construction.
#[derive(Clone)]
pub struct DescendingStream<T> {
    seq: MemoSeq<T>,
}

impl<T: OrderedItem> DescendingStream<T> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(u64) -> Result<T> + Send + Sync + 'static,
    {
        DescendingStream { seq: MemoSeq::new(Arc::new(f)) }
    }

    pub fn get(&self, i: u64) -> Result<T> {
        self.seq.get(i)
    }

    pub fn prefix(&self, depth: u64) -> Result<Vec<T>> {
        (0..depth).map(|i| self.get(i)).collect()
    }
}

/// A stream of base-order elements with source hints: item k is the value
/// together with the index of the instance term it was drawn from.
#[derive(Clone)]
pub struct WitnessStream {
    base: LinearOrder,
    seq: MemoSeq<(Elem, u64)>,
}

impl WitnessStream {
    pub fn new<F>(base: LinearOrder, f: F) -> Self
    where
        F: Fn(u64) -> Result<(Elem, u64)> + Send + Sync + 'static,
    {
        WitnessStream { base, seq: MemoSeq::new(Arc::new(f)) }
    }

    pub fn base(&self) -> &LinearOrder {
        &self.base
    }

    pub fn get(&self, i: u64) -> Result<(Elem, u64)> {
        self.seq.get(i)
    }

    pub fn prefix(&self, depth: u64) -> Result<Vec<(Elem, u64)>> {
        (0..depth).map(|i| self.get(i)).collect()
    }
}

/// A strictly increasing stream of naturals (homogeneous-set generators).
#[derive(Clone)]
pub struct MonotoneNatStream {
    seq: MemoSeq<u64>,
}

impl MonotoneNatStream {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(u64) -> Result<u64> + Send + Sync + 'static,
    {
        MonotoneNatStream { seq: MemoSeq::new(Arc::new(f)) }
    }

    pub fn get(&self, i: u64) -> Result<u64> {
        self.seq.get(i)
    }

    pub fn prefix(&self, depth: u64) -> Result<Vec<u64>> {
        (0..depth).map(|i| self.get(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

    #[test]
    fn memoization_runs_the_closure_once_per_index() {
        let calls = Arc::new(AtomicU64::new(0));
        let calls2 = Arc::clone(&calls);
        let s = EnumerationStream::new(move |i| {
            calls2.fetch_add(1, AtomicOrdering::SeqCst);
            i * 2
        });
        let t = s.clone();
        assert_eq!(s.value(5), 10);
        assert_eq!(t.value(5), 10);
        assert_eq!(s.value(3), 6);
        assert_eq!(calls.load(AtomicOrdering::SeqCst), 6);
    }

    #[test]
    fn coloring_rejects_out_of_range() {
        let c = ColoringStream::new(2, |_i, _j| Ok(7));
        assert!(matches!(
            c.color(0, 1),
            Err(Error::ColorOutOfRange { got: 7, size: 2 })
        ));
    }
}
