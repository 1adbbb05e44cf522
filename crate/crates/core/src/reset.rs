//! Reset/cycle bookkeeping for sequences of update sets U₀, U₁, … ⊆ [n].
//!
//! A subset B completes a cycle at stage i when the union of the update sets
//! in the window (reset_B(i), i] equals B; exactly one subset does so at
//! every stage, and every subset of that completer has its reset point moved
//! to i. Subsets are bitmasks: bit m−1 stands for the element m of [n].
//!
//! The optimized path keeps one cached window union per subset. A naive
//! from-scratch replay is kept as an independent second implementation for
//! differential testing, and [`ResetState::brute_force_completers`]
//! enumerates all subsets directly as the uniqueness oracle.

use serde::{Deserialize, Serialize};

/// The unique cycle-completer of a stage, with its index in the fixed
/// subset ordering A₁ = ∅ < … < A_{2ⁿ} = [n] (popcount, then binary value).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleStep {
    pub v_mask: u32,
    /// 1-based position of `v_mask` in the subset ordering.
    pub j: usize,
}

#[derive(Debug, Clone)]
pub struct ResetState {
    n: u32,
    /// reset_A for every mask A; −1 before any reset.
    reset: Vec<i64>,
    /// Cached ⋃_{reset_A(i) < h ≤ i−1} U_h per mask (empty window ⇒ 0).
    window: Vec<u32>,
    history: Vec<u32>,
    /// Masks in subset order; `order[j-1]` is A_j.
    order: Vec<u32>,
}

/// Masks of subsets of [n] sorted by (popcount, binary value). This ordering
/// extends ⊆.
pub fn subset_order(n: u32) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// Render a mask as a set of 1-based elements, e.g. `{1,3}`.
pub fn mask_to_set(mask: u32) -> String {
    let mut parts = Vec::new();
    for m in 0..32 {
        if mask & (1 << m) != 0 {
            parts.push((m + 1).to_string());
        }
    }
    format!("{{{}}}", parts.join(","))
}

impl ResetState {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1 && n <= 16, "subset bookkeeping sized for small n");
        let size = 1usize << n;
        ResetState {
            n,
            reset: vec![-1; size],
            window: vec![0; size],
            history: Vec::new(),
            order: subset_order(n),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Stage about to be executed (= number of steps taken so far).
    pub fn stage(&self) -> u64 {
        self.history.len() as u64
    }

    pub fn history(&self) -> &[u32] {
        &self.history
    }

    pub fn reset_of(&self, mask: u32) -> i64 {
        self.reset[mask as usize]
    }

    /// 1-based index of a mask in the subset ordering.
    pub fn j_of_mask(&self, mask: u32) -> usize {
        self.order.iter().position(|&m| m == mask).expect("mask in range") + 1
    }

    pub fn mask_of_j(&self, j: usize) -> u32 {
        self.order[j - 1]
    }

    /// Execute one stage with update set `u`, returning the new state and
    /// the stage's unique cycle-completer.
    pub fn step(&self, u: u32) -> (ResetState, CycleStep) {
        assert!(u < (1u32 << self.n), "update set within [n]");
        let mut next = self.clone();
        let i = next.history.len() as i64;
        let v = next.window[u as usize] | u;
        next.history.push(u);
        for w in next.window.iter_mut() {
            *w |= u;
        }
        for a in 0..next.reset.len() {
            if (a as u32) & v == a as u32 {
                next.reset[a] = i;
                next.window[a] = 0;
            }
        }
        let j = next.j_of_mask(v);
        (next, CycleStep { v_mask: v, j })
    }

    /// Enumerate every subset B with ⋃_{reset_B(i) < h ≤ i} U_h = B, where
    /// U_i = `u` is the current stage's update set. Window unions are
    /// recomputed from the raw history, independent of the cached path.
    pub fn brute_force_completers(&self, u: u32) -> Vec<u32> {
        let i = self.history.len();
        let mut acc = vec![0u32; i + 2];
        acc[i] = u;
        for h in (0..i).rev() {
            acc[h] = acc[h + 1] | self.history[h];
        }
        let mut out = Vec::new();
        for b in 0..self.reset.len() {
            let start = (self.reset[b] + 1) as usize;
            if acc[start] == b as u32 {
                out.push(b as u32);
            }
        }
        out
    }

    /// One debug/fixture line per stage: `i U_i V_i j_i resets=[...]`,
    /// resets listed in subset order as of after the stage.
    pub fn trace_line(&self, i: u64, u: u32, step: &CycleStep) -> String {
        let resets: Vec<String> = self
            .order
            .iter()
            .map(|&m| self.reset[m as usize].to_string())
            .collect();
        format!(
            "{i} {} {} {} resets=[{}]",
            mask_to_set(u),
            mask_to_set(step.v_mask),
            step.j,
            resets.join(",")
        )
    }
}

/// Independent naive replay: recomputes every reset table entry and window
/// union from scratch at each stage, straight from the definition.
pub fn replay_naive(n: u32, updates: &[u32]) -> Vec<CycleStep> {
    let size = 1usize << n;
    let order = subset_order(n);
    let mut reset = vec![-1i64; size];
    let mut out = Vec::with_capacity(updates.len());
    for (i, &u) in updates.iter().enumerate() {
        let scan = |from: i64| -> u32 {
            let mut acc = u;
            for h in (from + 1) as usize..i {
                acc |= updates[h];
            }
            acc
        };
        let v = scan(reset[u as usize]);
        let j = order.iter().position(|&m| m == v).unwrap() + 1;
        out.push(CycleStep { v_mask: v, j });
        for (a, r) in reset.iter_mut().enumerate() {
            if (a as u32) & v == a as u32 {
                *r = i as i64;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn subset_ordering_extends_inclusion() {
        let order = subset_order(3);
        assert_eq!(order[0], 0);
        assert_eq!(*order.last().unwrap(), 0b111);
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                // b never a proper subset of an earlier a
                assert!(b & a != b || a == b);
            }
        }
    }

    #[test]
    fn stage_zero_completer_is_the_update_set() {
        let state = ResetState::new(2);
        let (next, step) = state.step(0b01);
        assert_eq!(step.v_mask, 0b01);
        assert_eq!(next.reset_of(0b00), 0);
        assert_eq!(next.reset_of(0b01), 0);
        assert_eq!(next.reset_of(0b10), -1);
        // brute force agrees on arbitrary first sets
        for b in 0..4u32 {
            assert_eq!(ResetState::new(2).brute_force_completers(b), vec![b]);
        }
    }

    #[test]
    fn hand_simulated_window_unions() {
        // n=2, U = {1},{2},{1} → V = {1},{1,2},{1}
        let s0 = ResetState::new(2);
        let (s1, c0) = s0.step(0b01);
        let (s2, c1) = s1.step(0b10);
        let (_s3, c2) = s2.step(0b01);
        assert_eq!(c0.v_mask, 0b01);
        assert_eq!(c1.v_mask, 0b11);
        assert_eq!(c2.v_mask, 0b01);
    }

    #[test]
    fn empty_update_at_stage_zero() {
        let (_, step) = ResetState::new(3).step(0);
        assert_eq!(step.v_mask, 0);
        assert_eq!(step.j, 1);
    }

    #[test]
    fn uniqueness_and_differential_replay() {
        for n in 1..=4u32 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + u64::from(n));
            let updates: Vec<u32> =
                (0..500).map(|_| rng.gen_range(0..(1u32 << n))).collect();
            let naive = replay_naive(n, &updates);
            let mut state = ResetState::new(n);
            for (i, &u) in updates.iter().enumerate() {
                let brute = state.brute_force_completers(u);
                let (next, step) = state.step(u);
                assert_eq!(brute, vec![step.v_mask], "stage {i}, n={n}");
                assert_eq!(naive[i], step, "naive replay diverged at stage {i}");
                // coherence: A reset at stage i iff A ⊆ V_i
                for a in 0..(1u32 << n) {
                    let was_reset = next.reset_of(a) == i as i64;
                    assert_eq!(was_reset, a & step.v_mask == a);
                }
                state = next;
            }
        }
    }

    #[test]
    fn trace_format() {
        let state = ResetState::new(2);
        let (next, step) = state.step(0b01);
        let line = next.trace_line(0, 0b01, &step);
        assert_eq!(line, "0 {1} {1} 2 resets=[0,0,-1,-1]");
    }
}
