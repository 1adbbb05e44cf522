use std::sync::{Arc, Mutex};

use crate::catalog::{
    linear_extension, ColoringStream, DescendingStream, FinitePoset, MonotoneNatStream,
    UnaryColorStream, WitnessStream,
};
use crate::order::{rat, Elem, LexTuple, LinearOrder};
use crate::{Error, Result};

/// Per-stage record of the improvement bookkeeping and the matrix row.
struct StageRec {
    /// improvement_j at this stage, indexed j−1.
    improvement: Vec<bool>,
    /// Least witness k_j^i for improving colors.
    k_least: Vec<Option<u64>>,
    /// Column values a_j, indexed j−1.
    values: Vec<Elem>,
}

/// Staged translation of a right-ordered coloring into n binary improvement
/// streams and the row matrix Σ over {1,…,n} × N × Q × {−n,…,−1}.
///
/// Stage i costs O(i·n) color queries: each color scans the window
/// [previous_j(i), i) of its not-yet-consumed witnesses.
pub struct OrtEctWopEngine {
    poset: FinitePoset,
    coloring: ColoringStream,
    /// Linear extension p_1 < … < p_n as original color indices.
    extension: Vec<usize>,
    n: usize,
    state: Mutex<EngineState>,
}

struct EngineState {
    stages: Vec<StageRec>,
    /// Rolling previous_j entering the next stage, indexed j−1.
    previous: Vec<u64>,
    /// Last observed column color per row, for lazy right-ordered checks.
    last_seen: Vec<Option<(u64, usize)>>,
}

impl OrtEctWopEngine {
    pub fn new(poset: FinitePoset, coloring: ColoringStream) -> Result<Arc<Self>> {
        let n = poset.size();
        let extension = linear_extension(&poset);
        Ok(Arc::new(OrtEctWopEngine {
            poset,
            coloring,
            extension,
            n,
            state: Mutex::new(EngineState {
                stages: Vec::new(),
                previous: vec![0; n],
                last_seen: Vec::new(),
            }),
        }))
    }

    pub fn extension(&self) -> &[usize] {
        &self.extension
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// c(k, i) with a monotonicity spot-check against earlier observations
    /// in the same row.
    fn observe(&self, st: &mut EngineState, k: u64, i: u64) -> Result<usize> {
        let c = self.coloring.color(k, i)?;
        if st.last_seen.len() <= k as usize {
            st.last_seen.resize(k as usize + 1, None);
        }
        match st.last_seen[k as usize] {
            Some((prev_i, prev_c)) if prev_i < i => {
                if !self.poset.leq(prev_c, c) {
                    return Err(Error::NotRightOrdered { x: k, y: prev_i, y2: i });
                }
                st.last_seen[k as usize] = Some((i, c));
            }
            None => st.last_seen[k as usize] = Some((i, c)),
            _ => {}
        }
        Ok(c)
    }

    fn ensure(&self, upto: u64) -> Result<()> {
        let mut st = self.state.lock().unwrap();
        while (st.stages.len() as u64) <= upto {
            let i = st.stages.len() as u64;
            let rec = if i == 0 {
                StageRec {
                    improvement: vec![true; self.n],
                    k_least: vec![None; self.n],
                    values: (1..=self.n)
                        .map(|j| LinearOrder::composite_elem(j as u64, 1, rat(2, 1), -1))
                        .collect(),
                }
            } else {
                self.stage(&mut st, i)?
            };
            st.stages.push(rec);
        }
        Ok(())
    }

    fn stage(&self, st: &mut EngineState, i: u64) -> Result<StageRec> {
        let n = self.n;
        let mut k_least = vec![None; n];
        let mut improvement = vec![false; n];
        for j in 1..=n {
            let target = self.extension[j - 1];
            for k in st.previous[j - 1]..i {
                if self.observe(st, k, i)? == target {
                    k_least[j - 1] = Some(k);
                    improvement[j - 1] = true;
                    break;
                }
            }
        }
        debug_assert!(improvement.iter().any(|&b| b), "c(i-1,i) always improves its color");

        // m_j^i: largest m such that p_m improved in (previous_j(i), i]
        let improved_in_window = |st: &EngineState, lo: u64, m: usize| -> bool {
            if improvement[m - 1] {
                return true;
            }
            ((lo + 1)..i).any(|h| st.stages[h as usize].improvement[m - 1])
        };
        let mut m_of = vec![0usize; n];
        for j in 1..=n {
            if improvement[j - 1] {
                let lo = st.previous[j - 1];
                let m = (1..=n).rev().find(|&m| improved_in_window(st, lo, m));
                m_of[j - 1] = m.expect("j itself improved in its own window");
            }
        }
        let decrement_col = (1..=n)
            .filter(|&j| improvement[j - 1])
            .map(|j| m_of[j - 1])
            .max()
            .filter(|&j| !improvement[j - 1]);

        let prev_values = &st.stages[i as usize - 1].values;
        let mut values = Vec::with_capacity(n);
        for j in 1..=n {
            let prev = &prev_values[j - 1];
            let Elem::Tuple(parts) = prev else { unreachable!("composite values") };
            let (count, third, fourth) = match (&parts[1], &parts[2], &parts[3]) {
                (Elem::Nat(c), Elem::Rat(q), Elem::Int(d)) => (*c, q.clone(), *d),
                _ => unreachable!("composite values"),
            };
            let value = if improvement[j - 1] {
                let k = k_least[j - 1].expect("improving color has a witness");
                let bump = if m_of[j - 1] > j { 1 } else { 0 };
                LinearOrder::composite_elem(j as u64, count + bump, rat(1, (k + 1) as i64), -1)
            } else if decrement_col == Some(j) {
                if fourth - 1 < -(n as i64) {
                    return Err(Error::Invalid(format!(
                        "fourth coordinate of column {j} underflows at stage {i}; \
                         instance is not right-ordered"
                    )));
                }
                LinearOrder::composite_elem(j as u64, count, third, fourth - 1)
            } else {
                prev.clone()
            };
            values.push(value);
        }
        for j in 1..=n {
            if improvement[j - 1] {
                st.previous[j - 1] = i;
            }
        }
        Ok(StageRec { improvement, k_least, values })
    }

    pub fn improvement(&self, j: usize, i: u64) -> Result<bool> {
        self.ensure(i)?;
        Ok(self.state.lock().unwrap().stages[i as usize].improvement[j - 1])
    }

    pub fn k_least(&self, j: usize, i: u64) -> Result<Option<u64>> {
        self.ensure(i)?;
        Ok(self.state.lock().unwrap().stages[i as usize].k_least[j - 1])
    }

    /// Row σ_i = (a_n, …, a_1).
    pub fn row(&self, i: u64) -> Result<LexTuple> {
        self.ensure(i)?;
        let st = self.state.lock().unwrap();
        let mut entries = st.stages[i as usize].values.clone();
        entries.reverse();
        LexTuple::new(LinearOrder::CompositeNnqneg(self.n as u32), entries)
    }

    /// Column value a_j at stage i.
    pub fn column_value(&self, j: usize, i: u64) -> Result<Elem> {
        self.ensure(i)?;
        Ok(self.state.lock().unwrap().stages[i as usize].values[j - 1].clone())
    }
}

/// Produce the (ECT)^n instance (the n binary improvement streams) and the
/// descending Σ row stream for a right-ordered coloring.
pub fn ort_to_ectwop_forward(
    poset: FinitePoset,
    coloring: ColoringStream,
) -> Result<(Vec<UnaryColorStream>, DescendingStream<LexTuple>, Arc<OrtEctWopEngine>)> {
    let engine = OrtEctWopEngine::new(poset, coloring)?;
    let n = engine.n();
    let improvements = (1..=n)
        .map(|j| {
            let engine = Arc::clone(&engine);
            UnaryColorStream::new(2, move |i| Ok(engine.improvement(j, i)? as usize))
        })
        .collect();
    let sigma = {
        let engine = Arc::clone(&engine);
        DescendingStream::new(move |i| engine.row(i))
    };
    Ok((improvements, sigma, engine))
}

/// Recover an increasing homogeneous enumeration from ECT bounds for the
/// improvement streams and a solution of the Σ instance:
/// n₀ = max bounds, M = n(n₀+n), f(s) = (M+2) + s·n, y_s = 1/x_{f(s)}(3) − 1.
pub fn ort_to_ectwop_backward(
    n: usize,
    ect_bounds: &[u64],
    x: WitnessStream,
) -> Result<MonotoneNatStream> {
    ort_to_ectwop_backward_with_stride(n, ect_bounds, x, n as u64)
}

pub(crate) fn ort_to_ectwop_backward_with_stride(
    n: usize,
    ect_bounds: &[u64],
    x: WitnessStream,
    stride: u64,
) -> Result<MonotoneNatStream> {
    if ect_bounds.len() != n {
        return Err(Error::Invalid(format!(
            "{} bounds supplied for {n} improvement streams",
            ect_bounds.len()
        )));
    }
    let n0 = ect_bounds.iter().copied().max().unwrap_or(0);
    let m_bound = (n as u64) * (n0 + n as u64);
    let f = move |s: u64| (m_bound + 2) + s * stride;
    let extract = move |s: u64| -> Result<u64> {
        let (value, _) = x.get(f(s))?;
        let third = match &value {
            Elem::Tuple(parts) => match &parts[2] {
                Elem::Rat(q) => q.clone(),
                other => return Err(Error::MalformedValue(other.to_string())),
            },
            other => return Err(Error::MalformedValue(other.to_string())),
        };
        use num_traits::One;
        if !third.numer().is_one() || third.denom() < third.numer() {
            return Err(Error::NonUnitFraction(crate::order::rat_to_string(&third)));
        }
        let denom: u64 = third
            .denom()
            .try_into()
            .map_err(|_| Error::NonUnitFraction(crate::order::rat_to_string(&third)))?;
        Ok(denom - 1)
    };
    Ok(MonotoneNatStream::new(move |s| {
        let y = extract(s)?;
        if s > 0 {
            let prev = extract(s - 1)?;
            if y <= prev {
                return Err(Error::NotIncreasing(s));
            }
        }
        Ok(y)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::validate_descending;

    /// Single color, constant coloring: the recurrence from five stages by
    /// hand — improvement₁ ≡ 1, previous₁ = 0,0,1,2,3,…, k₁^i = i−1.
    #[test]
    fn single_color_recurrence() {
        let poset = FinitePoset::chain(1);
        let coloring = ColoringStream::new(1, |_x, _y| Ok(0));
        let (improvements, _sigma, engine) = ort_to_ectwop_forward(poset, coloring).unwrap();
        for i in 0..5 {
            assert_eq!(improvements[0].color(i).unwrap(), 1);
        }
        for i in 1..5 {
            assert_eq!(engine.k_least(1, i).unwrap(), Some(i - 1));
        }
    }

    #[test]
    fn stage_zero_row_is_fixed() {
        let poset = FinitePoset::chain(3);
        let coloring = ColoringStream::new(3, |_x, _y| Ok(1));
        let (_imp, sigma, _engine) = ort_to_ectwop_forward(poset, coloring).unwrap();
        let row0 = sigma.get(0).unwrap();
        assert_eq!(row0.to_string(), "((3,1,2/1,-1),(2,1,2/1,-1),(1,1,2/1,-1))");
    }

    #[test]
    fn sigma_streams_descend() {
        for seed in [2u64, 9, 31] {
            let inst = crate::catalog::gen_certified_instance(
                crate::catalog::ProblemTag::Ort,
                seed,
                &crate::catalog::GenParams { n: 3, ..Default::default() },
            )
            .unwrap();
            let crate::catalog::InstancePayload::Ort { poset, coloring } = inst.payload() else {
                unreachable!()
            };
            let (_imp, sigma, _engine) =
                ort_to_ectwop_forward(poset.clone(), coloring.clone()).unwrap();
            let report = validate_descending(&sigma, 300).unwrap();
            assert!(report.is_ok(), "seed {seed}: {:?}", report.verdict);
        }
    }

    /// Columns separate: a_j > a_{j'} whenever j > j' at any pair of stages.
    #[test]
    fn column_separation() {
        let inst = crate::catalog::gen_certified_instance(
            crate::catalog::ProblemTag::Ort,
            7,
            &crate::catalog::GenParams { n: 4, ..Default::default() },
        )
        .unwrap();
        let crate::catalog::InstancePayload::Ort { poset, coloring } = inst.payload() else {
            unreachable!()
        };
        let (_imp, _sigma, engine) =
            ort_to_ectwop_forward(poset.clone(), coloring.clone()).unwrap();
        let order = LinearOrder::CompositeNnqneg(4);
        for j in 2..=4usize {
            for i in (0..60).step_by(7) {
                for i2 in (0..60).step_by(11) {
                    let hi = engine.column_value(j, i).unwrap();
                    let lo = engine.column_value(j - 1, i2).unwrap();
                    assert_eq!(
                        order.compare(&hi, &lo).unwrap(),
                        std::cmp::Ordering::Greater
                    );
                }
            }
        }
    }

    #[test]
    fn extraction_formulas_match_hand_substitution() {
        // n=2, bounds (3,1): n₀=3, M=10, f(0)=12, f(1)=14
        let values: Vec<Elem> = (0..40)
            .map(|s| LinearOrder::composite_elem(2, 1, rat(1, s + 2), -1))
            .collect();
        let x = WitnessStream::new(LinearOrder::CompositeNnqneg(2), move |i| {
            Ok((values[i as usize].clone(), i))
        });
        let y = ort_to_ectwop_backward(2, &[3, 1], x).unwrap();
        // x_{12}(3) = 1/14 → y_0 = 13; x_{14}(3) = 1/16 → y_1 = 15
        assert_eq!(y.get(0).unwrap(), 13);
        assert_eq!(y.get(1).unwrap(), 15);
    }

    #[test]
    fn unit_fraction_inversion() {
        let x = WitnessStream::new(LinearOrder::CompositeNnqneg(1), move |i| {
            Ok((LinearOrder::composite_elem(1, 1, rat(1, 5), -1), i))
        });
        // stride 1, M = 1·(0+1) = 1, f(0) = 3: value 1/5 → y = 4
        let y = ort_to_ectwop_backward(1, &[0], x).unwrap();
        assert_eq!(y.get(0).unwrap(), 4);
    }

    #[test]
    fn non_unit_fractions_are_rejected() {
        let x = WitnessStream::new(LinearOrder::CompositeNnqneg(1), move |i| {
            Ok((LinearOrder::composite_elem(1, 1, rat(2, 3), -1), i))
        });
        let y = ort_to_ectwop_backward(1, &[0], x).unwrap();
        assert!(matches!(y.get(0), Err(Error::NonUnitFraction(_))));
    }
}
