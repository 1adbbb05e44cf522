use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::poset::FinitePoset;
use crate::catalog::streams::{
    ColoringStream, DescendingStream, EnumerationStream, MonotoneNatStream, UnaryColorStream,
    WitnessStream,
};
use crate::order::{rat, Elem, LexTuple, LinearOrder, OmegaTerm};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemTag {
    Ect,
    Tcn,
    WopOmega,
    WopLex,
    Ort,
}

impl ProblemTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemTag::Ect => "ect",
            ProblemTag::Tcn => "tcn",
            ProblemTag::WopOmega => "wop-omega",
            ProblemTag::WopLex => "wop-lex",
            ProblemTag::Ort => "ort",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ect" => Ok(ProblemTag::Ect),
            "tcn" => Ok(ProblemTag::Tcn),
            "wop-omega" => Ok(ProblemTag::WopOmega),
            "wop-lex" => Ok(ProblemTag::WopLex),
            "ort" => Ok(ProblemTag::Ort),
            other => Err(Error::UnknownTag(other.into())),
        }
    }
}

/// Base order used by the WOP generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseKind {
    Rationals,
    ReversedIntegers,
    Composite(u32),
}

impl BaseKind {
    pub fn order(&self) -> LinearOrder {
        match self {
            BaseKind::Rationals => LinearOrder::Rationals,
            BaseKind::ReversedIntegers => LinearOrder::ReversedIntegers,
            BaseKind::Composite(n) => LinearOrder::CompositeNnqneg(*n),
        }
    }
}

/// Which ORT family to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrtFamily {
    /// Settled staircase coloring over a chain poset; supports pipeline
    /// certificate transport.
    Staircase,
    /// Image of a planted WOP(X^ω) instance under the forward translation,
    /// with the certificate transported.
    WopImage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    /// Colors (ECT/ORT), coordinates (TC_N), or tuple width (WOP lex).
    pub n: u32,
    pub base: BaseKind,
    pub stage_budget: u64,
    pub ort_family: OrtFamily,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 2,
            base: BaseKind::Rationals,
            stage_budget: 200,
            ort_family: OrtFamily::Staircase,
        }
    }
}

/// Planted structure of a staircase ORT instance, carried in the certificate
/// so the harness can transport it into pipeline certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseSchedule {
    /// First row from which every row is constant.
    pub settle: u64,
    pub period: u64,
    pub sparse_residue: u64,
    pub top_color: usize,
}

/// Hidden ground truth attached to a generated instance. Reduction
/// functionals never receive this; reads are counted so the harness can
/// assert that.
pub enum Certificate {
    Ect { stabilization_index: u64, tail_palette: BTreeSet<usize> },
    Tcn { withheld: Vec<BTreeSet<u64>> },
    Wop { planted_position: u64, witness: WitnessStream },
    Ort {
        true_color_index: usize,
        homogeneous: MonotoneNatStream,
        schedule: Option<StaircaseSchedule>,
    },
}

pub enum InstancePayload {
    Ect(UnaryColorStream),
    Tcn(Vec<EnumerationStream>),
    WopOmega { base: LinearOrder, stream: DescendingStream<OmegaTerm> },
    WopLex { base: LinearOrder, width: usize, stream: DescendingStream<LexTuple> },
    Ort { poset: FinitePoset, coloring: ColoringStream },
}

/// A problem instance bundled with its certificate.
pub struct CertifiedInstance {
    pub tag: ProblemTag,
    pub seed: u64,
    pub params: GenParams,
    payload: InstancePayload,
    cert: Certificate,
    cert_reads: AtomicU64,
}

impl CertifiedInstance {
    pub fn new(tag: ProblemTag, seed: u64, params: GenParams, payload: InstancePayload, cert: Certificate) -> Self {
        CertifiedInstance { tag, seed, params, payload, cert, cert_reads: AtomicU64::new(0) }
    }

    pub fn payload(&self) -> &InstancePayload {
        &self.payload
    }

    /// Certificate access is traced: the harness asserts the read counter
    /// does not move while a reduction functional runs.
    pub fn certificate(&self) -> &Certificate {
        self.cert_reads.fetch_add(1, AtomicOrdering::Relaxed);
        &self.cert
    }

    pub fn cert_reads(&self) -> u64 {
        self.cert_reads.load(AtomicOrdering::Relaxed)
    }
}

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, salt))
}

/// Deterministic certified instance generator. Identical (tag, seed, params)
/// yield bitwise-identical instances to any depth.
pub fn gen_certified_instance(tag: ProblemTag, seed: u64, params: &GenParams) -> Result<CertifiedInstance> {
    match tag {
        ProblemTag::Ect => gen_ect(seed, params),
        ProblemTag::Tcn => gen_tcn(seed, params),
        ProblemTag::WopOmega => gen_wop_omega(seed, params),
        ProblemTag::WopLex => gen_wop_lex(seed, params),
        ProblemTag::Ort => gen_ort(seed, params),
    }
}

// ---------------------------------------------------------------------------
// ECT: piecewise palette schedule with a planted stabilization index.
// ---------------------------------------------------------------------------

fn gen_ect(seed: u64, params: &GenParams) -> Result<CertifiedInstance> {
    let n = params.n as usize;
    if !(1..=6).contains(&n) {
        return Err(Error::ParamsOutOfRange(format!("ECT colors n={n} not in 1..=6")));
    }
    let mut rng = rng_for(seed, 0xec7);
    let stabilization: u64 = rng.gen_range(5..=40);
    let tail_size = rng.gen_range(1..=n);
    let mut colors: Vec<usize> = (0..n).collect();
    colors.shuffle(&mut rng);
    let tail_vec: Vec<usize> = {
        let mut t = colors[..tail_size].to_vec();
        t.sort_unstable();
        t
    };
    let tail_palette: BTreeSet<usize> = tail_vec.iter().copied().collect();
    let prefix: Vec<usize> = (0..=stabilization).map(|_| rng.gen_range(0..n)).collect();
    let phase: u64 = rng.gen_range(0..tail_vec.len() as u64);

    let f = {
        let tail_vec = tail_vec.clone();
        move |x: u64| -> Result<usize> {
            if x <= stabilization {
                Ok(prefix[x as usize])
            } else {
                let k = (x - stabilization - 1 + phase) % tail_vec.len() as u64;
                Ok(tail_vec[k as usize])
            }
        }
    };
    Ok(CertifiedInstance::new(
        ProblemTag::Ect,
        seed,
        params.clone(),
        InstancePayload::Ect(UnaryColorStream::new(n, f)),
        Certificate::Ect { stabilization_index: stabilization, tail_palette },
    ))
}

// ---------------------------------------------------------------------------
// TC_N: per-coordinate enumerations of N minus a planted finite withheld set
// (or all of N), emitted in seeded block-shuffled order.
// ---------------------------------------------------------------------------

fn nth_outside(k: u64, withheld: &BTreeSet<u64>) -> u64 {
    let mut v = k;
    for &w in withheld {
        if w <= v {
            v += 1;
        }
    }
    v
}

fn gen_tcn(seed: u64, params: &GenParams) -> Result<CertifiedInstance> {
    let n = params.n as usize;
    if !(1..=3).contains(&n) {
        return Err(Error::ParamsOutOfRange(format!("TC_N arity n={n} not in 1..=3")));
    }
    let mut rng = rng_for(seed, 0x7c2);
    let mut withheld = Vec::with_capacity(n);
    let mut streams = Vec::with_capacity(n);
    for m in 0..n {
        let set: BTreeSet<u64> = if rng.gen_bool(0.3) {
            BTreeSet::new()
        } else {
            let size = rng.gen_range(1..=2usize);
            let mut s = BTreeSet::new();
            while s.len() < size {
                s.insert(rng.gen_range(0..=7u64));
            }
            s
        };
        let w = set.clone();
        let block_seed = mix(seed, 0x7c2_0000 + m as u64);
        let e = move |i: u64| -> u64 {
            let block = i / 8;
            let pos = (i % 8) as usize;
            let mut perm: Vec<u64> = (0..8).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(mix(block_seed, block)));
            nth_outside(block * 8 + perm[pos], &w)
        };
        streams.push(EnumerationStream::new(e));
        withheld.push(set);
    }
    Ok(CertifiedInstance::new(
        ProblemTag::Tcn,
        seed,
        params.clone(),
        InstancePayload::Tcn(streams),
        Certificate::Tcn { withheld },
    ))
}

// ---------------------------------------------------------------------------
// WOP(X^ω): seeded descending terms with a planted forever-descending
// coefficient slot, interleaved with prefix-chop stages so the prefix case
// of the pair coloring gets exercised.
// ---------------------------------------------------------------------------

struct WopOmegaStage {
    term: OmegaTerm,
    /// True when the planted slot strictly descended at this stage.
    descend: bool,
    slot_value: Elem,
}

struct WopOmegaEngine {
    base: LinearOrder,
    prefix: Vec<(u64, Elem)>,
    slot_exp: u64,
    state: Mutex<WopOmegaEngineState>,
}

struct WopOmegaEngineState {
    rng: ChaCha8Rng,
    stages: Vec<WopOmegaStage>,
    descend_stages: Vec<u64>,
    chop_run: u32,
}

fn seeded_elem(base: &LinearOrder, rng: &mut ChaCha8Rng) -> Elem {
    match base {
        LinearOrder::Rationals => Elem::Rat(rat(rng.gen_range(-9..=9), rng.gen_range(1..=6))),
        LinearOrder::ReversedIntegers => Elem::Int(rng.gen_range(-20..=20)),
        LinearOrder::CompositeNnqneg(m) => LinearOrder::composite_elem(
            rng.gen_range(1..=u64::from(*m)),
            rng.gen_range(0..8),
            rat(rng.gen_range(-6..=6), rng.gen_range(1..=4)),
            rng.gen_range(-i64::from(*m)..=-1),
        ),
        other => panic!("no seeded sampler for {other:?}"),
    }
}

fn descend_elem(base: &LinearOrder, prev: &Elem, rng: &mut ChaCha8Rng) -> Elem {
    match (base, prev) {
        (LinearOrder::Rationals, Elem::Rat(q)) => {
            Elem::Rat(q - rat(rng.gen_range(1..=3), rng.gen_range(1..=4)))
        }
        (LinearOrder::ReversedIntegers, Elem::Int(i)) => Elem::Int(i + rng.gen_range(1..=3)),
        (LinearOrder::CompositeNnqneg(_), Elem::Tuple(parts)) => {
            let mut parts = parts.clone();
            if let Elem::Rat(q) = &parts[2] {
                parts[2] = Elem::Rat(q - rat(rng.gen_range(1..=3), rng.gen_range(1..=4)));
            }
            Elem::Tuple(parts)
        }
        _ => panic!("descend sampler shape mismatch"),
    }
}

impl WopOmegaEngine {
    fn tail(&self, rng: &mut ChaCha8Rng) -> Vec<(u64, Elem)> {
        let mut tail = Vec::new();
        let want = rng.gen_range(0..=2usize);
        let mut ceiling = self.slot_exp;
        for _ in 0..want {
            if ceiling == 0 {
                break;
            }
            let e = rng.gen_range(0..ceiling);
            tail.push((e, seeded_elem(&self.base, rng)));
            ceiling = e;
        }
        tail
    }

    fn ensure(&self, upto: u64) {
        let mut st = self.state.lock().unwrap();
        while (st.stages.len() as u64) <= upto {
            let idx = st.stages.len() as u64;
            let stage = if idx == 0 {
                let mut rng = st.rng.clone();
                let w = seeded_elem(&self.base, &mut rng);
                let tail = self.tail(&mut rng);
                st.rng = rng;
                let mut pairs = self.prefix.clone();
                pairs.push((self.slot_exp, w.clone()));
                pairs.extend(tail);
                WopOmegaStage {
                    term: OmegaTerm::new(self.base.clone(), pairs).expect("generated term valid"),
                    descend: true,
                    slot_value: w,
                }
            } else {
                let prev_term = st.stages[idx as usize - 1].term.clone();
                let prev_value = st.stages[idx as usize - 1].slot_value.clone();
                let tail_len = prev_term.pairs().len() - (self.prefix.len() + 1);
                let mut rng = st.rng.clone();
                let chop = tail_len > 0 && st.chop_run < 2 && rng.gen_bool(0.4);
                let stage = if chop {
                    st.chop_run += 1;
                    let mut pairs = prev_term.pairs().to_vec();
                    pairs.pop();
                    WopOmegaStage {
                        term: OmegaTerm::new(self.base.clone(), pairs).expect("chopped term valid"),
                        descend: false,
                        slot_value: prev_value,
                    }
                } else {
                    st.chop_run = 0;
                    let w = descend_elem(&self.base, &prev_value, &mut rng);
                    let tail = self.tail(&mut rng);
                    let mut pairs = self.prefix.clone();
                    pairs.push((self.slot_exp, w.clone()));
                    pairs.extend(tail);
                    WopOmegaStage {
                        term: OmegaTerm::new(self.base.clone(), pairs).expect("generated term valid"),
                        descend: true,
                        slot_value: w,
                    }
                };
                st.rng = rng;
                stage
            };
            if stage.descend {
                st.descend_stages.push(idx);
            }
            st.stages.push(stage);
        }
    }

    fn term(&self, i: u64) -> OmegaTerm {
        self.ensure(i);
        self.state.lock().unwrap().stages[i as usize].term.clone()
    }

    /// k-th stage at which the planted slot strictly descended.
    fn witness(&self, k: u64) -> (Elem, u64) {
        loop {
            {
                let st = self.state.lock().unwrap();
                if let Some(&stage) = st.descend_stages.get(k as usize) {
                    return (st.stages[stage as usize].slot_value.clone(), stage);
                }
                let next = st.stages.len() as u64;
                drop(st);
                self.ensure(next + 8);
            }
        }
    }
}

fn gen_wop_omega(seed: u64, params: &GenParams) -> Result<CertifiedInstance> {
    let base = params.base.order();
    let mut rng = rng_for(seed, 0x30e6a);
    let slot = rng.gen_range(0..=2usize);
    let slot_exp = rng.gen_range(2..=4u64);
    let mut prefix = Vec::with_capacity(slot);
    for i in 0..slot {
        prefix.push((slot_exp + (slot - i) as u64, seeded_elem(&base, &mut rng)));
    }
    let engine = std::sync::Arc::new(WopOmegaEngine {
        base: base.clone(),
        prefix,
        slot_exp,
        state: Mutex::new(WopOmegaEngineState {
            rng,
            stages: Vec::new(),
            descend_stages: Vec::new(),
            chop_run: 0,
        }),
    });
    let stream = {
        let engine = std::sync::Arc::clone(&engine);
        DescendingStream::new(move |i| Ok(engine.term(i)))
    };
    let witness = {
        let engine = std::sync::Arc::clone(&engine);
        WitnessStream::new(base.clone(), move |k| Ok(engine.witness(k)))
    };
    Ok(CertifiedInstance::new(
        ProblemTag::WopOmega,
        seed,
        params.clone(),
        InstancePayload::WopOmega { base, stream },
        Certificate::Wop { planted_position: 2 * slot as u64 + 1, witness },
    ))
}

// ---------------------------------------------------------------------------
// WOP(X^n_lex): phased column descents ending in a forever-descending final
// slot, mimicking the column-switching shape of the diagonalization
// sequences.
// ---------------------------------------------------------------------------

struct WopLexEngine {
    base: LinearOrder,
    width: usize,
    final_slot: usize,
    /// Pre-phase plan: (slot, remaining stages), slots strictly decreasing
    /// and all greater than `final_slot`.
    state: Mutex<WopLexEngineState>,
}

struct WopLexEngineState {
    rng: ChaCha8Rng,
    plan: Vec<(usize, u32)>,
    rows: Vec<LexTuple>,
    current: Vec<Elem>,
    witness: Vec<(Elem, u64)>,
}

impl WopLexEngine {
    fn ensure(&self, upto: u64) {
        let mut st = self.state.lock().unwrap();
        while (st.rows.len() as u64) <= upto {
            let idx = st.rows.len() as u64;
            let mut rng = st.rng.clone();
            if idx == 0 {
                let current: Vec<Elem> =
                    (0..self.width).map(|_| seeded_elem(&self.base, &mut rng)).collect();
                st.current = current.clone();
                st.rows
                    .push(LexTuple::new(self.base.clone(), current).expect("row valid"));
            } else {
                let slot = if let Some((s, left)) = st.plan.first_mut() {
                    let s = *s;
                    *left -= 1;
                    let done = *left == 0;
                    if done {
                        st.plan.remove(0);
                    }
                    s
                } else {
                    self.final_slot
                };
                let pos = self.width - slot;
                let smaller = descend_elem(&self.base, &st.current[pos], &mut rng);
                st.current[pos] = smaller.clone();
                for p in (pos + 1)..self.width {
                    st.current[p] = seeded_elem(&self.base, &mut rng);
                }
                let row = LexTuple::new(self.base.clone(), st.current.clone()).expect("row valid");
                if slot == self.final_slot {
                    st.witness.push((smaller, idx));
                }
                st.rows.push(row);
            }
            st.rng = rng;
        }
    }

    fn row(&self, i: u64) -> LexTuple {
        self.ensure(i);
        self.state.lock().unwrap().rows[i as usize].clone()
    }

    fn witness(&self, k: u64) -> (Elem, u64) {
        loop {
            {
                let st = self.state.lock().unwrap();
                if let Some(w) = st.witness.get(k as usize) {
                    return w.clone();
                }
                let next = st.rows.len() as u64;
                drop(st);
                self.ensure(next + 8);
            }
        }
    }
}

fn gen_wop_lex(seed: u64, params: &GenParams) -> Result<CertifiedInstance> {
    let width = params.n as usize;
    if !(1..=8).contains(&width) {
        return Err(Error::ParamsOutOfRange(format!("lex width n={width} not in 1..=8")));
    }
    let base = params.base.order();
    let mut rng = rng_for(seed, 0x1e4);
    let final_slot = rng.gen_range(1..=width);
    let mut plan = Vec::new();
    if final_slot < width {
        let phases = rng.gen_range(0..=2usize);
        let mut slots: Vec<usize> = ((final_slot + 1)..=width).collect();
        slots.shuffle(&mut rng);
        let mut chosen = slots[..phases.min(slots.len())].to_vec();
        chosen.sort_unstable_by(|a, b| b.cmp(a));
        for s in chosen {
            plan.push((s, rng.gen_range(1..=3u32)));
        }
    }
    let engine = std::sync::Arc::new(WopLexEngine {
        base: base.clone(),
        width,
        final_slot,
        state: Mutex::new(WopLexEngineState {
            rng,
            plan,
            rows: Vec::new(),
            current: Vec::new(),
            witness: Vec::new(),
        }),
    });
    let stream = {
        let engine = std::sync::Arc::clone(&engine);
        DescendingStream::new(move |i| Ok(engine.row(i)))
    };
    let witness = {
        let engine = std::sync::Arc::clone(&engine);
        WitnessStream::new(base.clone(), move |k| Ok(engine.witness(k)))
    };
    Ok(CertifiedInstance::new(
        ProblemTag::WopLex,
        seed,
        params.clone(),
        InstancePayload::WopLex { base, width, stream },
        Certificate::Wop { planted_position: final_slot as u64, witness },
    ))
}

// ---------------------------------------------------------------------------
// ORT: settled staircase coloring over a chain poset, or the forward image
// of a planted WOP instance with the certificate transported.
// ---------------------------------------------------------------------------

fn gen_ort(seed: u64, params: &GenParams) -> Result<CertifiedInstance> {
    let n = params.n as usize;
    if !(1..=6).contains(&n) {
        return Err(Error::ParamsOutOfRange(format!("ORT poset size n={n} not in 1..=6")));
    }
    match params.ort_family {
        OrtFamily::Staircase => gen_ort_staircase(seed, params, n),
        OrtFamily::WopImage => gen_ort_wop_image(seed, params),
    }
}

fn gen_ort_staircase(seed: u64, params: &GenParams, n: usize) -> Result<CertifiedInstance> {
    let mut rng = rng_for(seed, 0x027);
    let settle: u64 = rng.gen_range(8..=14);
    let period: u64 = rng.gen_range(2..=4);
    let sparse_residue: u64 = if period == 2 { 1 } else { rng.gen_range(1..period) };
    let top = n - 1;
    let sparse = if n >= 3 { n - 2 } else { 0 };
    let dense = if n >= 3 { 0 } else { top };
    let eventual: Vec<usize> = (0..settle).map(|_| rng.gen_range(0..n)).collect();
    let start: Vec<usize> = eventual.iter().map(|&e| rng.gen_range(0..=e)).collect();
    let step: Vec<u64> = (0..settle).map(|_| rng.gen_range(1..=4)).collect();

    let row_color = move |x: u64| -> usize {
        if n == 1 {
            0
        } else if x % period == 0 {
            top
        } else if x % period == sparse_residue {
            sparse
        } else {
            dense
        }
    };
    let coloring = {
        let eventual = eventual.clone();
        move |x: u64, y: u64| -> Result<usize> {
            Ok(if x >= settle {
                row_color(x)
            } else if y >= settle {
                eventual[x as usize]
            } else {
                let climbed = start[x as usize] as u64 + (y - x - 1) / step[x as usize];
                (eventual[x as usize] as u64).min(climbed) as usize
            })
        }
    };
    let first_top = if n == 1 { settle } else { settle.div_ceil(period) * period };
    let stride = if n == 1 { 1 } else { period };
    let homogeneous = MonotoneNatStream::new(move |k| Ok(first_top + k * stride));
    Ok(CertifiedInstance::new(
        ProblemTag::Ort,
        seed,
        params.clone(),
        InstancePayload::Ort {
            poset: FinitePoset::chain(n),
            coloring: ColoringStream::new(n, coloring),
        },
        Certificate::Ort {
            true_color_index: top,
            homogeneous,
            schedule: Some(StaircaseSchedule { settle, period, sparse_residue, top_color: top }),
        },
    ))
}

fn gen_ort_wop_image(seed: u64, params: &GenParams) -> Result<CertifiedInstance> {
    let inner = gen_wop_omega(mix(seed, 0x1147), params)?;
    let InstancePayload::WopOmega { stream, .. } = inner.payload() else { unreachable!() };
    let (poset, coloring) = crate::reductions::wop_to_ort_forward(stream.clone())?;
    let Certificate::Wop { planted_position, witness } = inner.certificate() else {
        unreachable!()
    };
    let homogeneous = {
        let witness = witness.clone();
        MonotoneNatStream::new(move |k| Ok(witness.get(k)?.1))
    };
    Ok(CertifiedInstance::new(
        ProblemTag::Ort,
        seed,
        params.clone(),
        InstancePayload::Ort { poset, coloring },
        Certificate::Ort {
            true_color_index: *planted_position as usize,
            homogeneous,
            schedule: None,
        },
    ))
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateSummary {
    Ect { stabilization_index: u64, tail_palette: Vec<usize> },
    Tcn { withheld: Vec<Vec<u64>> },
    Wop { planted_position: u64, witness_sample: Vec<String> },
    Ort { true_color_index: usize, homogeneous_sample: Vec<u64> },
}

/// One JSON object per instance; dump → load → dump is bit-exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub tag: String,
    pub seed: u64,
    pub params: GenParams,
    pub certificate: CertificateSummary,
    pub prefix_sample: Vec<String>,
}

const FIXTURE_SAMPLE: u64 = 12;

impl Fixture {
    pub fn of(inst: &CertifiedInstance) -> Result<Fixture> {
        let prefix_sample = match inst.payload() {
            InstancePayload::Ect(f) => (0..2 * FIXTURE_SAMPLE)
                .map(|x| Ok(f.color(x)?.to_string()))
                .collect::<Result<Vec<_>>>()?,
            InstancePayload::Tcn(streams) => (0..FIXTURE_SAMPLE)
                .map(|i| {
                    let parts: Vec<String> =
                        streams.iter().map(|e| e.value(i).to_string()).collect();
                    Ok(format!("({})", parts.join(",")))
                })
                .collect::<Result<Vec<_>>>()?,
            InstancePayload::WopOmega { stream, .. } => (0..FIXTURE_SAMPLE)
                .map(|i| Ok(stream.get(i)?.to_string()))
                .collect::<Result<Vec<_>>>()?,
            InstancePayload::WopLex { stream, .. } => (0..FIXTURE_SAMPLE)
                .map(|i| Ok(stream.get(i)?.to_string()))
                .collect::<Result<Vec<_>>>()?,
            InstancePayload::Ort { poset, coloring } => {
                let mut out = vec![format!("poset:{}", poset.size())];
                for i in 0..FIXTURE_SAMPLE {
                    out.push(coloring.color(i, i + 1)?.to_string());
                }
                out
            }
        };
        let certificate = match inst.certificate() {
            Certificate::Ect { stabilization_index, tail_palette } => CertificateSummary::Ect {
                stabilization_index: *stabilization_index,
                tail_palette: tail_palette.iter().copied().collect(),
            },
            Certificate::Tcn { withheld } => CertificateSummary::Tcn {
                withheld: withheld.iter().map(|s| s.iter().copied().collect()).collect(),
            },
            Certificate::Wop { planted_position, witness } => CertificateSummary::Wop {
                planted_position: *planted_position,
                witness_sample: witness
                    .prefix(FIXTURE_SAMPLE)?
                    .into_iter()
                    .map(|(v, t)| format!("{v}@{t}"))
                    .collect(),
            },
            Certificate::Ort { true_color_index, homogeneous, .. } => CertificateSummary::Ort {
                true_color_index: *true_color_index,
                homogeneous_sample: homogeneous.prefix(FIXTURE_SAMPLE)?,
            },
        };
        Ok(Fixture {
            tag: inst.tag.as_str().into(),
            seed: inst.seed,
            params: inst.params.clone(),
            certificate,
            prefix_sample,
        })
    }

    /// Regenerate the instance this fixture describes and confirm the dump
    /// matches bit-exactly.
    pub fn check(&self) -> Result<()> {
        let tag = ProblemTag::parse(&self.tag)?;
        let inst = gen_certified_instance(tag, self.seed, &self.params)?;
        let fresh = Fixture::of(&inst)?;
        if &fresh != self {
            return Err(Error::CertificateMismatch(
                "fixture does not match its regenerated instance".into(),
            ));
        }
        Ok(())
    }
}
