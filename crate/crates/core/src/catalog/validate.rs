use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::catalog::gen::{Certificate, CertifiedInstance, InstancePayload};
use crate::catalog::poset::FinitePoset;
use crate::catalog::streams::{ColoringStream, DescendingStream, OrderedItem};
use crate::order::{is_contained, Elem};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationSite {
    Index(u64),
    Pair(u64, u64),
    Triple(u64, u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValidationVerdict {
    Ok,
    Violation { site: ViolationSite, detail: String },
}

/// Outcome of a bounded check. A violation always carries the earliest
/// reproducible counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checked_depth: u64,
    pub verdict: ValidationVerdict,
    pub elapsed_ms: u64,
}

impl ValidationReport {
    fn finish(checked_depth: u64, verdict: ValidationVerdict, start: Instant) -> Self {
        ValidationReport {
            checked_depth,
            verdict,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    pub fn is_ok(&self) -> bool {
        matches!(self.verdict, ValidationVerdict::Ok)
    }
}

/// Check c(x,y) ≤_P c(x,y′) for all x < y ≤ y′ < depth.
///
/// Consecutive pairs suffice for soundness (≤_P is transitive); on a hit the
/// full triple space is rescanned lexicographically so the reported
/// counterexample is the earliest one.
pub fn validate_right_ordered(
    poset: &FinitePoset,
    coloring: &ColoringStream,
    depth: u64,
) -> Result<ValidationReport> {
    assert!(depth >= 2, "right-ordered checks need depth >= 2");
    let start = Instant::now();
    let mut violated = false;
    'outer: for x in 0..depth {
        for y in (x + 1)..(depth - 1) {
            let a = coloring.color(x, y)?;
            let b = coloring.color(x, y + 1)?;
            if !poset.leq(a, b) {
                violated = true;
                break 'outer;
            }
        }
    }
    if !violated {
        return Ok(ValidationReport::finish(depth, ValidationVerdict::Ok, start));
    }
    for x in 0..depth {
        for y in (x + 1)..depth {
            for y2 in y..depth {
                let a = coloring.color(x, y)?;
                let b = if y2 == y { a } else { coloring.color(x, y2)? };
                if !poset.leq(a, b) {
                    return Ok(ValidationReport::finish(
                        depth,
                        ValidationVerdict::Violation {
                            site: ViolationSite::Triple(x, y, y2),
                            detail: format!("c({x},{y})={a} not below c({x},{y2})={b}"),
                        },
                        start,
                    ));
                }
            }
        }
    }
    unreachable!("violation seen on the fast path must reappear in the full scan")
}

/// Verify strict descent for indices 0..depth−1.
pub fn validate_descending<T: OrderedItem>(
    stream: &DescendingStream<T>,
    depth: u64,
) -> Result<ValidationReport> {
    assert!(depth >= 2, "descent checks need depth >= 2");
    let start = Instant::now();
    let mut prev = stream.get(0)?;
    for i in 1..depth {
        let cur = stream.get(i)?;
        if cur.cmp_item(&prev)? != std::cmp::Ordering::Less {
            return Ok(ValidationReport::finish(
                depth,
                ValidationVerdict::Violation {
                    site: ViolationSite::Index(i),
                    detail: format!("{} not below {}", cur.render(), prev.render()),
                },
                start,
            ));
        }
        prev = cur;
    }
    Ok(ValidationReport::finish(depth, ValidationVerdict::Ok, start))
}

/// A finite chunk of a proposed solution, shaped per problem tag.
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionPrefix {
    EctBound(u64),
    TcnChoices(Vec<u64>),
    /// Values with source-term hints.
    Wop(Vec<(Elem, u64)>),
    OrtSet(Vec<u64>),
}

/// Per-tag solution check. ECT and TC_N consult the instance certificate
/// (their conditions are not decidable from prefixes alone).
pub fn validate_solution_prefix(
    inst: &CertifiedInstance,
    prefix: &SolutionPrefix,
) -> Result<ValidationReport> {
    let start = Instant::now();
    let fail = |site, detail: String, depth| {
        Ok(ValidationReport::finish(
            depth,
            ValidationVerdict::Violation { site, detail },
            start,
        ))
    };
    match (inst.payload(), prefix) {
        (InstancePayload::Ort { coloring, .. }, SolutionPrefix::OrtSet(xs)) => {
            let depth = xs.len() as u64;
            for w in xs.windows(2) {
                if w[1] <= w[0] {
                    return fail(
                        ViolationSite::Pair(w[0], w[1]),
                        "set not strictly increasing".into(),
                        depth,
                    );
                }
            }
            if xs.len() >= 2 {
                let c_star = coloring.color(xs[0], xs[1])?;
                for (i, &a) in xs.iter().enumerate() {
                    for &b in &xs[i + 1..] {
                        let c = coloring.color(a, b)?;
                        if c != c_star {
                            return fail(
                                ViolationSite::Pair(a, b),
                                format!("pair color {c} differs from {c_star}"),
                                depth,
                            );
                        }
                    }
                }
            }
            Ok(ValidationReport::finish(depth, ValidationVerdict::Ok, start))
        }
        (InstancePayload::WopOmega { base, stream }, SolutionPrefix::Wop(values)) => {
            let depth = values.len() as u64;
            for (i, w) in values.windows(2).enumerate() {
                if base.compare(&w[1].0, &w[0].0)? != std::cmp::Ordering::Less {
                    return fail(
                        ViolationSite::Index(i as u64 + 1),
                        "values not strictly descending".into(),
                        depth,
                    );
                }
            }
            let max_hint = values.iter().map(|(_, t)| *t).max().unwrap_or(0);
            let sigma = stream.prefix(max_hint + 1)?;
            let hinted: Vec<(Elem, usize)> =
                values.iter().map(|(v, t)| (v.clone(), *t as usize)).collect();
            if !is_contained(&hinted, &sigma) {
                return fail(
                    ViolationSite::Index(0),
                    "values not contained in the instance".into(),
                    depth,
                );
            }
            Ok(ValidationReport::finish(depth, ValidationVerdict::Ok, start))
        }
        (InstancePayload::WopLex { base, stream, .. }, SolutionPrefix::Wop(values)) => {
            let depth = values.len() as u64;
            for (i, w) in values.windows(2).enumerate() {
                if base.compare(&w[1].0, &w[0].0)? != std::cmp::Ordering::Less {
                    return fail(
                        ViolationSite::Index(i as u64 + 1),
                        "values not strictly descending".into(),
                        depth,
                    );
                }
            }
            let mut last = 0u64;
            for (i, (v, t)) in values.iter().enumerate() {
                let row = stream.get(*t)?;
                if *t < last || !row.mentions(v) {
                    return fail(
                        ViolationSite::Index(i as u64),
                        format!("value {v} not drawn in order from row {t}"),
                        depth,
                    );
                }
                last = *t;
            }
            Ok(ValidationReport::finish(depth, ValidationVerdict::Ok, start))
        }
        (InstancePayload::Ect(f), SolutionPrefix::EctBound(bound)) => {
            let Certificate::Ect { stabilization_index, tail_palette } = inst.certificate()
            else {
                return Err(Error::CertificateMismatch("expected an ECT certificate".into()));
            };
            // every color occurring after the bound must be tail palette;
            // past the certified index the schedule is tail-only, so the
            // certificate reduces the check to a finite window.
            let hi = stabilization_index.max(bound) + 64;
            for x in (bound + 1)..=hi {
                let c = f.color(x)?;
                if !tail_palette.contains(&c) {
                    return fail(
                        ViolationSite::Index(x),
                        format!("color {c} at {x} is not in the tail palette"),
                        hi,
                    );
                }
            }
            Ok(ValidationReport::finish(hi, ValidationVerdict::Ok, start))
        }
        (InstancePayload::Tcn(streams), SolutionPrefix::TcnChoices(choices)) => {
            let Certificate::Tcn { withheld } = inst.certificate() else {
                return Err(Error::CertificateMismatch("expected a TC_N certificate".into()));
            };
            if choices.len() != streams.len() {
                return Err(Error::CertificateMismatch(format!(
                    "{} choices for {} coordinates",
                    choices.len(),
                    streams.len()
                )));
            }
            for (m, (&choice, w)) in choices.iter().zip(withheld).enumerate() {
                if !w.is_empty() && !w.contains(&choice) {
                    return fail(
                        ViolationSite::Index(m as u64),
                        format!("coordinate {m}: {choice} is enumerated"),
                        choices.len() as u64,
                    );
                }
            }
            Ok(ValidationReport::finish(choices.len() as u64, ValidationVerdict::Ok, start))
        }
        _ => Err(Error::UnknownTag(format!(
            "prefix shape does not match instance tag {:?}",
            inst.tag
        ))),
    }
}

/// Check that a generated instance is what its certificate claims, to the
/// requested depth. Generators guarantee this by construction; the harness
/// spot-checks anyway.
pub fn validate_certificate(inst: &CertifiedInstance, depth: u64) -> Result<ValidationReport> {
    let start = Instant::now();
    match (inst.payload(), inst.certificate()) {
        (InstancePayload::Ect(f), Certificate::Ect { stabilization_index, tail_palette }) => {
            let mut seen = std::collections::BTreeSet::new();
            for x in (stabilization_index + 1)..(stabilization_index + 1 + depth) {
                let c = f.color(x)?;
                if !tail_palette.contains(&c) {
                    return Ok(ValidationReport::finish(
                        depth,
                        ValidationVerdict::Violation {
                            site: ViolationSite::Index(x),
                            detail: format!("non-tail color {c} after the stabilization index"),
                        },
                        start,
                    ));
                }
                seen.insert(c);
            }
            if &seen != tail_palette {
                return Ok(ValidationReport::finish(
                    depth,
                    ValidationVerdict::Violation {
                        site: ViolationSite::Index(*stabilization_index),
                        detail: "tail palette not exhausted within depth".into(),
                    },
                    start,
                ));
            }
            Ok(ValidationReport::finish(depth, ValidationVerdict::Ok, start))
        }
        (InstancePayload::Tcn(streams), Certificate::Tcn { withheld }) => {
            for (m, (e, w)) in streams.iter().zip(withheld).enumerate() {
                for i in 0..depth {
                    if w.contains(&e.value(i)) {
                        return Ok(ValidationReport::finish(
                            depth,
                            ValidationVerdict::Violation {
                                site: ViolationSite::Pair(m as u64, i),
                                detail: format!("coordinate {m} enumerates a withheld value"),
                            },
                            start,
                        ));
                    }
                }
            }
            Ok(ValidationReport::finish(depth, ValidationVerdict::Ok, start))
        }
        (InstancePayload::WopOmega { stream, .. }, Certificate::Wop { planted_position, witness }) => {
            let r = validate_descending(stream, depth)?;
            if !r.is_ok() {
                return Ok(r);
            }
            let take = depth.min(64);
            let values = witness.prefix(take)?;
            for (v, t) in &values {
                let term = stream.get(*t)?;
                match term.component(*planted_position) {
                    crate::order::Component::Coefficient(c) if &c == v => {}
                    _ => {
                        return Ok(ValidationReport::finish(
                            depth,
                            ValidationVerdict::Violation {
                                site: ViolationSite::Index(*t),
                                detail: "witness does not sit at the planted position".into(),
                            },
                            start,
                        ));
                    }
                }
            }
            let sol = SolutionPrefix::Wop(values);
            validate_solution_prefix(inst, &sol)
        }
        (InstancePayload::WopLex { stream, .. }, Certificate::Wop { planted_position, witness }) => {
            let r = validate_descending(stream, depth)?;
            if !r.is_ok() {
                return Ok(r);
            }
            let take = depth.min(64);
            let values = witness.prefix(take)?;
            for (v, t) in &values {
                let row = stream.get(*t)?;
                if row.component(*planted_position as usize) != Some(v) {
                    return Ok(ValidationReport::finish(
                        depth,
                        ValidationVerdict::Violation {
                            site: ViolationSite::Index(*t),
                            detail: "witness does not sit at the planted slot".into(),
                        },
                        start,
                    ));
                }
            }
            let sol = SolutionPrefix::Wop(values);
            validate_solution_prefix(inst, &sol)
        }
        (InstancePayload::Ort { poset, coloring }, Certificate::Ort { homogeneous, .. }) => {
            let r = validate_right_ordered(poset, coloring, depth.min(256))?;
            if !r.is_ok() {
                return Ok(r);
            }
            let sol = SolutionPrefix::OrtSet(homogeneous.prefix(depth.min(100))?);
            validate_solution_prefix(inst, &sol)
        }
        _ => Err(Error::CertificateMismatch("certificate/payload tag mismatch".into())),
    }
}
