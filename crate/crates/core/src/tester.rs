//! The streaming testers: stream vs. reference function, stream vs. stream,
//! and marginals of a tuple stream, plus the per-level coherence test and
//! the running-minimum corrector.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{counts_close, DecayParams, Element, FrequencyFunction, Tolerances};
use crate::rat::{rat, Rat};
use crate::sampling::{build_schedule, LevelSchedule, ScheduleConfig};
use crate::spacesaving::CounterTable;

#[derive(Debug, Clone)]
pub struct TesterParams {
    pub tol: Tolerances,
    pub delta: Rat,
    pub decay: DecayParams,
    pub schedule: ScheduleConfig,
    /// expected domain size; verified against the reference when given
    pub declared_n: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

/// One row per level: the sampled counter and the three neighbor references
/// it was compared against, so a NO verdict is auditable offline.
#[derive(Debug, Clone)]
pub struct LevelEvidence {
    pub i: u64,
    pub z: u64,
    pub a: u64,
    pub r: u64,
    pub counter: u64,
    pub ref_prev: u64,
    pub ref_cur: u64,
    pub ref_next: u64,
    pub small: bool,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    pub failing_level: Option<u64>,
    pub evidence: Vec<LevelEvidence>,
}

impl Verdict {
    /// Structured line-oriented form: answer, failing level, one evidence
    /// line per level with fields "i z c ref_prev ref_cur ref_next pass".
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "answer={}\n",
            match self.answer {
                Answer::Yes => "YES",
                Answer::No => "NO",
            }
        ));
        match self.failing_level {
            Some(i) => out.push_str(&format!("failing_level={i}\n")),
            None => out.push_str("failing_level=none\n"),
        }
        for e in &self.evidence {
            out.push_str(&format!(
                "evidence={} {} {} {} {} {} {}\n",
                e.i,
                e.z,
                e.counter,
                e.ref_prev,
                e.ref_cur,
                e.ref_next,
                if e.pass { "pass" } else { "fail" }
            ));
        }
        out
    }

    /// Running-minimum corrector built from the per-level counters.
    pub fn corrector(&self) -> Corrector {
        build_corrector(self.evidence.iter().map(|e| (e.z, e.counter)))
    }
}

/// The per-level acceptance clause. Small-z levels see the whole stream and
/// must match the reference at z itself; subsampled levels may match any of
/// the neighbor ranks. All comparisons use 5*eps2 slack.
pub fn coherence_check(
    small: bool,
    c: u64,
    f_prev: u64,
    f_cur: u64,
    f_next: u64,
    eps2: &Rat,
) -> bool {
    let slack = eps2 * rat(5);
    if small {
        counts_close(c, f_cur, &slack)
    } else {
        counts_close(c, f_cur, &slack)
            || counts_close(c, f_prev, &slack)
            || counts_close(c, f_next, &slack)
    }
}

/// Monotone step-function estimate of the profile: breakpoints (z, raw
/// counter, running minimum).
#[derive(Debug, Clone)]
pub struct Corrector {
    pub breakpoints: Vec<(u64, u64, u64)>,
}

pub fn build_corrector<I: IntoIterator<Item = (u64, u64)>>(points: I) -> Corrector {
    let mut breakpoints = Vec::new();
    let mut running = u64::MAX;
    for (z, raw) in points {
        running = running.min(raw);
        breakpoints.push((z, raw, running));
    }
    Corrector { breakpoints }
}

impl Corrector {
    /// Step evaluation: the running minimum at the last breakpoint <= t
    /// (the first breakpoint's value below it).
    pub fn value(&self, t: u64) -> u64 {
        let mut v = self.breakpoints.first().map(|b| b.2).unwrap_or(0);
        for &(z, _, bar) in &self.breakpoints {
            if z <= t {
                v = bar;
            } else {
                break;
            }
        }
        v
    }

    pub fn is_monotone(&self) -> bool {
        self.breakpoints.windows(2).all(|w| w[0].2 >= w[1].2)
    }

    /// Materializes the step function over ranks 1..=n.
    pub fn to_frequency_function(&self, n: u64) -> FrequencyFunction {
        let counts: Vec<u64> = (1..=n).map(|t| self.value(t)).collect();
        FrequencyFunction::from_counts(counts).expect("running minimum is non-increasing")
    }
}

/// Per-level counter tables for one stream. Whenever a level's table cannot
/// fill (distinct kept elements <= capacity) the table is reconstructed from
/// exact counts — observationally identical to a replay, since no eviction
/// can occur and arrival order then never matters. Otherwise the level
/// replays the substream faithfully.
pub fn run_pipeline<F>(
    stream: &[Element],
    schedule: &LevelSchedule,
    capacity_of: F,
) -> Result<Vec<CounterTable>>
where
    F: Fn(usize) -> u64,
{
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for e in stream {
        *counts.entry(e.0).or_insert(0) += 1;
    }

    let mut tables = Vec::with_capacity(schedule.levels.len());
    for (idx, level) in schedule.levels.iter().enumerate() {
        let cap = capacity_of(idx).max(1) as usize;
        let sampler = level.sampler();
        let kept_distinct = counts
            .keys()
            .filter(|&&id| sampler.keep(Element(id)))
            .count();
        let table = if kept_distinct <= cap {
            CounterTable::from_exact_counts(
                cap,
                counts
                    .iter()
                    .filter(|&(&id, _)| sampler.keep(Element(id)))
                    .map(|(&id, &c)| (id, c)),
            )?
        } else {
            let mut t = CounterTable::new(cap)?;
            for &e in stream.iter().filter(|&&e| sampler.keep(e)) {
                t.insert(e);
            }
            t
        };
        tables.push(table);
    }
    Ok(tables)
}

fn neighbor_ranks(schedule: &LevelSchedule, idx: usize) -> (u64, u64, u64) {
    let levels = &schedule.levels;
    let z = levels[idx].z;
    let prev = if idx > 0 { levels[idx - 1].z } else { z };
    let next = if idx + 1 < levels.len() { levels[idx + 1].z } else { schedule.n };
    (prev, z, next)
}

/// Tester A1: does the stream's profile match the reference function f?
/// The caller is responsible for f being half-stable and decaying (the
/// hypotheses the guarantee needs); pre-flight checks live in core-model.
pub fn test_reference(
    stream: &[Element],
    f: &FrequencyFunction,
    params: &TesterParams,
) -> Result<Verdict> {
    let n = f.len();
    if let Some(dn) = params.declared_n {
        if dn != n {
            return Err(Error::DomainMismatch(format!(
                "declared domain size {dn} but reference has {n} ranks"
            )));
        }
    }
    let schedule = build_schedule(n, &params.tol, &params.delta, &params.decay, &params.schedule)?;
    let tables = run_pipeline(stream, &schedule, |idx| schedule.levels[idx].k)?;

    let mut evidence = Vec::with_capacity(schedule.levels.len());
    let mut failing = None;
    for (idx, level) in schedule.levels.iter().enumerate() {
        let c = tables[idx].counter_at(level.r);
        let (pr, cr, nr) = neighbor_ranks(&schedule, idx);
        let (fp, fc, fnx) = (f.value(pr), f.value(cr), f.value(nr));
        let pass = coherence_check(level.small, c, fp, fc, fnx, &params.tol.eps2);
        if !pass && failing.is_none() {
            failing = Some(level.i);
        }
        evidence.push(LevelEvidence {
            i: level.i,
            z: level.z,
            a: level.a,
            r: level.r,
            counter: c,
            ref_prev: fp,
            ref_cur: fc,
            ref_next: fnx,
            small: level.small,
            pass,
        });
    }
    Ok(Verdict {
        answer: if failing.is_none() { Answer::Yes } else { Answer::No },
        failing_level: failing,
        evidence,
    })
}

fn distinct(stream: &[Element]) -> u64 {
    let mut ids: Vec<u64> = stream.iter().map(|e| e.0).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len() as u64
}

/// Capacity of the reference-side tables of the two-stream tester, sized for
/// the sharper tolerance eps1^4/5 its corrector must resolve.
fn two_stream_k1(schedule: &LevelSchedule, k_mult: f64) -> u64 {
    let e1 = crate::rat::rat_to_f64(&schedule.tol.eps1);
    let e2 = crate::rat::rat_to_f64(&schedule.tol.eps2);
    let delta = crate::rat::rat_to_f64(&schedule.delta);
    let e1p = e1.powi(4) / 5.0;
    let c = crate::rat::rat_to_f64(&schedule.decay.tail_constant());
    let ln_n = (schedule.n as f64).ln();
    let raw = 4.0 / (e2 * e1p * e1p) * c * (1.0 + e1p * e1p) * ln_n / delta;
    ((raw * k_mult).ceil() as u64).max(1)
}

/// Tester A2: do two streams share (close) profiles? Stream 1 is the
/// reference side: its per-level counters pass through the running-minimum
/// corrector before the coherence comparison with stream 2's counters.
pub fn test_two_streams(
    s1: &[Element],
    s2: &[Element],
    params: &TesterParams,
) -> Result<Verdict> {
    let n = params.declared_n.unwrap_or_else(|| distinct(s1).max(distinct(s2)));
    if n < 2 {
        return Err(Error::InvalidParam(
            "two-stream tester needs a universe of at least 2 elements; declare one if the streams are tiny".into(),
        ));
    }
    let schedule = build_schedule(n, &params.tol, &params.delta, &params.decay, &params.schedule)?;
    let k1 = two_stream_k1(&schedule, params.schedule.k_mult);
    let tables1 = run_pipeline(s1, &schedule, |_| k1)?;
    let tables2 = run_pipeline(s2, &schedule, |idx| schedule.levels[idx].k)?;

    // corrected counters of stream 1
    let cbar: Vec<u64> = {
        let mut out = Vec::with_capacity(schedule.levels.len());
        let mut running = u64::MAX;
        for (t, level) in tables1.iter().zip(&schedule.levels) {
            running = running.min(t.counter_at(level.r));
            out.push(running);
        }
        out
    };

    let last = schedule.levels.len().saturating_sub(1);
    let mut evidence = Vec::with_capacity(schedule.levels.len());
    let mut failing = None;
    for (idx, level) in schedule.levels.iter().enumerate() {
        let c2 = tables2[idx].counter_at(level.r);
        let prev = cbar[idx.saturating_sub(1)];
        let cur = cbar[idx];
        let next = cbar[(idx + 1).min(last)];
        let pass = coherence_check(level.small, c2, prev, cur, next, &params.tol.eps2);
        if !pass && failing.is_none() {
            failing = Some(level.i);
        }
        evidence.push(LevelEvidence {
            i: level.i,
            z: level.z,
            a: level.a,
            r: level.r,
            counter: c2,
            ref_prev: prev,
            ref_cur: cur,
            ref_next: next,
            small: level.small,
            pass,
        });
    }
    Ok(Verdict {
        answer: if failing.is_none() { Answer::Yes } else { Answer::No },
        failing_level: failing,
        evidence,
    })
}

/// Deterministic key for a projected sub-tuple.
fn project_key(tuple: &[u64], proj: &[usize]) -> u64 {
    let mut acc = 0xcbf29ce484222325u64;
    for &idx in proj {
        acc = crate::sampling::derive_seed(acc, tuple[idx].wrapping_add(1));
    }
    acc
}

/// Tester A3: compares two marginals of a tuple stream by projecting each
/// tuple to its sub-tuple keys and delegating to the two-stream tester.
pub fn test_marginals(
    tuples: &[Vec<u64>],
    proj1: &[usize],
    proj2: &[usize],
    params: &TesterParams,
) -> Result<Verdict> {
    if proj1.is_empty() || proj2.is_empty() {
        return Err(Error::InvalidParam("projections must select at least one coordinate".into()));
    }
    if let Some(t) = tuples.first() {
        for &idx in proj1.iter().chain(proj2) {
            if idx >= t.len() {
                return Err(Error::InvalidParam(format!(
                    "projection index {idx} out of range for {}-tuples",
                    t.len()
                )));
            }
        }
    }
    let s1: Vec<Element> = tuples.iter().map(|t| Element(project_key(t, proj1))).collect();
    let s2: Vec<Element> = tuples.iter().map(|t| Element(project_key(t, proj2))).collect();
    test_two_streams(&s1, &s2, params)
}
