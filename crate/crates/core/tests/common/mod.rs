//! Shared helpers for the integration suites.
#![allow(dead_code)]

use frecheck_core::model::{DecayParams, FrequencyFunction, Tolerances};
use frecheck_core::rat::parse_rat;
use frecheck_core::sampling::ScheduleConfig;
use frecheck_core::tester::TesterParams;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

pub fn tol(e1: &str, e2: &str) -> Tolerances {
    Tolerances::new(parse_rat(e1).unwrap(), parse_rat(e2).unwrap()).unwrap()
}

pub fn decay23() -> DecayParams {
    DecayParams::new(parse_rat("2").unwrap(), parse_rat("3").unwrap()).unwrap()
}

/// The tester configuration used by the Monte-Carlo suites: eps1=0.3,
/// eps2=0.2, delta=0.2, decay (2,3). Capacities are scaled by `k_mult`
/// (a sanctioned tuning knob; the closeness thresholds are never touched).
pub fn mc_params(master_seed: u64, k_mult: f64) -> TesterParams {
    TesterParams {
        tol: tol("0.3", "0.2"),
        delta: parse_rat("0.2").unwrap(),
        decay: decay23(),
        schedule: ScheduleConfig { b_override: None, k_mult, master_seed },
        declared_n: None,
    }
}

/// Wilson score 95% lower confidence bound for s successes out of n trials.
pub fn wilson_lower(s: u64, n: u64) -> f64 {
    let z = 1.959964f64;
    let (s, n) = (s as f64, n as f64);
    let p = s / n;
    let denom = 1.0 + z * z / n;
    let center = p + z * z / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    (center - spread) / denom
}

/// Random non-increasing function with up to n_max ranks and values <= v_max.
pub fn random_nonincreasing(rng: &mut ChaCha12Rng, n_max: u64, v_max: u64) -> FrequencyFunction {
    let n = rng.random_range(0..=n_max);
    let counts: Vec<u64> = (0..n).map(|_| rng.random_range(0..=v_max)).collect();
    FrequencyFunction::from_unsorted(counts)
}

/// Random function built from constant plateaus [l, r] with
/// r >= floor(1.6 * l): every rank then has a realizable window of ratio 1.6
/// entirely inside its own plateau, so the result is (0.6, eps2)-half-stable
/// for every eps2.
pub fn plateau_halfstable(rng: &mut ChaCha12Rng, n: u64) -> FrequencyFunction {
    let mut counts: Vec<u64> = Vec::with_capacity(n as usize);
    let mut v: u64 = rng.random_range(1_000..=1_000_000);
    let mut l = 1u64;
    loop {
        let min_r = (l * 16) / 10;
        let mut r = (min_r + rng.random_range(0..=l)).min(n);
        // a further start whose plateau cannot reach ratio 1.6 inside [1, n]
        // is folded into the current plateau
        if ((r + 1) * 16) / 10 > n {
            r = n;
        }
        counts.extend(std::iter::repeat(v).take((r - l + 1) as usize));
        if r == n {
            break;
        }
        l = r + 1;
        v = v * rng.random_range(20..=100) / 100;
    }
    FrequencyFunction::from_counts(counts).expect("plateau values are non-increasing")
}
