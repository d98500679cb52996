//! Per-level subsampling: the schedule of query ranks z_i with sampling
//! moduli a_i and table capacities K_i, seeded hash samplers, and the
//! single-pass fan-out of one stream into every level's substream.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::{DecayParams, Element, Tolerances};
use crate::rat::{rat_ceil_u64, rat_one, rat_to_f64, Rat};

const GOLDEN: u64 = 0x9e3779b97f4a7c15;

fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    x ^= x >> 31;
    x
}

/// Deterministically derives an independent-looking seed from a master seed
/// and a tag (level index, trial index, stream role, ...).
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    mix64(master ^ tag.wrapping_mul(GOLDEN))
}

/// Deterministic subsampler keeping each element with probability 1/modulus.
#[derive(Debug, Clone, Copy)]
pub struct HashSampler {
    pub seed: u64,
    pub modulus: u64,
}

impl HashSampler {
    pub fn keep(&self, e: Element) -> bool {
        self.modulus == 1 || mix64(self.seed ^ e.0.wrapping_mul(GOLDEN)) % self.modulus == 0
    }
}

#[derive(Debug, Clone)]
pub struct Level {
    /// original level index (before duplicate-z merging)
    pub i: u64,
    /// queried rank z_i = ceil((1+eps1^2)^i)
    pub z: u64,
    /// sampling modulus a_i
    pub a: u64,
    /// query position r = ceil(z/a) in the substream's table
    pub r: u64,
    /// table capacity
    pub k: u64,
    /// per-level sampler seed
    pub seed: u64,
    /// small-z regime: the substream is the full stream (a = 1)
    pub small: bool,
}

impl Level {
    pub fn sampler(&self) -> HashSampler {
        HashSampler { seed: self.seed, modulus: self.a }
    }
}

/// Knobs that Monte-Carlo acceptance runs may tune: the divisor B of the
/// sampling modulus and a multiplier on table capacities. Never the
/// closeness thresholds.
#[derive(Debug, Clone)]
pub struct ScheduleConfig {
    pub b_override: Option<f64>,
    pub k_mult: f64,
    pub master_seed: u64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig { b_override: None, k_mult: 1.0, master_seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct LevelSchedule {
    pub levels: Vec<Level>,
    pub n: u64,
    /// ceil(log_{1+eps1} n), the raw level-index range before merging
    pub level_index_bound: u64,
    /// z at or below which a level samples nothing away (a = 1)
    pub small_z_threshold: u64,
    /// divisor actually used for the sampling modulus
    pub b_used: f64,
    pub tol: Tolerances,
    pub delta: Rat,
    pub decay: DecayParams,
}

impl LevelSchedule {
    /// One line per level: "i z a r K seed".
    pub fn explain(&self) -> String {
        let mut out = String::new();
        for l in &self.levels {
            out.push_str(&format!("{} {} {} {} {} {}\n", l.i, l.z, l.a, l.r, l.k, l.seed));
        }
        out
    }

    pub fn total_counter_capacity(&self) -> u64 {
        self.levels.iter().map(|l| l.k).sum()
    }

    pub fn max_table_capacity(&self) -> u64 {
        self.levels.iter().map(|l| l.k).max().unwrap_or(0)
    }
}

/// Builds the level schedule for domain size n.
///
/// z_i = ceil((1+eps1^2)^i) for i = 0..ceil(log_{1+eps1} n), duplicates
/// merged, z > n dropped. a_i = max(1, ceil(eps1^2 * z_i / B)) with
/// B = 6*ln(ln n / delta) unless overridden, forced to 1 in the small-z
/// regime. K = 2*(z/a)*(gamma1-1)/(1-gamma1/gamma2)*(1+eps1^2)*ln(n)/(eps2*delta),
/// rounded up (and scaled by the configured multiplier).
pub fn build_schedule(
    n: u64,
    tol: &Tolerances,
    delta: &Rat,
    decay: &DecayParams,
    cfg: &ScheduleConfig,
) -> Result<LevelSchedule> {
    if n < 2 {
        return Err(Error::InvalidParam(format!("domain size must be >= 2, got {n}")));
    }
    for (name, v) in [("eps1", &tol.eps1), ("eps2", &tol.eps2), ("delta", delta)] {
        if !(v.is_positive() && *v < rat_one()) {
            return Err(Error::InvalidParam(format!("{name} must be in (0,1), got {v}")));
        }
    }

    let e1 = rat_to_f64(&tol.eps1);
    let ln_n = (n as f64).ln();
    let level_index_bound = (ln_n / (1.0 + e1).ln()).ceil() as u64;
    let e1_sq = &tol.eps1 * &tol.eps1;
    let small_z_threshold = rat_ceil_u64(&(&tol.eps1 * &tol.eps1 * &tol.eps1).recip());

    let delta_f = rat_to_f64(delta);
    let b_used = cfg
        .b_override
        .unwrap_or_else(|| 6.0 * (ln_n / delta_f).ln());

    let tail_const = rat_to_f64(&decay.tail_constant());
    if !(tail_const > 0.0) {
        return Err(Error::InvalidParam("decay parameters give a non-positive tail constant".into()));
    }
    let e2 = rat_to_f64(&tol.eps2);
    let e1_sq_f = rat_to_f64(&e1_sq);

    let growth = BigRational::one()
        + BigRational::new(BigInt::from(*e1_sq.numer()), BigInt::from(*e1_sq.denom()));
    let mut pow = BigRational::one();
    let mut levels: Vec<Level> = Vec::new();
    // i = 0 gives z = 1: the head rank must be queried directly, or the
    // corrector would have no information below z_1 = 2
    for i in 0..=level_index_bound {
        if i > 0 {
            pow *= &growth;
        }
        let z = pow.ceil().to_integer().to_u64().ok_or_else(|| {
            Error::InvalidParam("level rank overflows u64".into())
        })?;
        if z > n {
            break;
        }
        if levels.last().map(|l| l.z) == Some(z) {
            continue;
        }
        let small = z <= small_z_threshold;
        let a = if small {
            1
        } else {
            if b_used <= 0.0 {
                return Err(Error::InvalidParam(
                    "sampling divisor B must be positive; pass an override for tiny n/delta".into(),
                ));
            }
            ((e1_sq_f * z as f64 / b_used).ceil() as u64).max(1)
        };
        let r = z.div_ceil(a);
        let k_raw = 2.0 * (z as f64 / a as f64) * tail_const * (1.0 + e1_sq_f) * ln_n
            / (e2 * delta_f);
        let k = ((k_raw * cfg.k_mult).ceil() as u64).max(1);
        let seed = derive_seed(cfg.master_seed, i);
        levels.push(Level { i, z, a, r, k, seed, small });
    }

    Ok(LevelSchedule {
        levels,
        n,
        level_index_bound,
        small_z_threshold,
        b_used,
        tol: tol.clone(),
        delta: delta.clone(),
        decay: decay.clone(),
    })
}

/// Offers every stream element to every level's sampler, delivering kept
/// elements to the sink in stream order. Sink failures are wrapped with the
/// level index.
pub fn fan_out<I, F, E>(stream: I, schedule: &LevelSchedule, mut sink: F) -> std::result::Result<(), (usize, E)>
where
    I: IntoIterator<Item = Element>,
    F: FnMut(usize, Element) -> std::result::Result<(), E>,
{
    let samplers: Vec<HashSampler> = schedule.levels.iter().map(|l| l.sampler()).collect();
    for e in stream {
        for (idx, s) in samplers.iter().enumerate() {
            if s.keep(e) {
                sink(idx, e).map_err(|err| (idx, err))?;
            }
        }
    }
    Ok(())
}
