use crate::error::{Error, Result};
use crate::model::FrequencyFunction;
use crate::rat::{rat, rat_ceil_u64, Rat};
use num_traits::One;

/// Geometric decay-rate condition f(ceil(gamma1*t)) <= f(t)/gamma2,
/// enabling relative-error bounds for SpaceSaving.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayParams {
    pub gamma1: Rat,
    pub gamma2: Rat,
}

impl DecayParams {
    pub fn new(gamma1: Rat, gamma2: Rat) -> Result<Self> {
        if gamma1 <= Rat::one() || gamma2 <= gamma1 {
            return Err(Error::InvalidParam(format!(
                "need 1 < gamma1 < gamma2, got gamma1={gamma1} gamma2={gamma2}"
            )));
        }
        Ok(DecayParams { gamma1, gamma2 })
    }

    /// (gamma1 - 1) / (1 - gamma1/gamma2), the tail-mass constant.
    pub fn tail_constant(&self) -> Rat {
        (&self.gamma1 - Rat::one()) / (Rat::one() - &self.gamma1 / &self.gamma2)
    }
}

/// True iff f(ceil(gamma1*t)) <= f(t)/gamma2 for every t with gamma1*t <= n.
pub fn is_decreasing(f: &FrequencyFunction, decay: &DecayParams) -> bool {
    let n = f.len();
    let (p2, q2) = (*decay.gamma2.numer(), *decay.gamma2.denom());
    for t in 1..=n {
        let gt = rat(t) * &decay.gamma1;
        if gt > rat(n) {
            break;
        }
        let jump = rat_ceil_u64(&gt);
        // f(jump) * gamma2 <= f(t)
        if (f.value(jump) as i128) * p2 > (f.value(t) as i128) * q2 {
            return false;
        }
    }
    true
}

/// Diagnostic tail-mass check: (eps/k) * F_res(k) <= eps * f(k) * tail_constant.
/// Guaranteed to hold when f is (gamma1, gamma2)-decreasing; eps cancels but
/// is kept to mirror the bound as used.
pub fn tail_bound(f: &FrequencyFunction, decay: &DecayParams, k: u64, eps: &Rat) -> bool {
    assert!(k >= 1 && k <= f.len());
    let lhs = eps / rat(k) * rat(f.residual(k));
    let rhs = eps * rat(f.value(k)) * decay.tail_constant();
    lhs <= rhs
}
