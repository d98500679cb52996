//! Exact representation of frequency profiles, the relative Frechet distance,
//! its certificates, and the structural predicates the streaming tester
//! relies on. Everything here is non-streaming and serves as ground truth.

mod close;
mod coupling;
mod decay;
mod frechet;
mod freq;
mod partition;
mod rect;
mod stability;

pub use close::{counts_close, eps_close, point_close};
pub use coupling::{find_coupling, verify_coupling, Coupling};
pub use decay::{is_decreasing, tail_bound, DecayParams};
pub use frechet::frechet_close;
pub use freq::{frequency_of_stream, ranked_counts, FrequencyFunction};
pub use partition::{interval_partition, IntervalPartition};
pub use rect::{find_separating_rectangle, verify_separating_rectangle, Rectangle};
pub use stability::{is_half_stable, stable_window};

use crate::error::{Error, Result};
use crate::rat::Rat;
use num_traits::Signed;

/// An opaque stream element; equality is id equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub u64);

/// Relative slack in rank (`eps1`) and in count (`eps2`).
///
/// User-facing tolerances live in (0,1); internally scaled variants such as
/// `10*eps2` may exceed 1, so construction only requires positivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tolerances {
    pub eps1: Rat,
    pub eps2: Rat,
}

impl Tolerances {
    pub fn new(eps1: Rat, eps2: Rat) -> Result<Self> {
        if !eps1.is_positive() || !eps2.is_positive() {
            return Err(Error::InvalidParam(format!(
                "tolerances must be positive, got eps1={eps1} eps2={eps2}"
            )));
        }
        Ok(Tolerances { eps1, eps2 })
    }

    /// Same tolerances with both components multiplied by integer factors.
    pub fn scaled(&self, m1: i128, m2: i128) -> Tolerances {
        Tolerances {
            eps1: &self.eps1 * Rat::from_integer(m1),
            eps2: &self.eps2 * Rat::from_integer(m2),
        }
    }
}
