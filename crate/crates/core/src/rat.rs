//! Exact rational arithmetic for verdict-determining comparisons.
//!
//! Counts and ranks are machine integers; tolerances are `Ratio<i128>`.
//! Floating point is confined to table-sizing formulas (always rounded up)
//! and never decides a closeness comparison.

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = Ratio<i128>;

pub fn rat(n: u64) -> Rat {
    Rat::from_integer(n as i128)
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(n as i128)
}

/// Parses "3", "0.25", or "1/4" into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidParam(format!("cannot parse rational: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num.trim().parse().map_err(|_| bad())?;
        let d: i128 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int = if int.is_empty() { "0" } else { int };
        let neg = int.starts_with('-');
        let i: i128 = int.parse().map_err(|_| bad())?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 30 {
            return Err(bad());
        }
        let f: i128 = frac.parse().map_err(|_| bad())?;
        let scale = 10_i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let mag = Rat::from_integer(i.abs()) + Rat::new(f, scale);
        return Ok(if neg || i < 0 { -mag } else { mag });
    }
    let i: i128 = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(i))
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

pub fn rat_floor_u64(r: &Rat) -> u64 {
    r.floor().to_integer().to_u64().expect("non-negative floor")
}

pub fn rat_ceil_u64(r: &Rat) -> u64 {
    r.ceil().to_integer().to_u64().expect("non-negative ceil")
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Renders without loss: integers plainly, otherwise "p/q".
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}
