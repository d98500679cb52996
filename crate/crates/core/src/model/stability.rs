use crate::model::{FrequencyFunction, Tolerances};
use crate::rat::{rat, rat_ceil_u64, rat_floor_u64, Rat};

/// Smallest span end reachable from span start `l` while still covering rank
/// `t`, i.e. min over admissible x of floor(x(1+eps1)). None when no x with
/// ceil(x) = l covers t inside [1, n].
fn min_span_end(l: u64, t: u64, n: u64, eps1: &Rat) -> Option<u64> {
    let s = rat(1) + eps1;
    let x_cap = std::cmp::min(rat(l), rat(n) / &s);
    let lo_closed = std::cmp::max(rat(t) / &s, rat(1));
    let lo_strict = rat(l - 1);
    if x_cap < lo_closed || x_cap <= lo_strict {
        return None;
    }
    // the infimum of admissible x; when it sits on the open bound l-1 the
    // floor below is still the right limit value
    let x_star = std::cmp::max(lo_closed, lo_strict);
    Some(rat_floor_u64(&(x_star * &s)))
}

/// A window [l, h] of integer ranks realizable as the span of an
/// (eps1, eps2)-rectangle that contains rank t and all of f's points over
/// the span: f(l) <= f(h)(1+eps2). Returns the first such window.
pub fn stable_window(f: &FrequencyFunction, tol: &Tolerances, t: u64) -> Option<(u64, u64)> {
    let n = f.len();
    let (p2, q2) = (*tol.eps2.numer(), *tol.eps2.denom());
    let l_min = rat_ceil_u64(&(rat(t) / (rat(1) + &tol.eps1))).max(1);
    for l in l_min..=t {
        let Some(h) = min_span_end(l, t, n, &tol.eps1) else {
            continue;
        };
        debug_assert!(h >= t && h <= n);
        if (f.value(l) as i128) * q2 <= (f.value(h) as i128) * (q2 + p2) {
            return Some((l, h));
        }
    }
    None
}

/// Every rank sits inside the span of a rectangle containing all of f's
/// points over that span; forbids double discontinuities.
pub fn is_half_stable(f: &FrequencyFunction, tol: &Tolerances) -> bool {
    (1..=f.len()).all(|t| stable_window(f, tol, t).is_some())
}
