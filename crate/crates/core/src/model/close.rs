use crate::model::Tolerances;
use crate::rat::Rat;
use num_traits::Signed;

/// |a - b| <= eps * min(a, b), in exact rational arithmetic.
/// With min = 0 this forces a = b.
pub fn eps_close(a: &Rat, b: &Rat, eps: &Rat) -> bool {
    let diff = (a - b).abs();
    let min = if a <= b { a } else { b };
    diff <= eps * min
}

/// eps_close specialized to integer counts (or ranks).
pub fn counts_close(a: u64, b: u64, eps: &Rat) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    // (hi - lo) * q <= p * lo  with eps = p/q
    let diff = (hi - lo) as i128;
    diff * eps.denom() <= eps.numer() * lo as i128
}

/// Componentwise closeness of two points: ranks under eps1, counts under eps2.
pub fn point_close(p: (&Rat, &Rat), q: (&Rat, &Rat), tol: &Tolerances) -> bool {
    eps_close(p.0, q.0, &tol.eps1) && eps_close(p.1, q.1, &tol.eps2)
}
