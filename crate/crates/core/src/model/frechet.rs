use crate::model::{FrequencyFunction, Tolerances};

/// Ranks of `g` whose points are close to the point (x, c): the rank window
/// [x/(1+eps1), x(1+eps1)] intersected with the ranks carrying counts in the
/// band [c/(1+eps2), c(1+eps2)]. Both pieces are contiguous because g is
/// non-increasing, so the match set is an interval (possibly empty).
pub(crate) fn match_interval(
    x: u64,
    c: u64,
    g: &FrequencyFunction,
    tol: &Tolerances,
) -> Option<(u64, u64)> {
    let ng = g.len();
    if ng == 0 {
        return None;
    }
    let (p1, q1) = (*tol.eps1.numer(), *tol.eps1.denom());
    let (p2, q2) = (*tol.eps2.numer(), *tol.eps2.denom());
    let x = x as i128;

    // rank window: ceil(x*q1/(p1+q1)) ..= floor(x*(p1+q1)/q1)
    let lo = div_ceil(x * q1, p1 + q1).max(1) as u64;
    let hi = (x * (p1 + q1) / q1).min(ng as i128) as u64;
    if lo > hi {
        return None;
    }

    // value band as rank interval: g(j) <= c(1+eps2) holds on a suffix,
    // g(j) >= c/(1+eps2) on a prefix.
    let c = c as i128;
    let counts = g.counts();
    let suffix_start =
        counts.partition_point(|&v| (v as i128) * q2 > c * (p2 + q2)) as u64 + 1;
    let prefix_end = counts.partition_point(|&v| (v as i128) * (p2 + q2) >= c * q2) as u64;

    let a = lo.max(suffix_start);
    let b = hi.min(prefix_end);
    if a <= b {
        Some((a, b))
    } else {
        None
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    (a + b - 1) / b
}

fn one_sided(f: &FrequencyFunction, g: &FrequencyFunction, tol: &Tolerances) -> bool {
    (1..=f.len()).all(|x| match_interval(x, f.value(x), g, tol).is_some())
}

/// Relative Frechet closeness: every point of each function has a
/// componentwise-close point of the other. Each function is evaluated over
/// its own domain; callers comparing profiles of different support sizes can
/// zero-pad explicitly via `FrequencyFunction::padded`.
pub fn frechet_close(f: &FrequencyFunction, g: &FrequencyFunction, tol: &Tolerances) -> bool {
    one_sided(f, g, tol) && one_sided(g, f, tol)
}

/// Step pair with distance exactly (0.1, 0.25): f is 4b up to rank 10c
/// then b, g is 5b up to rank 11c then b (here b=4, c=2, domain 40).
#[cfg(test)]
pub(crate) fn step_pair() -> (FrequencyFunction, FrequencyFunction) {
    let (b, c, n) = (4u64, 2u64, 40u64);
    let f: Vec<u64> = (1..=n).map(|i| if i <= 10 * c { 4 * b } else { b }).collect();
    let g: Vec<u64> = (1..=n).map(|i| if i <= 11 * c { 5 * b } else { b }).collect();
    (
        FrequencyFunction::from_counts(f).unwrap(),
        FrequencyFunction::from_counts(g).unwrap(),
    )
}
