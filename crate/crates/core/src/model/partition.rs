use crate::model::{FrequencyFunction, Tolerances};
use crate::rat::{rat, rat_floor_u64};

/// Partition of {1..n} into consecutive intervals [ell_j, r_j].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    pub intervals: Vec<(u64, u64)>,
}

/// Partition of {1..n} into consecutive intervals [l, r] satisfying
///   (a) r >= floor((1+eps1) * l)
///   (b) f(r) >= f(l) / (1+3*eps2)
/// or None when no such partition exists.
///
/// An interval's validity depends only on its endpoints, and for a fixed l
/// the valid r form the contiguous range [floor((1+eps1) l), R(l)] where
/// R(l) is the last rank with f(R) (1+3 eps2) >= f(l) (f is non-increasing).
/// Both range ends are non-decreasing in l, so a left-to-right reachability
/// sweep with a paint frontier decides existence exactly in O(n log n) —
/// unlike the anchor-window greedy, which can miss valid partitions when
/// stable windows leave coverage gaps.
pub fn interval_partition(f: &FrequencyFunction, tol: &Tolerances) -> Option<IntervalPartition> {
    let n = f.len();
    if n == 0 {
        return Some(IntervalPartition { intervals: Vec::new() });
    }
    let counts = f.counts();
    let (p2, q2) = (*tol.eps2.numer(), *tol.eps2.denom());

    // parent[r] = start of a valid interval ending at rank r (0 = unreached)
    let mut parent: Vec<u64> = vec![0; n as usize + 1];
    let mut frontier = 0u64; // highest reached rank
    for l in 1..=n {
        // position l-1 must end a partition of the prefix (or be the origin)
        if l > 1 && parent[l as usize - 1] == 0 {
            continue;
        }
        let lo = rat_floor_u64(&(rat(l) * (rat(1) + &tol.eps1)));
        if lo > n {
            break;
        }
        // last r with f(r) * (1+3*eps2) >= f(l)
        let thr = counts[l as usize - 1] as i128 * q2;
        let hi = counts.partition_point(|&v| v as i128 * (q2 + 3 * p2) >= thr) as u64;
        if hi < lo {
            continue;
        }
        // ranks in [lo, frontier] were painted by earlier l (both range ends
        // are monotone), so only the fresh suffix needs marking
        for r in lo.max(frontier + 1)..=hi.min(n) {
            parent[r as usize] = l;
        }
        frontier = frontier.max(hi.min(n));
    }

    if parent[n as usize] == 0 {
        return None;
    }
    let mut intervals = Vec::new();
    let mut r = n;
    while r > 0 {
        let l = parent[r as usize];
        intervals.push((l, r));
        r = l - 1;
    }
    intervals.reverse();
    Some(IntervalPartition { intervals })
}
