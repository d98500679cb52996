use crate::model::close::point_close;
use crate::model::frechet::match_interval;
use crate::model::{FrequencyFunction, Tolerances};
use crate::rat::rat;

/// Monotone pairing of the two functions' points; a closeness certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    pub pairs: Vec<(u64, u64)>,
}

/// Builds a coupling of relative length (eps1, eps2), or None when the pair
/// is not Frechet-close at that tolerance.
///
/// Construction: for each rank x of f, S_x is the interval of g-ranks whose
/// points are close to (x, f(x)). A coupling exists iff every S_x is
/// non-empty and the intervals jointly cover all of g without gaps; the
/// staircase walk through the intervals is the certificate.
pub fn find_coupling(
    f: &FrequencyFunction,
    g: &FrequencyFunction,
    tol: &Tolerances,
) -> Option<Coupling> {
    let (nf, ng) = (f.len(), g.len());
    if nf == 0 || ng == 0 {
        return if nf == 0 && ng == 0 {
            Some(Coupling { pairs: Vec::new() })
        } else {
            None
        };
    }

    let mut intervals = Vec::with_capacity(nf as usize);
    for x in 1..=nf {
        intervals.push(match_interval(x, f.value(x), g, tol)?);
    }

    // coverage of g: starts at 1, ends at ng, no gap between consecutive ranks
    if intervals[0].0 != 1 || intervals[intervals.len() - 1].1 != ng {
        return None;
    }
    for w in intervals.windows(2) {
        let ((l0, r0), (l1, r1)) = (w[0], w[1]);
        if l1 > r0 + 1 {
            return None;
        }
        // endpoint monotonicity is implied by closeness of monotone functions
        if l1 < l0 || r1 < r0 {
            return None;
        }
    }

    let mut pairs = Vec::new();
    let mut b = 0u64; // last g-rank coupled
    for (i, &(l, r)) in intervals.iter().enumerate() {
        let a = (i + 1) as u64;
        let start = l.max(b);
        for j in start..=r.max(start) {
            pairs.push((a, j));
        }
        b = r.max(start);
    }
    Some(Coupling { pairs })
}

/// Checks both the staircase structure and the pointwise closeness of a
/// claimed coupling.
pub fn verify_coupling(
    f: &FrequencyFunction,
    g: &FrequencyFunction,
    coupling: &Coupling,
    tol: &Tolerances,
) -> bool {
    let (nf, ng) = (f.len(), g.len());
    let pairs = &coupling.pairs;
    if nf == 0 || ng == 0 {
        return nf == 0 && ng == 0 && pairs.is_empty();
    }
    if pairs.is_empty() || pairs[0] != (1, 1) || pairs[pairs.len() - 1] != (nf, ng) {
        return false;
    }
    for w in pairs.windows(2) {
        let (da, db) = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
        if da > 1 || db > 1 || (da == 0 && db == 0) {
            return false;
        }
    }
    pairs.iter().all(|&(a, b)| {
        a >= 1
            && a <= nf
            && b >= 1
            && b <= ng
            && point_close(
                (&rat(a), &rat(f.value(a))),
                (&rat(b), &rat(g.value(b))),
                tol,
            )
    })
}
