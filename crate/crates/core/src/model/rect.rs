use crate::model::{FrequencyFunction, Tolerances};
use crate::rat::{rat, Rat};

/// Axis-aligned region [x, x(1+eps1)] x [y, y(1+eps2)].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub x: Rat,
    pub y: Rat,
    pub eps1: Rat,
    pub eps2: Rat,
}

impl Rectangle {
    /// Integer ranks covered by the horizontal span.
    pub fn span_ranks(&self) -> (u64, u64) {
        let hi = &self.x * (rat(1) + &self.eps1);
        (
            crate::rat::rat_ceil_u64(&self.x),
            crate::rat::rat_floor_u64(&hi),
        )
    }
}

/// A real x placing the span [x, x(1+eps1)] so that its integer ranks are
/// exactly l..=h, with the span inside [1, n]. Returns a witness x or None.
pub(crate) fn span_witness(l: u64, h: u64, n: u64, eps1: &Rat) -> Option<Rat> {
    let s = rat(1) + eps1; // 1 + eps1
    // constraints on x:
    //   l-1 < x           (first integer in span is l)
    //   x <= l
    //   h/s <= x          (span reaches h)
    //   x < (h+1)/s       (span stops before h+1)
    //   1 <= x, x*s <= n  (span inside the domain)
    let lo_strict = rat(l - 1);
    let lo_closed = std::cmp::max(rat(h) / &s, rat(1));
    let hi_closed = std::cmp::min(rat(l), rat(n) / &s);
    let hi_strict = rat(h + 1) / &s;

    let a = std::cmp::max(&lo_strict, &lo_closed).clone();
    let b = std::cmp::min(&hi_closed, &hi_strict).clone();
    if a > b {
        return None;
    }
    if a < b {
        let mid = (&a + &b) / rat(2);
        // midpoint satisfies the strict bounds unless it hits one exactly,
        // which cannot happen for a < mid < b
        if mid > lo_strict && mid < hi_strict && mid >= lo_closed && mid <= hi_closed {
            return Some(mid);
        }
        // fall through: one closed endpoint may still work
    }
    // single point a == b (or a degenerate midpoint): valid only if it is
    // attained on both sides non-strictly
    if a > lo_strict && a < hi_strict && a >= lo_closed && a <= hi_closed {
        return Some(a);
    }
    None
}

/// Searches for an (eps1, eps2)-rectangle with one function entirely at or
/// below its bottom edge and the other at or above its top edge across the
/// whole horizontal span — a farness certificate. Enumerates all realizable
/// integer spans [l, h]; by monotonicity only the span endpoints matter, so
/// each span is checked in O(1).
pub fn find_separating_rectangle(
    f: &FrequencyFunction,
    g: &FrequencyFunction,
    tol: &Tolerances,
) -> Option<Rectangle> {
    let n = f.len().min(g.len());
    let (p2, q2) = (*tol.eps2.numer(), *tol.eps2.denom());

    for h in 1..=n {
        // smallest l admitting a witness: x <= l and x >= h/(1+eps1)
        let l_min = crate::rat::rat_ceil_u64(&(rat(h) / (rat(1) + &tol.eps1))).max(1);
        for l in l_min..=h {
            let Some(x) = span_witness(l, h, n, &tol.eps1) else {
                continue;
            };
            // g below / f above: need max(g) = g(l) under the rectangle and
            // min(f) = f(h) above it, with genuine mass on top
            let (gl, fh) = (g.value(l) as i128, f.value(h) as i128);
            if fh >= 1 && gl * (q2 + p2) <= fh * q2 {
                let y = if gl > 0 {
                    Rat::from_integer(gl)
                } else {
                    Rat::new(fh * q2, q2 + p2)
                };
                return Some(Rectangle { x, y, eps1: tol.eps1.clone(), eps2: tol.eps2.clone() });
            }
            // f below / g above
            let (fl, gh) = (f.value(l) as i128, g.value(h) as i128);
            if gh >= 1 && fl * (q2 + p2) <= gh * q2 {
                let y = if fl > 0 {
                    Rat::from_integer(fl)
                } else {
                    Rat::new(gh * q2, q2 + p2)
                };
                return Some(Rectangle { x, y, eps1: tol.eps1.clone(), eps2: tol.eps2.clone() });
            }
        }
    }
    None
}

/// Checks that a rectangle actually separates f and g: across its span one
/// function stays at or below y and the other at or above y(1+eps2).
pub fn verify_separating_rectangle(
    f: &FrequencyFunction,
    g: &FrequencyFunction,
    r: &Rectangle,
) -> bool {
    let n = f.len().min(g.len());
    let (l, h) = r.span_ranks();
    if l < 1 || h > n || l > h {
        return false;
    }
    let top = &r.y * (rat(1) + &r.eps2);
    let below = |ff: &FrequencyFunction| (l..=h).all(|t| rat(ff.value(t)) <= r.y);
    let above = |ff: &FrequencyFunction| (l..=h).all(|t| rat(ff.value(t)) >= top);
    let genuine = top > crate::rat::rat_zero();
    genuine && ((below(g) && above(f)) || (below(f) && above(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::parse_rat;

    fn tol(e1: &str, e2: &str) -> Tolerances {
        Tolerances::new(parse_rat(e1).unwrap(), parse_rat(e2).unwrap()).unwrap()
    }

    fn ff(counts: Vec<u64>) -> FrequencyFunction {
        FrequencyFunction::from_counts(counts).unwrap()
    }

    #[test]
    fn identical_functions_have_no_gap() {
        let f = ff(vec![9, 4, 4, 2, 1, 1, 0, 0]);
        assert!(find_separating_rectangle(&f, &f, &tol("0.5", "0.5")).is_none());
    }

    #[test]
    fn uniform_gap_found() {
        let f = ff(vec![4; 100]);
        let g = ff(vec![8; 100]);
        let t = tol("0.5", "0.5");
        let r = find_separating_rectangle(&f, &g, &t).unwrap();
        assert!(verify_separating_rectangle(&f, &g, &r));
        // y >= 4 and y * 1.5 <= 8
        assert!(r.y >= parse_rat("4").unwrap());
        assert!(&r.y * parse_rat("1.5").unwrap() <= parse_rat("8").unwrap());
    }

    #[test]
    fn all_zero_functions_are_not_separated() {
        let f = ff(vec![0; 10]);
        assert!(find_separating_rectangle(&f, &f, &tol("0.5", "0.5")).is_none());
    }

    #[test]
    fn zero_tail_versus_mass() {
        let f = ff(vec![5, 5, 0, 0, 0, 0, 0, 0]);
        let g = ff(vec![5; 8]);
        let t = tol("0.5", "0.5");
        let r = find_separating_rectangle(&f, &g, &t).unwrap();
        assert!(verify_separating_rectangle(&f, &g, &r));
    }

    #[test]
    fn witness_geometry() {
        let e1 = parse_rat("0.5").unwrap();
        // span [2,3] at eps1=0.5: x in (1,2], 1.5x in [3,4) -> x = 2 works
        let x = span_witness(2, 3, 10, &e1).unwrap();
        assert!(x > parse_rat("1").unwrap() && x <= parse_rat("2").unwrap());
        // span [1,3] impossible: 1.5x >= 3 forces x = 2 > 1
        assert!(span_witness(1, 3, 10, &e1).is_none());
        // span exceeding the domain rejected
        assert!(span_witness(2, 3, 2, &e1).is_none());
    }
}
