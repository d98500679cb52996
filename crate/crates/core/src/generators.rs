//! Workload synthesis: reference profiles (Zipf, uniform, geometric),
//! streams realizing a profile exactly, oracle-verified far perturbations,
//! and the two adversarial lower-bound stream constructions.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::model::{frechet_close, Element, FrequencyFunction, Tolerances};

/// Largest-remainder apportionment of total N over non-negative weights:
/// floors first, then +1 to the largest remainders (ties to lower index),
/// so the shares sum to N exactly.
fn apportion(weights: &[f64], total: u64) -> Vec<u64> {
    let sum: f64 = weights.iter().sum();
    assert!(sum > 0.0, "weights must have positive mass");
    let mut shares: Vec<u64> = Vec::with_capacity(weights.len());
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(weights.len());
    let mut assigned = 0u64;
    for (i, w) in weights.iter().enumerate() {
        let exact = w / sum * total as f64;
        let floor = exact.floor() as u64;
        shares.push(floor);
        assigned += floor;
        remainders.push((i, exact - floor as f64));
    }
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut leftover = total - assigned;
    for &(i, _) in &remainders {
        if leftover == 0 {
            break;
        }
        shares[i] += 1;
        leftover -= 1;
    }
    shares
}

/// Rounded Zipf profile: counts proportional to 1/i^alpha summing to total.
pub fn zipf_profile(n: u64, total: u64, alpha: f64) -> FrequencyFunction {
    assert!(n >= 1 && total >= 1 && alpha > 0.0);
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-alpha)).collect();
    FrequencyFunction::from_unsorted(apportion(&weights, total))
}

/// Near-uniform profile: floor(total/n) everywhere, remainder spread over
/// the first ranks.
pub fn uniform_profile(n: u64, total: u64) -> FrequencyFunction {
    assert!(n >= 1);
    let base = total / n;
    let extra = total % n;
    let counts: Vec<u64> = (0..n).map(|i| base + u64::from(i < extra)).collect();
    FrequencyFunction::from_counts(counts).expect("uniform is non-increasing")
}

/// Rounded geometric profile: counts proportional to 1/2^i summing to total.
pub fn geometric_profile(n: u64, total: u64) -> FrequencyFunction {
    assert!(n >= 1 && total >= 1);
    let weights: Vec<f64> = (1..=n).map(|i| 0.5f64.powi(i as i32)).collect();
    FrequencyFunction::from_unsorted(apportion(&weights, total))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamOrdering {
    /// all copies of element 1, then element 2, ...
    Sorted,
    /// cycle over elements still having copies left
    RoundRobin,
    /// seeded uniform shuffle
    Shuffled,
}

#[derive(Debug, Clone)]
pub struct StreamSpec {
    pub profile: FrequencyFunction,
    pub ordering: StreamOrdering,
    pub seed: u64,
}

/// Emits exactly counts[i] occurrences of element id i (rank order, most
/// frequent = id 1), in the requested ordering. The oracle profile of the
/// output equals the requested profile exactly.
pub fn stream_from_profile(spec: &StreamSpec) -> Vec<Element> {
    let counts = spec.profile.counts();
    let total: u64 = counts.iter().sum();
    let mut out: Vec<Element> = Vec::with_capacity(total as usize);
    match spec.ordering {
        StreamOrdering::Sorted => {
            for (i, &c) in counts.iter().enumerate() {
                out.extend(std::iter::repeat(Element(i as u64 + 1)).take(c as usize));
            }
        }
        StreamOrdering::RoundRobin => {
            let mut left: Vec<u64> = counts.to_vec();
            let mut remaining = total;
            while remaining > 0 {
                for (i, l) in left.iter_mut().enumerate() {
                    if *l > 0 {
                        out.push(Element(i as u64 + 1));
                        *l -= 1;
                        remaining -= 1;
                    }
                }
            }
        }
        StreamOrdering::Shuffled => {
            for (i, &c) in counts.iter().enumerate() {
                out.extend(std::iter::repeat(Element(i as u64 + 1)).take(c as usize));
            }
            let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
            out.shuffle(&mut rng);
        }
    }
    out
}

/// Index-reduction stream: one occurrence of a_i for each set bit x_i, then
/// one more occurrence of a_y. The profile has a count-2 element iff x_y = 1.
pub fn index_reduction_stream(x: &[bool], y: usize) -> Result<Vec<Element>> {
    if y < 1 || y > x.len() {
        return Err(Error::InvalidParam(format!(
            "index y={y} out of [1, {}]",
            x.len()
        )));
    }
    let mut out: Vec<Element> = x
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b)
        .map(|(i, _)| Element(i as u64 + 1))
        .collect();
    out.push(Element(y as u64));
    Ok(out)
}

/// The dyadic step reference: domain n = 2^k, f(1) = 2^k and f(t) = 2^(k-i)
/// for t in (2^(i-1), 2^i].
pub fn f0_profile(n: u64) -> Result<FrequencyFunction> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidParam(format!(
            "f0 domain must be a power of two >= 16, got {n}"
        )));
    }
    let k = n.trailing_zeros() as u64;
    let mut counts = vec![n];
    for i in 1..=k {
        let v = 1u64 << (k - i);
        let width = 1u64 << (i - 1);
        counts.extend(std::iter::repeat(v).take(width as usize));
    }
    FrequencyFunction::from_counts(counts)
}

/// Double-jump stream over universe size n = 2|x|: the b-prefix realizes the
/// head of f0(n) exactly (b_j appears f0(j) times, j <= |x|/2), then a_i
/// twice for each set bit, once for each clear bit, then a_y once more.
/// Element ids: b_j = j, a_i = |x|/2 + i.
pub fn double_jump_stream(x: &[bool], y: usize) -> Result<Vec<Element>> {
    let half = x.len() as u64;
    let n = 2 * half;
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidParam(format!(
            "double-jump needs |x| a power of two >= 8, got {}",
            x.len()
        )));
    }
    if y < 1 || y > x.len() {
        return Err(Error::InvalidParam(format!(
            "index y={y} out of [1, {}]",
            x.len()
        )));
    }
    let f0 = f0_profile(n)?;
    let mut out = Vec::new();
    for j in 1..=half / 2 {
        out.extend(std::iter::repeat(Element(j)).take(f0.value(j) as usize));
    }
    let a = |i: usize| Element(half / 2 + i as u64);
    for (i, &b) in x.iter().enumerate() {
        if b {
            out.push(a(i + 1));
            out.push(a(i + 1));
        }
    }
    for (i, &b) in x.iter().enumerate() {
        if !b {
            out.push(a(i + 1));
        }
    }
    out.push(a(y));
    Ok(out)
}

/// Scales a head band of ranks up until the oracle confirms the result is
/// NOT Frechet-close to f at the target tolerances. Monotonicity is restored
/// by construction (a uniformly scaled head of a non-increasing function,
/// re-sorted defensively). Errors out if the distortion budget is exhausted.
pub fn perturb_far(f: &FrequencyFunction, target: &Tolerances) -> Result<FrequencyFunction> {
    if f.is_empty() {
        return Err(Error::InvalidParam("cannot perturb an empty profile".into()));
    }
    let n = f.len() as usize;
    let band = (n / 8).max(1);
    let mut factor = 2u64;
    while factor <= 1 << 20 {
        let mut counts: Vec<u64> = f.counts().to_vec();
        for c in counts.iter_mut().take(band) {
            *c = c.saturating_mul(factor);
        }
        let g = FrequencyFunction::from_unsorted(counts);
        if !frechet_close(f, &g, target) {
            return Ok(g);
        }
        factor *= 2;
    }
    Err(Error::DistortionBudget(1 << 20))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::frequency_of_stream;
    use crate::rat::parse_rat;

    fn tol(e1: &str, e2: &str) -> Tolerances {
        Tolerances::new(parse_rat(e1).unwrap(), parse_rat(e2).unwrap()).unwrap()
    }

    #[test]
    fn zipf_examples() {
        assert_eq!(zipf_profile(4, 100, 1.0).counts(), &[48, 24, 16, 12]);
        assert_eq!(zipf_profile(1, 77, 2.0).counts(), &[77]);
        // f(1) = Theta(N) for alpha > 1: ratio bounded below across n
        for n in [10u64, 100, 1000] {
            let f = zipf_profile(n, 1_000_000, 1.5);
            assert!(f.value(1) as f64 / 1e6 > 0.3, "head mass too small at n={n}");
        }
    }

    #[test]
    fn uniform_and_geometric_examples() {
        assert_eq!(uniform_profile(4, 8).counts(), &[2, 2, 2, 2]);
        assert_eq!(uniform_profile(3, 7).counts(), &[3, 2, 2]);
        assert_eq!(geometric_profile(3, 7).counts(), &[4, 2, 1]);
    }

    #[test]
    fn apportionment_is_exact() {
        for (n, total, alpha) in [(7u64, 1000u64, 1.0), (50, 12345, 1.5), (9, 10, 2.0)] {
            assert_eq!(zipf_profile(n, total, alpha).total(), total);
            assert_eq!(geometric_profile(n, total).total(), total);
            assert_eq!(uniform_profile(n, total).total(), total);
        }
    }

    #[test]
    fn stream_orderings_round_trip() {
        let profile = FrequencyFunction::from_counts(vec![4, 2]).unwrap();
        let sorted = stream_from_profile(&StreamSpec {
            profile: profile.clone(),
            ordering: StreamOrdering::Sorted,
            seed: 0,
        });
        assert_eq!(
            sorted,
            [1, 1, 1, 1, 2, 2].map(Element).to_vec()
        );
        for ordering in [StreamOrdering::Sorted, StreamOrdering::RoundRobin, StreamOrdering::Shuffled] {
            let s = stream_from_profile(&StreamSpec {
                profile: profile.clone(),
                ordering,
                seed: 99,
            });
            assert_eq!(frequency_of_stream(&s), profile);
        }
    }

    #[test]
    fn shuffle_is_deterministic() {
        let spec = StreamSpec {
            profile: zipf_profile(20, 200, 1.0),
            ordering: StreamOrdering::Shuffled,
            seed: 1234,
        };
        assert_eq!(stream_from_profile(&spec), stream_from_profile(&spec));
    }

    #[test]
    fn index_reduction_cases() {
        // x = 1111, y = 2: profile [2,1,1,1]
        let s = index_reduction_stream(&[true; 4], 2).unwrap();
        assert_eq!(frequency_of_stream(&s).counts(), &[2, 1, 1, 1]);
        // x = 1110, y = 4: profile [1,1,1,1]
        let s = index_reduction_stream(&[true, true, true, false], 4).unwrap();
        assert_eq!(frequency_of_stream(&s).counts(), &[1, 1, 1, 1]);
        // all zeros: only a_y
        let s = index_reduction_stream(&[false; 4], 1).unwrap();
        assert_eq!(s, vec![Element(1)]);
        assert!(index_reduction_stream(&[true; 4], 5).is_err());
    }

    #[test]
    fn f0_shape() {
        let f = f0_profile(16).unwrap();
        let mut expect = vec![16u64, 8, 4, 4];
        expect.extend(vec![2; 4]);
        expect.extend(vec![1; 8]);
        assert_eq!(f.counts(), &expect[..]);
        assert!(f0_profile(12).is_err());
        assert!(f0_profile(8).is_err());
    }

    #[test]
    fn double_jump_worked_example() {
        // |x| = 8, x = 01100110, y = 4:
        // b1^16 b2^8 b3^4 b4^4 . a2^2 a3^2 a6^2 a7^2 . a1 a4 a5 a8 . a4
        let x = [false, true, true, false, false, true, true, false];
        let s = double_jump_stream(&x, 4).unwrap();
        let b = |j: u64| Element(j);
        let a = |i: u64| Element(4 + i);
        let mut expect = Vec::new();
        expect.extend(std::iter::repeat(b(1)).take(16));
        expect.extend(std::iter::repeat(b(2)).take(8));
        expect.extend(std::iter::repeat(b(3)).take(4));
        expect.extend(std::iter::repeat(b(4)).take(4));
        for i in [2u64, 3, 6, 7] {
            expect.push(a(i));
            expect.push(a(i));
        }
        for i in [1u64, 4, 5, 8] {
            expect.push(a(i));
        }
        expect.push(a(4));
        assert_eq!(s, expect);
        // y=3 hits a set bit: some element reaches frequency 3
        let s3 = double_jump_stream(&x, 3).unwrap();
        assert_eq!(frequency_of_stream(&s3).value(5), 3);
    }

    #[test]
    fn perturb_far_verified() {
        let f = zipf_profile(200, 100_000, 1.5);
        let t = tol("0.9", "2");
        let g = perturb_far(&f, &t).unwrap();
        assert!(!frechet_close(&f, &g, &t));
        // still a valid non-increasing profile
        assert!(g.counts().windows(2).all(|w| w[0] >= w[1]));
    }
}
