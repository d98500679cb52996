//! SpaceSaving sketch: K counters with per-entry error bounds, deterministic
//! tie-breaking, plus the residual-error and table-sizing diagnostics.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{DecayParams, Element, FrequencyFunction};
use crate::rat::{rat, rat_ceil_u64, Rat};
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterEntry {
    pub element: Element,
    pub counter: u64,
    pub error: u64,
}

/// Counter table of capacity K. Entries are kept both in a hash index and in
/// an order set keyed by (counter, descending id), so the eviction victim —
/// minimum counter, largest id among ties — is always the first order entry,
/// and every insert costs O(log K).
#[derive(Debug, Clone)]
pub struct CounterTable {
    capacity: usize,
    items_processed: u64,
    map: HashMap<u64, (u64, u64)>, // id -> (counter, error)
    order: BTreeSet<(u64, Reverse<u64>)>,
}

impl CounterTable {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidParam("table capacity must be >= 1".into()));
        }
        Ok(CounterTable {
            capacity,
            items_processed: 0,
            map: HashMap::new(),
            order: BTreeSet::new(),
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn items_processed(&self) -> u64 {
        self.items_processed
    }

    pub fn occupied(&self) -> usize {
        self.map.len()
    }

    pub fn is_full(&self) -> bool {
        self.map.len() == self.capacity
    }

    pub fn insert(&mut self, e: Element) {
        self.items_processed += 1;
        if let Some(&(c, err)) = self.map.get(&e.0) {
            self.order.remove(&(c, Reverse(e.0)));
            self.map.insert(e.0, (c + 1, err));
            self.order.insert((c + 1, Reverse(e.0)));
        } else if self.map.len() < self.capacity {
            self.map.insert(e.0, (1, 0));
            self.order.insert((1, Reverse(e.0)));
        } else {
            let &(c_min, Reverse(victim)) = self.order.first().expect("full table");
            self.order.remove(&(c_min, Reverse(victim)));
            self.map.remove(&victim);
            self.map.insert(e.0, (c_min + 1, c_min));
            self.order.insert((c_min + 1, Reverse(e.0)));
        }
    }

    /// Builds the table a stream with the given exact per-element counts
    /// would produce, valid only when the distinct-element count fits the
    /// capacity (no eviction ever happens, so order of arrival is
    /// irrelevant and all errors are zero).
    pub fn from_exact_counts<I>(capacity: usize, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut t = CounterTable::new(capacity)?;
        for (id, c) in counts {
            if c == 0 {
                continue;
            }
            if t.map.len() == capacity {
                return Err(Error::Invariant(
                    "from_exact_counts requires distinct elements <= capacity".into(),
                ));
            }
            t.map.insert(id, (c, 0));
            t.order.insert((c, Reverse(id)));
            t.items_processed += c;
        }
        Ok(t)
    }

    /// Entries ordered by descending counter, ascending id on ties.
    pub fn entries(&self) -> Vec<CounterEntry> {
        self.order
            .iter()
            .rev()
            .map(|&(c, Reverse(id))| CounterEntry {
                element: Element(id),
                counter: c,
                error: self.map[&id].1,
            })
            .collect()
    }

    /// r-th largest counter (1-indexed); 0 past the occupied entries.
    pub fn counter_at(&self, r: u64) -> u64 {
        if r == 0 || r > self.map.len() as u64 {
            return 0;
        }
        self.order
            .iter()
            .rev()
            .nth((r - 1) as usize)
            .map(|&(c, _)| c)
            .unwrap_or(0)
    }

    /// c_K when full, 0 otherwise (no eviction has happened).
    pub fn min_counter(&self) -> u64 {
        if self.is_full() {
            self.order.first().map(|&(c, _)| c).unwrap_or(0)
        } else {
            0
        }
    }

    pub fn get(&self, e: Element) -> Option<CounterEntry> {
        self.map.get(&e.0).map(|&(counter, error)| CounterEntry {
            element: e,
            counter,
            error,
        })
    }

    /// Text form: one "element_id counter error" line per entry, in order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for e in self.entries() {
            out.push_str(&format!("{} {} {}\n", e.element.0, e.counter, e.error));
        }
        out
    }
}

impl PartialEq for CounterTable {
    fn eq(&self, other: &Self) -> bool {
        self.capacity == other.capacity
            && self.items_processed == other.items_processed
            && self.map == other.map
    }
}

/// Upper bound on c_K from the exact profile: min over u < K/2 of
/// F_res(u) / (K - 2u).
pub fn residual_bound(freq: &FrequencyFunction, k_cap: u64) -> Rat {
    assert!(k_cap >= 1);
    let mut best: Option<Rat> = None;
    let mut u = 0u64;
    while 2 * u < k_cap {
        let res = freq.residual(u.min(freq.len()));
        let v = rat(res) / rat(k_cap - 2 * u);
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
        u += 1;
    }
    best.expect("u=0 always contributes")
}

/// True iff c_K <= f(k) - f(k+1); then the top-k table entries are exactly
/// the k most frequent stream elements.
pub fn exactness_holds(table: &CounterTable, freq: &FrequencyFunction, k: u64) -> bool {
    assert!((k as usize) < table.capacity());
    let gap = freq.value_or_zero(k).saturating_sub(freq.value_or_zero(k + 1));
    table.min_counter() <= gap
}

/// K = ceil(k * (2 + 1/eps)), the sizing that keeps the top-k counters
/// within relative error eps * tail_constant on decaying inputs.
pub fn recommend_table_size(k: u64, eps: &Rat, _decay: &DecayParams) -> Result<u64> {
    if !(eps > &Rat::zero() && eps < &Rat::one()) {
        return Err(Error::InvalidParam(format!("eps must be in (0,1), got {eps}")));
    }
    Ok(rat_ceil_u64(&(rat(k) * (rat(2) + eps.recip()))))
}

/// Zipf variant: K = ceil(c * k^(1 + 1/alpha)) for exact top-k recovery on
/// alpha-power-law profiles.
pub fn recommend_table_size_zipf(k: u64, alpha: f64, c: f64) -> u64 {
    assert!(alpha > 0.0 && c > 0.0);
    (c * (k as f64).powf(1.0 + 1.0 / alpha)).ceil() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::frequency_of_stream;
    use crate::rat::parse_rat;

    fn run(k: usize, ids: &[u64]) -> CounterTable {
        let mut t = CounterTable::new(k).unwrap();
        for &i in ids {
            t.insert(Element(i));
        }
        t
    }

    #[test]
    fn rejects_zero_capacity() {
        assert!(CounterTable::new(0).is_err());
        assert_eq!(CounterTable::new(5).unwrap().occupied(), 0);
    }

    #[test]
    fn exact_when_never_evicting() {
        let t = run(2, &[1, 1, 1, 2, 2, 1]);
        let e = t.entries();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].element.0, e[0].counter, e[0].error), (1, 4, 0));
        assert_eq!((e[1].element.0, e[1].counter, e[1].error), (2, 2, 0));
        assert_eq!(t.counter_at(1), 4);
        assert_eq!(t.counter_at(2), 2);
        assert_eq!(t.counter_at(3), 0);
    }

    #[test]
    fn eviction_takes_over_count_and_error() {
        let t = run(1, &[1, 2]);
        let e = t.entries();
        assert_eq!((e[0].element.0, e[0].counter, e[0].error), (2, 2, 1));
        assert_eq!(t.min_counter(), 2);
    }

    #[test]
    fn eviction_tie_break_largest_id() {
        // after a,b the table is full with counters 1,1; c evicts id 2
        let t = run(2, &[1, 2, 3]);
        let e = t.entries();
        assert_eq!((e[0].element.0, e[0].counter, e[0].error), (3, 2, 1));
        assert_eq!((e[1].element.0, e[1].counter, e[1].error), (1, 1, 0));
        assert!(t.get(Element(2)).is_none());
    }

    #[test]
    fn single_counter_equals_stream_length() {
        let t = run(1, &[4, 7, 7, 9, 1, 1, 1]);
        assert_eq!(t.counter_at(1), 7);
        assert_eq!(t.items_processed(), 7);
    }

    #[test]
    fn full_table_mass_conservation() {
        let ids = [5, 3, 5, 1, 9, 9, 2, 7, 5, 3, 8, 8, 8, 1];
        let t = run(4, &ids);
        assert!(t.is_full());
        let total: u64 = t.entries().iter().map(|e| e.counter).sum();
        assert_eq!(total, ids.len() as u64);
        // c_K <= N/K
        assert!(t.min_counter() * 4 <= ids.len() as u64);
    }

    #[test]
    fn determinism() {
        let ids: Vec<u64> = (0..200).map(|i| (i * 7919 + 13) % 23).collect();
        let a = run(8, &ids);
        let b = run(8, &ids);
        assert_eq!(a, b);
        assert_eq!(a.serialize(), b.serialize());
    }

    #[test]
    fn residual_bound_example() {
        let f = FrequencyFunction::from_counts(vec![4, 2, 1, 1]).unwrap();
        assert_eq!(residual_bound(&f, 4), rat(2));
        // uniform at u=0 recovers N/K
        let u = FrequencyFunction::from_counts(vec![3; 10]).unwrap();
        assert_eq!(residual_bound(&u, 5), rat(30) / rat(5));
    }

    #[test]
    fn exactness() {
        // gapped profile: ids 1,2 frequent, 3..6 single
        let ids = [1, 1, 1, 1, 2, 2, 2, 2, 3, 4, 5, 6];
        let t = run(4, &ids);
        let f = frequency_of_stream(&ids.map(Element));
        if exactness_holds(&t, &f, 2) {
            let top: Vec<u64> = t.entries()[..2].iter().map(|e| e.element.0).collect();
            assert_eq!(top, vec![1, 2]);
        }
        // never-full table is exact for any k < occupied
        let small = run(10, &[1, 1, 2]);
        let sf = frequency_of_stream(&[Element(1), Element(1), Element(2)]);
        assert!(exactness_holds(&small, &sf, 1));
    }

    #[test]
    fn sizing() {
        let d = DecayParams::new(parse_rat("2").unwrap(), parse_rat("3").unwrap()).unwrap();
        assert_eq!(recommend_table_size(10, &parse_rat("0.5").unwrap(), &d).unwrap(), 40);
        assert!(recommend_table_size(1, &parse_rat("1").unwrap(), &d).is_err());
        assert_eq!(recommend_table_size_zipf(4, 1.0, 1.0), 16);
    }

    #[test]
    fn fast_path_matches_replay() {
        let ids: Vec<u64> = (0..500).map(|i| (i * 31 + 7) % 40 + 1).collect();
        let elems: Vec<Element> = ids.iter().map(|&i| Element(i)).collect();
        let replay = run(64, &ids); // 40 distinct < 64: never evicts
        let mut counts: HashMap<u64, u64> = HashMap::new();
        for &i in &ids {
            *counts.entry(i).or_insert(0) += 1;
        }
        let fast = CounterTable::from_exact_counts(64, counts).unwrap();
        assert_eq!(replay, fast);
        assert_eq!(replay.serialize(), fast.serialize());
    }
}
