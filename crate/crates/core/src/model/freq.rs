use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Element;

/// Non-increasing sequence of counts indexed by rank 1..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyFunction {
    counts: Vec<u64>,
}

impl FrequencyFunction {
    pub fn empty() -> Self {
        FrequencyFunction { counts: Vec::new() }
    }

    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        for t in 1..counts.len() {
            if counts[t - 1] < counts[t] {
                return Err(Error::Format {
                    line: t + 1,
                    msg: format!(
                        "counts must be non-increasing: rank {} has {} > {} at rank {}",
                        t + 1,
                        counts[t],
                        counts[t - 1],
                        t
                    ),
                });
            }
        }
        Ok(FrequencyFunction { counts })
    }

    /// Sorts and wraps; accepts counts in any order.
    pub fn from_unsorted(mut counts: Vec<u64>) -> Self {
        counts.sort_unstable_by(|a, b| b.cmp(a));
        FrequencyFunction { counts }
    }

    pub fn len(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Count at rank t (1-indexed). Panics outside [1, n].
    pub fn value(&self, t: u64) -> u64 {
        assert!(t >= 1 && t <= self.len(), "rank {t} out of [1, {}]", self.len());
        self.counts[(t - 1) as usize]
    }

    /// Count at rank t, 0 beyond the domain.
    pub fn value_or_zero(&self, t: u64) -> u64 {
        if t >= 1 && t <= self.len() {
            self.counts[(t - 1) as usize]
        } else {
            0
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Residual mass at ranks u+1..n.
    pub fn residual(&self, u: u64) -> u64 {
        assert!(u <= self.len(), "residual index {u} out of [0, {}]", self.len());
        self.counts[u as usize..].iter().sum()
    }

    /// Zero-pads to domain size n (used when comparing marginals of
    /// different support sizes).
    pub fn padded(&self, n: u64) -> Self {
        let mut counts = self.counts.clone();
        while (counts.len() as u64) < n {
            counts.push(0);
        }
        FrequencyFunction { counts }
    }
}

/// Profile of a stream: per-element occurrence counts, sorted non-increasing.
pub fn frequency_of_stream(stream: &[Element]) -> FrequencyFunction {
    let mut occ: HashMap<u64, u64> = HashMap::new();
    for e in stream {
        *occ.entry(e.0).or_insert(0) += 1;
    }
    FrequencyFunction::from_unsorted(occ.into_values().collect())
}

/// Elements with their exact counts, ranked by descending count with ties
/// broken by ascending id, so that "the element of rank r" is well defined.
pub fn ranked_counts(stream: &[Element]) -> Vec<(Element, u64)> {
    let mut occ: HashMap<u64, u64> = HashMap::new();
    for e in stream {
        *occ.entry(e.0).or_insert(0) += 1;
    }
    let mut out: Vec<(Element, u64)> = occ.into_iter().map(|(id, c)| (Element(id), c)).collect();
    out.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0 .0.cmp(&b.0 .0)));
    out
}
