//! Text formats: profiles (one count per line), streams (one element id per
//! line, comma-separated ids for tuple streams). Blank lines are ignored;
//! anything else is a format error carrying its line number.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Element, FrequencyFunction};

pub fn parse_profile(text: &str) -> Result<FrequencyFunction> {
    let mut counts = Vec::new();
    let mut prev: Option<(u64, usize)> = None;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let c: u64 = line.parse().map_err(|_| Error::Format {
            line: idx + 1,
            msg: format!("expected a count, got {line:?}"),
        })?;
        if let Some((p, pline)) = prev {
            if c > p {
                return Err(Error::Format {
                    line: idx + 1,
                    msg: format!("profile must be non-increasing: {c} follows {p} (line {pline})"),
                });
            }
        }
        prev = Some((c, idx + 1));
        counts.push(c);
    }
    // already validated; from_counts re-checks cheaply
    FrequencyFunction::from_counts(counts)
}

pub fn format_profile(f: &FrequencyFunction) -> String {
    let mut out = String::new();
    for &c in f.counts() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_stream(text: &str) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let id: u64 = line.parse().map_err(|_| Error::Format {
            line: idx + 1,
            msg: format!("expected an element id, got {line:?}"),
        })?;
        out.push(Element(id));
    }
    Ok(out)
}

pub fn format_stream(stream: &[Element]) -> String {
    let mut out = String::new();
    for e in stream {
        out.push_str(&e.0.to_string());
        out.push('\n');
    }
    out
}

/// Tuple stream: comma-separated ids, one tuple per line; all tuples must
/// have the same arity.
pub fn parse_tuple_stream(text: &str) -> Result<Vec<Vec<u64>>> {
    let mut out: Vec<Vec<u64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tuple = Vec::new();
        for part in line.split(',') {
            let id: u64 = part.trim().parse().map_err(|_| Error::Format {
                line: idx + 1,
                msg: format!("expected an element id, got {:?}", part.trim()),
            })?;
            tuple.push(id);
        }
        if let Some(first) = out.first() {
            if first.len() != tuple.len() {
                return Err(Error::Format {
                    line: idx + 1,
                    msg: format!(
                        "tuple arity {} differs from earlier arity {}",
                        tuple.len(),
                        first.len()
                    ),
                });
            }
        }
        out.push(tuple);
    }
    Ok(out)
}

pub fn read_profile(path: &Path) -> Result<FrequencyFunction> {
    parse_profile(&std::fs::read_to_string(path)?)
}

pub fn read_stream(path: &Path) -> Result<Vec<Element>> {
    parse_stream(&std::fs::read_to_string(path)?)
}

pub fn read_tuple_stream(path: &Path) -> Result<Vec<Vec<u64>>> {
    parse_tuple_stream(&std::fs::read_to_string(path)?)
}
