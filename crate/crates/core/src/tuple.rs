//! Degree tuples `(d_1, ..., d_k)` and singularity levels.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The k-uple of degrees `2 <= d_1 <= ... <= d_k` with the derived
/// dimension parameter `M = d_1 + ... + d_k - k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeTuple {
    degrees: Vec<u64>,
}

impl DegreeTuple {
    /// Builds a tuple from degrees in any order; entries below 2 are rejected.
    pub fn new(mut degrees: Vec<u64>) -> Result<DegreeTuple> {
        if degrees.is_empty() {
            return Err(Error::InvalidTuple("empty degree tuple".into()));
        }
        if let Some(&bad) = degrees.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidTuple(format!("degree {} < 2", bad)));
        }
        degrees.sort_unstable();
        Ok(DegreeTuple { degrees })
    }

    /// Equal-degree tuple `(d, ..., d)` with k entries.
    pub fn equal(d: u64, k: u64) -> Result<DegreeTuple> {
        if k == 0 {
            return Err(Error::InvalidTuple("k = 0".into()));
        }
        DegreeTuple::new(vec![d; k as usize])
    }

    /// Parses comma lists with power notation: "2,3,3", "25^20", "2^3,5".
    pub fn parse(text: &str) -> Result<DegreeTuple> {
        let mut degrees = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::Parse(format!("empty entry in degree list '{}'", text)));
            }
            let (base, count) = match part.split_once('^') {
                None => (part, 1u64),
                Some((b, m)) => {
                    let count: u64 = m
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad multiplicity '{}'", m)))?;
                    if count == 0 {
                        return Err(Error::Parse(format!("zero multiplicity in '{}'", part)));
                    }
                    (b, count)
                }
            };
            let d: u64 = base
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree '{}'", base)))?;
            for _ in 0..count {
                degrees.push(d);
            }
        }
        DegreeTuple::new(degrees).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Codimension k (number of defining equations).
    pub fn k(&self) -> u64 {
        self.degrees.len() as u64
    }

    /// M = |d| - k.
    pub fn m(&self) -> u64 {
        self.degrees.iter().sum::<u64>() - self.k()
    }

    pub fn max_degree(&self) -> u64 {
        *self.degrees.last().unwrap()
    }

    /// Number of entries with `d_i >= j`.
    pub fn count_at_least(&self, j: u64) -> u64 {
        self.degrees.iter().filter(|&&d| d >= j).count() as u64
    }

    /// Renders in compact power notation, e.g. "2^3,5".
    pub fn to_compact_string(&self) -> String {
        let mut out: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.degrees.len() {
            let d = self.degrees[i];
            let mut run = 1;
            while i + run < self.degrees.len() && self.degrees[i + run] == d {
                run += 1;
            }
            if run == 1 {
                out.push(format!("{}", d));
            } else {
                out.push(format!("{}^{}", d, run));
            }
            i += run;
        }
        out.join(",")
    }
}

impl fmt::Display for DegreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_compact_string())
    }
}

/// Multi-quadratic singularity level `l in {0, ..., k}`; `l = 0` is the
/// non-singular case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SingularityLevel(pub u64);

impl SingularityLevel {
    pub fn checked(l: u64, tuple: &DegreeTuple) -> Result<SingularityLevel> {
        if l > tuple.k() {
            return Err(Error::LevelOutOfRange { l, k: tuple.k() });
        }
        Ok(SingularityLevel(l))
    }
}
