//! Hypertangent slope sequences and their tail products.
//!
//! A degree tuple together with a singularity level l yields the ordered
//! sequence of M - l slopes: k - l tangent entries of slope 2, then for
//! each j = 2, ..., d_k - 1 one entry (j+1)/j for every degree d_i > j.
//! The tail product past the cutoff N_l drives the exclusion threshold
//! gamma_l = (4/3) beta(l)^(-1).

use crate::error::{Error, Result};
use crate::exact::floor_two_log;
use crate::tuple::{DegreeTuple, SingularityLevel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// One block of equal slopes `(j+1)/j`, stored with its multiplicity.
/// `j = 1` encodes the tangent block of slope 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeBlock {
    pub j: u64,
    pub count: u64,
}

/// The ordered slope multiset for `(d, l)`, with the cutoff `N_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSequence {
    blocks: Vec<SlopeBlock>,
    len: u64,
    cutoff: u64,
    level: SingularityLevel,
    source: DegreeTuple,
}

impl SlopeSequence {
    pub fn blocks(&self) -> &[SlopeBlock] {
        &self.blocks
    }

    /// Number of slopes, M - l.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The cutoff N_l = M - max(floor(2 ln k), l).
    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn level(&self) -> SingularityLevel {
        self.level
    }

    pub fn source(&self) -> &DegreeTuple {
        &self.source
    }

    /// The i-th slope (1-based) as an exact rational.
    pub fn slope(&self, i: u64) -> Option<BigRational> {
        if i == 0 || i > self.len {
            return None;
        }
        let mut pos = 0;
        for b in &self.blocks {
            pos += b.count;
            if i <= pos {
                return Some(slope_of_j(b.j));
            }
        }
        None
    }

    /// All slopes in order (use only for small sequences / display).
    pub fn iter_slopes(&self) -> impl Iterator<Item = BigRational> + '_ {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_with(move || slope_of_j(b.j)).take(b.count as usize))
    }

    /// Exact product of all slopes.
    pub fn product(&self) -> BigRational {
        product_of_blocks(self.blocks.iter().map(|b| (b.j, b.count)))
    }

    /// Exact product of the slopes with index > N_l (the tail).
    pub fn tail_product(&self) -> BigRational {
        let skip = self.cutoff;
        let mut seen = 0u64;
        let mut parts: Vec<(u64, u64)> = Vec::new();
        for b in &self.blocks {
            let lo = seen;
            seen += b.count;
            if seen > skip {
                let take = seen - skip.max(lo);
                parts.push((b.j, take));
            }
        }
        product_of_blocks(parts.into_iter())
    }
}

fn slope_of_j(j: u64) -> BigRational {
    BigRational::new(BigInt::from(j + 1), BigInt::from(j))
}

/// Product of slope powers ((j+1)/j)^count via exponent bookkeeping per
/// distinct j, keeping intermediate numerators factored.
fn product_of_blocks(blocks: impl Iterator<Item = (u64, u64)>) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (j, count) in blocks {
        if count == 0 {
            continue;
        }
        num *= BigInt::from(j + 1).pow(count as u32);
        den *= BigInt::from(j).pow(count as u32);
    }
    BigRational::new(num, den)
}

/// The slope sequence of `(d, l)`: k - l tangent slopes 2, then for each
/// j = 2, ..., d_k - 1 exactly #{i : d_i > j} slopes (j+1)/j.
pub fn slope_sequence(d: &DegreeTuple, l: SingularityLevel) -> Result<SlopeSequence> {
    let k = d.k();
    if l.0 > k {
        return Err(Error::LevelOutOfRange { l: l.0, k });
    }
    let m = d.m();
    let mut blocks = Vec::new();
    if k - l.0 > 0 {
        blocks.push(SlopeBlock { j: 1, count: k - l.0 });
    }
    for j in 2..d.max_degree() {
        let count = d.count_at_least(j + 1);
        if count > 0 {
            blocks.push(SlopeBlock { j, count });
        }
    }
    let len: u64 = blocks.iter().map(|b| b.count).sum();
    debug_assert_eq!(len, m - l.0);
    let cutoff = m - floor_two_log(k).max(l.0);
    Ok(SlopeSequence {
        blocks,
        len,
        cutoff,
        level: l,
        source: d.clone(),
    })
}

/// The cutoff N_l = M - max(floor(2 ln k), l) without building the sequence.
pub fn cutoff_n_l(d: &DegreeTuple, l: SingularityLevel) -> Result<u64> {
    let k = d.k();
    if l.0 > k {
        return Err(Error::LevelOutOfRange { l: l.0, k });
    }
    let m = d.m();
    let drop = floor_two_log(k).max(l.0);
    Ok(m.saturating_sub(drop))
}

/// Exact total degree d_1 * ... * d_k.
pub fn total_degree(d: &DegreeTuple) -> BigInt {
    let mut acc = BigInt::one();
    for &di in d.degrees() {
        acc *= di;
    }
    acc
}

/// beta(l): the product of the slopes past the cutoff N_l.
pub fn tail_product(d: &DegreeTuple, l: SingularityLevel) -> Result<BigRational> {
    Ok(slope_sequence(d, l)?.tail_product())
}

/// gamma_l = (4/3) * beta(l)^(-1); the exclusion argument needs this >= 1.
pub fn gamma_threshold(d: &DegreeTuple, l: SingularityLevel) -> Result<BigRational> {
    let beta = tail_product(d, l)?;
    Ok(BigRational::new(BigInt::from(4), BigInt::from(3)) / beta)
}
