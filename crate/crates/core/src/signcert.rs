//! Certified sign verification by adaptive bisection.
//!
//! A claim "expression E has sign S on box B" is certified by covering B
//! with sub-boxes on each of which the interval enclosure of E excludes
//! zero on the claimed side. Leaves that cannot be decided first retry
//! at doubled precision (up to 512 bits), then split along the widest
//! dimension in relative width. The exploration order is deterministic
//! (depth-first, low half first), so certificates are reproducible.

use crate::bounds::ParamMap;
use crate::error::Result;
use crate::expr::{iv_eval, ExprId, PointMap};
use crate::interval::Interval;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

/// Claimed sign of an expression on a box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        }
    }
}

/// A named axis-aligned box of intervals, in a fixed dimension order.
#[derive(Clone, Debug, PartialEq)]
pub struct VarBox {
    dims: Vec<(String, Interval)>,
}

impl VarBox {
    pub fn new(dims: Vec<(String, Interval)>) -> VarBox {
        VarBox { dims }
    }

    pub fn dims(&self) -> &[(String, Interval)] {
        &self.dims
    }

    pub fn to_point_map(&self) -> PointMap {
        self.dims.iter().map(|(n, iv)| (n.clone(), iv.clone())).collect()
    }

    fn is_degenerate(&self) -> bool {
        self.dims.iter().all(|(_, iv)| iv.width().is_zero())
    }

    /// Index of the dimension with the largest relative width
    /// `width / max(1, |mid|)`; ties go to the lowest index.
    fn widest_dim(&self) -> usize {
        let one = BigRational::from_integer(1.into());
        let mut best = 0usize;
        let mut best_w: Option<BigRational> = None;
        for (i, (_, iv)) in self.dims.iter().enumerate() {
            let w = iv.width().to_rational();
            let scale = iv.mid().abs().max(one.clone());
            let rel = w / scale;
            if best_w.as_ref().map_or(true, |b| rel > *b) {
                best_w = Some(rel);
                best = i;
            }
        }
        best
    }

    fn split(&self, dim: usize) -> (VarBox, VarBox) {
        let (lo_half, hi_half) = self.dims[dim].1.split();
        let mut a = self.clone();
        let mut b = self.clone();
        a.dims[dim].1 = lo_half;
        b.dims[dim].1 = hi_half;
        (a, b)
    }
}

/// Status of a whole certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Certified,
    Inconclusive,
}

/// What happened on one leaf box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafStatus {
    /// Enclosure excludes zero on the claimed side.
    Certified,
    /// Undecidable within the depth/precision budget.
    Inconclusive,
    /// Enclosure excludes zero on the opposite side: the claim is false here.
    OppositeSign,
}

/// One leaf of the subdivision.
#[derive(Clone, Debug, PartialEq)]
pub struct CertLeaf {
    pub box_: VarBox,
    pub enclosure: Interval,
    pub prec: u32,
    pub depth: u32,
    pub status: LeafStatus,
}

/// The result of a sign-certification run.
#[derive(Clone, Debug, PartialEq)]
pub struct SignCertificate {
    pub expr: ExprId,
    pub box_: VarBox,
    pub params: ParamMap,
    pub claimed_sign: Sign,
    pub precision: u32,
    pub max_depth: u32,
    pub status: CertStatus,
    pub leaves: Vec<CertLeaf>,
}

impl SignCertificate {
    pub fn certified(&self) -> bool {
        self.status == CertStatus::Certified
    }

    /// True when some leaf proves the opposite sign (a refutation, which
    /// is stronger than mere inconclusiveness).
    pub fn refuted(&self) -> bool {
        self.leaves.iter().any(|l| l.status == LeafStatus::OppositeSign)
    }
}

const LADDER_CAP: u32 = 512;

fn ladder(start: u32) -> Vec<u32> {
    let mut precs = vec![start];
    let mut p = start;
    while p < LADDER_CAP {
        p = (p * 2).min(LADDER_CAP);
        precs.push(p);
    }
    precs
}

struct Search<'a> {
    expr: ExprId,
    params: &'a ParamMap,
    sign: Sign,
    precision: u32,
    max_depth: u32,
    leaves: Vec<CertLeaf>,
}

enum Outcome {
    Certified,
    /// Stop the whole search: inconclusive or refuted leaf recorded.
    Stop,
}

impl<'a> Search<'a> {
    fn classify(&self, enc: &Interval) -> Option<LeafStatus> {
        match self.sign {
            Sign::Positive if enc.is_strictly_positive() => Some(LeafStatus::Certified),
            Sign::Positive if enc.is_strictly_negative() => Some(LeafStatus::OppositeSign),
            Sign::Negative if enc.is_strictly_negative() => Some(LeafStatus::Certified),
            Sign::Negative if enc.is_strictly_positive() => Some(LeafStatus::OppositeSign),
            _ => None,
        }
    }

    fn visit(&mut self, box_: &VarBox, depth: u32) -> Result<Outcome> {
        let point = box_.to_point_map();
        let mut last_enc: Option<(Interval, u32)> = None;
        let mut eval_error: Option<crate::error::Error> = None;
        for p in ladder(self.precision) {
            // A domain error on a wide box is usually interval dependency
            // (a denominator enclosure straddling zero); splitting can
            // resolve it, so defer the error to the leaf decision.
            let enc = match iv_eval(self.expr, &point, self.params, p) {
                Ok(enc) => enc,
                Err(e) => {
                    eval_error = Some(e);
                    break;
                }
            };
            if let Some(status) = self.classify(&enc) {
                self.leaves.push(CertLeaf {
                    box_: box_.clone(),
                    enclosure: enc,
                    prec: p,
                    depth,
                    status,
                });
                return Ok(match status {
                    LeafStatus::Certified => Outcome::Certified,
                    _ => Outcome::Stop,
                });
            }
            last_enc = Some((enc, p));
        }
        if depth < self.max_depth && !box_.is_degenerate() {
            let (lo_half, hi_half) = box_.split(box_.widest_dim());
            return match self.visit(&lo_half, depth + 1)? {
                Outcome::Stop => Ok(Outcome::Stop),
                Outcome::Certified => self.visit(&hi_half, depth + 1),
            };
        }
        match (last_enc, eval_error) {
            (_, Some(e)) => Err(e),
            (Some((enc, p)), None) => {
                self.leaves.push(CertLeaf {
                    box_: box_.clone(),
                    enclosure: enc,
                    prec: p,
                    depth,
                    status: LeafStatus::Inconclusive,
                });
                Ok(Outcome::Stop)
            }
            (None, None) => unreachable!("ladder is non-empty"),
        }
    }
}

/// Certifies that `expr` has the claimed sign everywhere on `box_`.
///
/// Returns an inconclusive certificate (never an error) when the budget
/// runs out or the sign genuinely changes; domain violations and missing
/// symbols still raise.
pub fn certify_sign(
    expr: ExprId,
    box_: VarBox,
    params: &ParamMap,
    sign: Sign,
    precision: u32,
    max_depth: u32,
) -> Result<SignCertificate> {
    let mut search = Search {
        expr,
        params,
        sign,
        precision,
        max_depth,
        leaves: Vec::new(),
    };
    let outcome = search.visit(&box_, 0)?;
    let status = match outcome {
        Outcome::Certified => CertStatus::Certified,
        Outcome::Stop => CertStatus::Inconclusive,
    };
    Ok(SignCertificate {
        expr,
        box_,
        params: params.clone(),
        claimed_sign: sign,
        precision,
        max_depth,
        status,
        leaves: search.leaves,
    })
}

/// Builds a box from rational bounds, rounded outward to dyadics so the
/// certified region contains the requested one.
pub fn outward_box(dims: &[(&str, BigRational, BigRational)], prec: u32) -> VarBox {
    VarBox::new(
        dims.iter()
            .map(|(name, lo, hi)| {
                (name.to_string(), Interval::from_rational_bounds(lo, hi, prec))
            })
            .collect(),
    )
}

// --- serde mirror (endpoints as exact decimal strings) ---

#[derive(Serialize, Deserialize)]
struct LeafJson {
    #[serde(rename = "box")]
    box_: Vec<(String, String, String)>,
    enclosure: (String, String),
    prec: u32,
    depth: u32,
    status: LeafStatus,
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    expr: String,
    #[serde(rename = "box")]
    box_: Vec<(String, String, String)>,
    params: ParamMap,
    claimed_sign: Sign,
    precision: u32,
    max_depth: u32,
    status: CertStatus,
    leaf_count: usize,
    leaves: Vec<LeafJson>,
}

fn box_to_json(b: &VarBox) -> Vec<(String, String, String)> {
    b.dims()
        .iter()
        .map(|(n, iv)| (n.clone(), iv.lo().to_decimal_string(), iv.hi().to_decimal_string()))
        .collect()
}

impl SignCertificate {
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = CertJson {
            expr: self.expr.as_str().to_string(),
            box_: box_to_json(&self.box_),
            params: self.params.clone(),
            claimed_sign: self.claimed_sign,
            precision: self.precision,
            max_depth: self.max_depth,
            status: self.status,
            leaf_count: self.leaves.len(),
            leaves: self
                .leaves
                .iter()
                .map(|l| LeafJson {
                    box_: box_to_json(&l.box_),
                    enclosure: (
                        l.enclosure.lo().to_decimal_string(),
                        l.enclosure.hi().to_decimal_string(),
                    ),
                    prec: l.prec,
                    depth: l.depth,
                    status: l.status,
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("certificate serialization")
    }
}

/// Parses a decimal string (as produced by `Dyadic::to_decimal_string`)
/// back into an exact rational; used by report round-trip checks.
pub fn decimal_to_rational(s: &str) -> Result<BigRational> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i32, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    let digits: num_bigint::BigInt = format!("{}{}", int_part, frac_part)
        .parse()
        .map_err(|_| crate::error::Error::Parse(format!("bad decimal '{}'", s)))?;
    let den = num_bigint::BigInt::from(10u8).pow(frac_part.len() as u32);
    Ok(BigRational::new(digits * sign, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::params_from;
    use crate::dyadic::Dyadic;

    fn dy(n: i64) -> Dyadic {
        Dyadic::from_int(n)
    }

    #[test]
    fn region_one_certifies() {
        // first derivative of log epsilon positive on [2, 12.5] at (20, 480)
        let half_25 = Dyadic::from_int(25).scale2(-1);
        let box_ = VarBox::new(vec![(
            "t".to_string(),
            Interval::new(dy(2), half_25, 128),
        )]);
        let cert = certify_sign(
            ExprId::DlogEpsilon,
            box_,
            &params_from(&[("M", 480), ("k", 20)]),
            Sign::Positive,
            128,
            40,
        )
        .unwrap();
        assert!(cert.certified(), "leaves: {}", cert.leaves.len());
        assert!(cert.leaves.iter().all(|l| l.status == LeafStatus::Certified));
    }

    #[test]
    fn sign_change_is_refused() {
        // dlog epsilon changes sign on [2, 24]: must refuse, not certify
        let box_ = VarBox::new(vec![(
            "t".to_string(),
            Interval::new(dy(2), dy(24), 128),
        )]);
        let cert = certify_sign(
            ExprId::DlogEpsilon,
            box_,
            &params_from(&[("M", 480), ("k", 20)]),
            Sign::Positive,
            128,
            40,
        )
        .unwrap();
        assert!(!cert.certified());
        // the search either bottomed out at the zero or found a negative leaf
        assert!(cert
            .leaves
            .iter()
            .any(|l| matches!(l.status, LeafStatus::Inconclusive | LeafStatus::OppositeSign)));
    }

    #[test]
    fn certificates_are_deterministic() {
        let box_ = || VarBox::new(vec![("t".to_string(), Interval::new(dy(2), dy(12), 128))]);
        let p = params_from(&[("M", 480), ("k", 20)]);
        let a = certify_sign(ExprId::DlogEpsilon, box_(), &p, Sign::Positive, 128, 40).unwrap();
        let b = certify_sign(ExprId::DlogEpsilon, box_(), &p, Sign::Positive, 128, 40).unwrap();
        assert_eq!(
            serde_json::to_string(&a.to_json_value()).unwrap(),
            serde_json::to_string(&b.to_json_value()).unwrap()
        );
    }

    #[test]
    fn depth_zero_across_sign_change_is_inconclusive() {
        // the box straddles the interior maximum, so no single enclosure decides
        let box_ = VarBox::new(vec![("t".to_string(), Interval::new(dy(2), dy(24), 128))]);
        let p = params_from(&[("M", 480), ("k", 20)]);
        let cert = certify_sign(ExprId::DlogEpsilon, box_, &p, Sign::Positive, 128, 0).unwrap();
        assert_eq!(cert.status, CertStatus::Inconclusive);
        assert_eq!(cert.leaves.len(), 1);
    }

    #[test]
    fn opposite_sign_detected() {
        // claim dlog epsilon negative on [2, 3], where it is clearly positive
        let box_ = VarBox::new(vec![("t".to_string(), Interval::new(dy(2), dy(3), 128))]);
        let p = params_from(&[("M", 480), ("k", 20)]);
        let cert = certify_sign(ExprId::DlogEpsilon, box_, &p, Sign::Negative, 128, 40).unwrap();
        assert!(!cert.certified());
        assert!(cert.refuted());
    }

    #[test]
    fn decimal_round_trip() {
        for s in ["0", "-0.625", "28", "0.75", "-12345.0625"] {
            let r = decimal_to_rational(s).unwrap();
            let d = Dyadic::from_rational(&r, 200, crate::dyadic::Round::Down);
            assert_eq!(d.to_decimal_string(), s.trim_end_matches(".0"));
        }
    }
}
