//! The closed-form codimension catalog and the projection-method
//! minimizers: restricted degree profiles, the binomial codimensions
//! gamma(e, d, l), their exhaustive minima, and the tuple reductions.

use crate::error::{Error, Result};
use crate::exact::{binomial, check_range, floor_two_log};
use crate::slopes::cutoff_n_l;
use crate::tuple::{DegreeTuple, SingularityLevel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Sorted degrees of the restricted equations g_1, ..., g_M: each d_i
/// contributes one entry for every j = 2, ..., d_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedDegreeProfile {
    degrees: Vec<u64>,
    source: DegreeTuple,
}

impl RestrictedDegreeProfile {
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn source(&self) -> &DegreeTuple {
        &self.source
    }

    /// m_e, 1-based.
    pub fn m_e(&self, e: u64) -> Option<u64> {
        if e == 0 {
            return None;
        }
        self.degrees.get(e as usize - 1).copied()
    }
}

/// The restricted degree profile of a tuple: the multiset
/// `{ j : 2 <= j <= d_i, i = 1..k }` in non-decreasing order.
pub fn restricted_degrees(d: &DegreeTuple) -> RestrictedDegreeProfile {
    let mut degrees = Vec::with_capacity(d.m() as usize);
    for j in 2..=d.max_degree() {
        let count = d.count_at_least(j);
        degrees.extend(std::iter::repeat(j).take(count as usize));
    }
    debug_assert_eq!(degrees.len() as u64, d.m());
    RestrictedDegreeProfile { degrees, source: d.clone() }
}

/// The same profile by the cumulative-count characterization
/// `m_e = min { j : sum_{a=2}^{j} #{i : d_i >= a} >= e }`; used to
/// cross-check `restricted_degrees`.
pub fn restricted_degree_by_min_formula(d: &DegreeTuple, e: u64) -> Option<u64> {
    if e == 0 || e > d.m() {
        return None;
    }
    let mut cum = 0;
    for j in 2..=d.max_degree() {
        cum += d.count_at_least(j);
        if cum >= e {
            return Some(j);
        }
    }
    None
}

/// gamma(e, d, l) = C(M + l - e + m_e, M + l - e) for 1 <= e <= N_l.
pub fn gamma_e(d: &DegreeTuple, l: SingularityLevel, e: u64) -> Result<BigInt> {
    let n_l = cutoff_n_l(d, l)?;
    check_range("e", e as i64, 1, n_l as i64)?;
    Ok(gamma_e_relaxed(d, l, e).expect("within relaxed range"))
}

/// The raw binomial for any 1 <= e <= M, ignoring the cutoff; supports
/// exhaustive oracle sweeps over the whole profile.
pub fn gamma_e_relaxed(d: &DegreeTuple, l: SingularityLevel, e: u64) -> Result<BigInt> {
    if l.0 > d.k() {
        return Err(Error::LevelOutOfRange { l: l.0, k: d.k() });
    }
    check_range("e", e as i64, 1, d.m() as i64)?;
    let profile = restricted_degrees(d);
    let m_e = profile.m_e(e).expect("e <= M");
    let bottom = d.m() + l.0 - e;
    Ok(binomial(bottom + m_e, m_e))
}

/// All values gamma(e, d, l) for e = 1..N_l. The scan is incremental:
/// within a block of constant m_e the value follows
/// C(n-1, m) = C(n, m) (n-m)/n.
pub fn gamma_table(d: &DegreeTuple, l: SingularityLevel) -> Result<Vec<BigInt>> {
    let n_l = cutoff_n_l(d, l)?;
    let profile = restricted_degrees(d);
    let m = d.m();
    let mut out = Vec::with_capacity(n_l as usize);
    let mut cur = BigInt::zero();
    let mut cur_m = 0u64;
    for e in 1..=n_l {
        let m_e = profile.m_e(e).expect("e <= N_l <= M");
        let top = m + l.0 - e + m_e;
        if e == 1 || m_e != cur_m {
            cur = binomial(top, m_e);
            cur_m = m_e;
        } else {
            // top dropped by one at fixed m_e
            cur = cur * (top + 1 - m_e) / (top + 1);
        }
        debug_assert_eq!(cur, binomial(top, m_e));
        out.push(cur.clone());
    }
    Ok(out)
}

/// Exhaustive exact minimum of gamma(e, d, l) over e = 1..N_l, with ties
/// broken toward the smallest e.
pub fn gamma_min(d: &DegreeTuple, l: SingularityLevel) -> Result<(u64, BigInt)> {
    let table = gamma_table(d, l)?;
    if table.is_empty() {
        return Err(Error::Precondition(format!(
            "gamma_min needs N_l >= 1 for {} at l = {}",
            d, l.0
        )));
    }
    let (mut best_e, mut best) = (1u64, table[0].clone());
    for (i, v) in table.iter().enumerate().skip(1) {
        if *v < best {
            best = v.clone();
            best_e = i as u64 + 1;
        }
    }
    Ok((best_e, best))
}

/// beta(t) = C(k b(t) + t, t) with b(t) = a - t + 1, for the equal-degree
/// tuple (a+1, ..., a+1); requires 2 <= t <= a.
pub fn beta_fn(k: u64, a: u64, t: u64) -> Result<BigInt> {
    check_range("t", t as i64, 2, a as i64)?;
    Ok(beta_closed(k, k * a, t))
}

/// beta(t) rewritten through M: C(M - k(t-1) + t, t). Well-defined for
/// any integers with M >= k t (no divisibility needed).
pub fn beta_closed(k: u64, m: u64, t: u64) -> BigInt {
    binomial(m - k * (t - 1) + t, t)
}

/// alpha(M, k) = C(a + 1 + floor(2 ln k), a + 1) with a = M / k.
pub fn alpha_fn(m: u64, k: u64) -> Result<BigInt> {
    if k == 0 || m % k != 0 {
        return Err(Error::Precondition(format!(
            "alpha_fn needs k | M, got M = {}, k = {}",
            m, k
        )));
    }
    let a = m / k;
    let r = floor_two_log(k);
    Ok(binomial(a + 1 + r, a + 1))
}

/// Names of the closed-form bound catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    A,
    Thm01,
    Thm02,
    Thm04,
    Thm31Target,
    HypReducible,
    HypSingular,
    StepIrreducible,
    RankLocus,
    Lemma22,
    BOf,
    Prop22,
}

impl BoundName {
    pub const ALL: [BoundName; 12] = [
        BoundName::A,
        BoundName::Thm01,
        BoundName::Thm02,
        BoundName::Thm04,
        BoundName::Thm31Target,
        BoundName::HypReducible,
        BoundName::HypSingular,
        BoundName::StepIrreducible,
        BoundName::RankLocus,
        BoundName::Lemma22,
        BoundName::BOf,
        BoundName::Prop22,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundName::A => "A",
            BoundName::Thm01 => "thm01",
            BoundName::Thm02 => "thm02",
            BoundName::Thm04 => "thm04",
            BoundName::Thm31Target => "thm31_target",
            BoundName::HypReducible => "hyp_reducible",
            BoundName::HypSingular => "hyp_singular",
            BoundName::StepIrreducible => "step_irreducible",
            BoundName::RankLocus => "rank_locus",
            BoundName::Lemma22 => "lemma22",
            BoundName::BOf => "b_of",
            BoundName::Prop22 => "prop22",
        }
    }

    /// The exact parameter keys the formula consumes.
    pub fn param_keys(&self) -> &'static [&'static str] {
        match self {
            BoundName::A
            | BoundName::Thm01
            | BoundName::Thm02
            | BoundName::Thm04
            | BoundName::Thm31Target
            | BoundName::HypSingular => &["M", "k"],
            BoundName::HypReducible => &["M", "k", "d_k"],
            BoundName::StepIrreducible => &["M", "k", "d_j", "j"],
            BoundName::RankLocus => &["M", "l", "a"],
            BoundName::Lemma22 => &["M", "l", "a", "e"],
            BoundName::BOf => &["k", "l"],
            BoundName::Prop22 => &["M", "k", "l"],
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;
    fn from_str(s: &str) -> Result<BoundName> {
        BoundName::ALL
            .iter()
            .copied()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound name '{}'", s)))
    }
}

/// Integer parameter map for the bound catalog.
pub type ParamMap = BTreeMap<String, i64>;

pub fn params_from(pairs: &[(&str, i64)]) -> ParamMap {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_big(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn half(x: BigRational) -> BigRational {
    x / rat(2)
}

fn nonneg(name: &str, v: i64) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Precondition(format!("{} must be non-negative, got {}", name, v)))
}

/// Evaluates the named closed form exactly. Parameter maps must supply
/// exactly the keys the formula needs; unknown keys are an error.
pub fn closed_form_bound(name: BoundName, params: &ParamMap) -> Result<BigRational> {
    let keys = name.param_keys();
    for key in params.keys() {
        if !keys.contains(&key.as_str()) {
            return Err(Error::UnknownParam(format!("{} (for {})", key, name)));
        }
    }
    let get = |key: &str| -> Result<i64> {
        params
            .get(key)
            .copied()
            .ok_or_else(|| Error::MissingParam(format!("{} (for {})", key, name)))
    };
    match name {
        BoundName::A => {
            let (m, k) = (get("M")?, get("k")?);
            Ok(half(rat(m - 4 * k) * rat(m - 5 * k)) + rat(m + 2 * k))
        }
        BoundName::Thm04 => {
            let (m, k) = (get("M")?, get("k")?);
            Ok(half(rat(m - 5 * k) * rat(m - 6 * k)))
        }
        BoundName::Thm02 => {
            let (m, k) = (get("M")?, get("k")?);
            Ok(half(rat(m - 4 * k + 1) * rat(m - 4 * k + 2)) - rat(k - 1))
        }
        BoundName::Thm01 => {
            let t02 = closed_form_bound(BoundName::Thm02, params)?;
            let t04 = closed_form_bound(BoundName::Thm04, params)?;
            Ok(t02.min(t04))
        }
        BoundName::Thm31Target => {
            let (m, k) = (get("M")?, get("k")?);
            Ok(half(rat(m - 5 * k) * rat(m - 6 * k)) + rat(m + k))
        }
        BoundName::HypReducible => {
            let (m, k, dk) = (get("M")?, get("k")?, get("d_k")?);
            let top = nonneg("M + k + d_k - 1", m + k + dk - 1)?;
            let r = nonneg("d_k", dk)?;
            Ok(rat_big(binomial(top, r)) - rat(m + k + 1))
        }
        BoundName::HypSingular => {
            let (m, k) = (get("M")?, get("k")?);
            Ok(half(rat(m + k - 6) * rat(m + k - 5)) + rat(1))
        }
        BoundName::StepIrreducible => {
            let (m, k, dj, j) = (get("M")?, get("k")?, get("d_j")?, get("j")?);
            let top = nonneg("M + k + d_j - 1", m + k + dj - 1)?;
            let r = nonneg("d_j", dj)?;
            Ok(rat_big(binomial(top, r)) - rat(m + k + 1) - rat(k - j))
        }
        BoundName::RankLocus => {
            let (m, l, a) = (get("M")?, get("l")?, get("a")?);
            Ok(half(rat(m + l + 1 - a) * rat(m + l + 2 - a)))
        }
        BoundName::Lemma22 => {
            let e = get("e")?;
            let mut inner = params.clone();
            inner.remove("e");
            let rank = closed_form_bound(BoundName::RankLocus, &inner)?;
            Ok(rank - rat(e - 1))
        }
        BoundName::BOf => {
            let (k, l) = (get("k")?, get("l")?);
            Ok(rat((k + l + 1).max(4 * l + 2)))
        }
        BoundName::Prop22 => {
            let (m, k, l) = (get("M")?, get("k")?, get("l")?);
            let b = (k + l + 1).max(4 * l + 2);
            Ok(half(rat(m + 3 - b) * rat(m + 4 - b)) - rat(l - 1))
        }
    }
}

/// Which reduction to apply to a tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    /// Nearly-equal shape (a+1, ..., a+1, a+2, ..., a+2) with the same M.
    Star,
    /// Equal shape (a+1, ..., a+1) with M+ = k a <= M.
    Plus,
}

/// The (a, r) solution of M = k a + (k - r) with 0 <= r <= k - 1.
pub fn star_parameters(d: &DegreeTuple) -> (u64, u64) {
    let k = d.k();
    let m = d.m();
    let a = (m - 1) / k;
    let r = k - (m - k * a);
    (a, r)
}

/// Star or plus reduction of a degree tuple.
pub fn reduce_tuple(d: &DegreeTuple, mode: ReduceMode) -> Result<DegreeTuple> {
    let k = d.k();
    let (a, r) = star_parameters(d);
    match mode {
        ReduceMode::Star => {
            let mut degrees = vec![a + 1; r as usize];
            degrees.extend(std::iter::repeat(a + 2).take((k - r) as usize));
            DegreeTuple::new(degrees)
        }
        ReduceMode::Plus => {
            if a == 0 {
                return Err(Error::Precondition(format!(
                    "plus reduction of {} degenerates to degree 1 (a = 0)",
                    d
                )));
            }
            DegreeTuple::equal(a + 1, k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(s: &str) -> DegreeTuple {
        DegreeTuple::parse(s).unwrap()
    }

    #[test]
    fn restricted_profiles() {
        assert_eq!(restricted_degrees(&tuple("2,3,3")).degrees(), &[2, 2, 2, 3, 3]);
        assert_eq!(restricted_degrees(&tuple("2,2,5")).degrees(), &[2, 2, 2, 3, 4, 5]);
        assert_eq!(restricted_degrees(&tuple("2")).degrees(), &[2]);
    }

    #[test]
    fn min_formula_agrees() {
        for s in ["2,3,3", "2,2,5", "2", "25^20", "2^4,3,7"] {
            let d = tuple(s);
            let profile = restricted_degrees(&d);
            for e in 1..=d.m() {
                assert_eq!(
                    profile.m_e(e),
                    restricted_degree_by_min_formula(&d, e),
                    "m_{} for {}",
                    e,
                    s
                );
            }
            // non-decreasing
            for w in profile.degrees().windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn gamma_e_examples() {
        let d = tuple("2,3,3");
        assert_eq!(gamma_e(&d, SingularityLevel(0), 1).unwrap(), BigInt::from(15)); // C(6,4)
        assert_eq!(gamma_e(&d, SingularityLevel(2), 1).unwrap(), BigInt::from(28)); // C(8,6)
        // e = 4 > N_0 = 3 errors under the cutoff precondition...
        assert!(gamma_e(&d, SingularityLevel(0), 4).is_err());
        // ...but evaluates in relaxed mode: C(4,1) = 4
        assert_eq!(gamma_e_relaxed(&d, SingularityLevel(0), 4).unwrap(), BigInt::from(4));
        assert!(gamma_e_relaxed(&d, SingularityLevel(0), 6).is_err());
    }

    #[test]
    fn gamma_min_brute_force_oracle() {
        // independent oracle: recompute every gamma_e by a fresh binomial
        let cases = ["2,3,3", "2,2,5", "25^20", "2^4,3,7", "5,6,7,8"];
        for s in cases {
            let d = tuple(s);
            for l in 0..=d.k() {
                let l = SingularityLevel(l);
                let n_l = cutoff_n_l(&d, l).unwrap();
                if n_l < 1 {
                    assert!(gamma_min(&d, l).is_err());
                    continue;
                }
                let mut best_e = 0;
                let mut best = None::<BigInt>;
                for e in 1..=n_l {
                    let v = gamma_e(&d, l, e).unwrap();
                    if best.is_none() || v < *best.as_ref().unwrap() {
                        best = Some(v);
                        best_e = e;
                    }
                }
                let (e_star, value) = gamma_min(&d, l).unwrap();
                assert_eq!((e_star, value), (best_e, best.unwrap()), "{} at l={}", s, l.0);
            }
        }
    }

    #[test]
    fn gamma_min_frozen_values() {
        // flagship: minimum at the last quadric slot
        let d = tuple("25^20");
        let (e, v) = gamma_min(&d, SingularityLevel(0)).unwrap();
        assert_eq!((e, v), (20, BigInt::from(106491)));
        // small tuple: brute force over e = 1..3 gives 15, 10, 6
        let d = tuple("2,3,3");
        let (e, v) = gamma_min(&d, SingularityLevel(0)).unwrap();
        assert_eq!((e, v), (3, BigInt::from(6)));
        // l = 3: N_3 = 2; values C(9,7) = 36, C(8,6) = 28
        let (e, v) = gamma_min(&d, SingularityLevel(3)).unwrap();
        assert_eq!((e, v), (2, BigInt::from(28)));
    }

    #[test]
    fn beta_and_alpha_values() {
        assert_eq!(beta_fn(20, 24, 2).unwrap(), BigInt::from(106491));
        assert_eq!(beta_fn(20, 24, 3).unwrap(), BigInt::from(14391741));
        assert_eq!(beta_fn(1, 2, 2).unwrap(), BigInt::from(3));
        assert!(beta_fn(20, 24, 1).is_err());
        assert!(beta_fn(20, 24, 25).is_err());
        assert_eq!(alpha_fn(480, 20).unwrap(), BigInt::from(142506));
        assert_eq!(alpha_fn(100, 1).unwrap(), BigInt::from(1));
        assert_eq!(alpha_fn(40, 20).unwrap(), BigInt::from(56));
        assert!(alpha_fn(41, 20).is_err());
    }

    #[test]
    fn beta_matches_gamma_at_block_ends() {
        // beta(t) = gamma(k(t-1), d, 0) for the equal-degree tuple
        let (k, a) = (6u64, 7u64);
        let d = DegreeTuple::equal(a + 1, k).unwrap();
        for t in 2..=a {
            let e = k * (t - 1);
            assert_eq!(
                beta_fn(k, a, t).unwrap(),
                gamma_e_relaxed(&d, SingularityLevel(0), e).unwrap(),
                "t = {}",
                t
            );
        }
    }

    #[test]
    fn closed_forms_flagship() {
        let p = params_from(&[("M", 480), ("k", 20)]);
        assert_eq!(closed_form_bound(BoundName::A, &p).unwrap(), rat(76520));
        assert_eq!(closed_form_bound(BoundName::Thm04, &p).unwrap(), rat(68400));
        assert_eq!(closed_form_bound(BoundName::Thm02, &p).unwrap(), rat(80582));
        assert_eq!(closed_form_bound(BoundName::Thm01, &p).unwrap(), rat(68400));
        assert_eq!(closed_form_bound(BoundName::Thm31Target, &p).unwrap(), rat(68900));
        let p22 = params_from(&[("M", 480), ("k", 20), ("l", 20)]);
        assert_eq!(closed_form_bound(BoundName::Prop22, &p22).unwrap(), rat(80582));
        let b = params_from(&[("k", 20), ("l", 20)]);
        assert_eq!(closed_form_bound(BoundName::BOf, &b).unwrap(), rat(82));
    }

    #[test]
    fn closed_forms_misc() {
        // hypersurface catalog entries at small sizes
        let p = params_from(&[("M", 10), ("k", 1), ("d_k", 3)]);
        // C(13, 3) - 12 = 286 - 12
        assert_eq!(closed_form_bound(BoundName::HypReducible, &p).unwrap(), rat(274));
        let p = params_from(&[("M", 10), ("k", 1)]);
        assert_eq!(closed_form_bound(BoundName::HypSingular, &p).unwrap(), rat(16));
        let p = params_from(&[("M", 10), ("k", 3), ("d_j", 2), ("j", 1)]);
        // C(14, 2) - 14 - 2 = 91 - 16
        assert_eq!(closed_form_bound(BoundName::StepIrreducible, &p).unwrap(), rat(75));
        let p = params_from(&[("M", 20), ("l", 2), ("a", 7)]);
        assert_eq!(closed_form_bound(BoundName::RankLocus, &p).unwrap(), rat(136));
        let p = params_from(&[("M", 20), ("l", 2), ("a", 7), ("e", 2)]);
        assert_eq!(closed_form_bound(BoundName::Lemma22, &p).unwrap(), rat(135));
        // half-integer values are exact rationals
        let p = params_from(&[("M", 13), ("k", 2)]);
        assert_eq!(
            closed_form_bound(BoundName::Thm04, &p).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );
    }

    #[test]
    fn closed_form_param_validation() {
        let p = params_from(&[("M", 480)]);
        assert!(matches!(
            closed_form_bound(BoundName::A, &p),
            Err(Error::MissingParam(_))
        ));
        let p = params_from(&[("M", 480), ("k", 20), ("zz", 1)]);
        assert!(matches!(
            closed_form_bound(BoundName::A, &p),
            Err(Error::UnknownParam(_))
        ));
    }

    #[test]
    fn reductions() {
        assert_eq!(
            reduce_tuple(&tuple("2,2,5"), ReduceMode::Star).unwrap(),
            tuple("3,3,3")
        );
        assert_eq!(
            reduce_tuple(&tuple("2,3,3"), ReduceMode::Star).unwrap(),
            tuple("2,3,3")
        );
        assert_eq!(
            reduce_tuple(&tuple("2,2,2,3"), ReduceMode::Plus).unwrap(),
            tuple("2,2,2,2")
        );
        // star preserves k and M
        for s in ["2,2,5", "2,3,3", "25^20", "2^4,9"] {
            let d = tuple(s);
            let star = reduce_tuple(&d, ReduceMode::Star).unwrap();
            assert_eq!(star.k(), d.k());
            assert_eq!(star.m(), d.m());
        }
        // plus shrinks M by at most k
        let d = tuple("2^4,9");
        let plus = reduce_tuple(&d, ReduceMode::Plus).unwrap();
        assert!(plus.m() <= d.m() && d.m() - plus.m() <= d.k());
        // all-quadric tuples have no valid plus reduction
        assert!(reduce_tuple(&tuple("2,2"), ReduceMode::Plus).is_err());
    }

    #[test]
    fn monotonicity_under_reductions() {
        for s in ["2,2,5", "4,5,9", "25^20", "2^4,9", "3,3,4,4,5"] {
            let d = tuple(s);
            let star = reduce_tuple(&d, ReduceMode::Star).unwrap();
            let pd = restricted_degrees(&d);
            let ps = restricted_degrees(&star);
            for e in 1..=d.m() {
                assert!(pd.m_e(e) >= ps.m_e(e), "m_{} for {}", e, s);
            }
            for l in [0, 1, d.k()] {
                let l = SingularityLevel(l);
                let n_l = cutoff_n_l(&d, l).unwrap();
                for e in 1..=n_l {
                    let g = gamma_e(&d, l, e).unwrap();
                    let gs = gamma_e(&star, l, e).unwrap();
                    assert!(g >= gs, "gamma({}, {}, l={})", e, s, l.0);
                    let g0 = gamma_e_relaxed(&d, SingularityLevel(0), e).unwrap();
                    assert!(g >= g0);
                }
            }
        }
    }
}
