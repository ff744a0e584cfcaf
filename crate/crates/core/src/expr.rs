//! The catalog of closed-form real expressions behind the analytic
//! estimates: the Stirling minorant epsilon(t) of the binomial sequence,
//! the two derivatives of its logarithm, and the auxiliary functions
//! G1, ..., G7, H1, H2 used to locate minima and certify positivity.
//!
//! Everything evaluates to a containing enclosure. G1 is a polynomial
//! with decimal coefficients and is evaluated in exact rational
//! arithmetic (decimals read as exact fractions), bypassing intervals.

use crate::bounds::ParamMap;
use crate::error::{Error, Result};
use crate::interval::{self, Interval};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Tags of the catalogued expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExprId {
    Epsilon,
    DlogEpsilon,
    D2logEpsilon,
    Ine1Lhs,
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    H1,
    H2,
    AReal,
}

impl ExprId {
    pub const ALL: [ExprId; 14] = [
        ExprId::Epsilon,
        ExprId::DlogEpsilon,
        ExprId::D2logEpsilon,
        ExprId::Ine1Lhs,
        ExprId::G1,
        ExprId::G2,
        ExprId::G3,
        ExprId::G4,
        ExprId::G5,
        ExprId::G6,
        ExprId::G7,
        ExprId::H1,
        ExprId::H2,
        ExprId::AReal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExprId::Epsilon => "epsilon",
            ExprId::DlogEpsilon => "dlog_epsilon",
            ExprId::D2logEpsilon => "d2log_epsilon",
            ExprId::Ine1Lhs => "ine1_lhs",
            ExprId::G1 => "G1",
            ExprId::G2 => "G2",
            ExprId::G3 => "G3",
            ExprId::G4 => "G4",
            ExprId::G5 => "G5",
            ExprId::G6 => "G6",
            ExprId::G7 => "G7",
            ExprId::H1 => "H1",
            ExprId::H2 => "H2",
            ExprId::AReal => "A_real",
        }
    }

    /// Free variables in canonical box order; remaining symbols come
    /// from the integer parameter map.
    pub fn vars(&self) -> &'static [&'static str] {
        match self {
            ExprId::Epsilon | ExprId::DlogEpsilon | ExprId::D2logEpsilon | ExprId::Ine1Lhs => {
                &["t"]
            }
            ExprId::G1 => &[],
            ExprId::G2 => &["M"],
            ExprId::G3 | ExprId::H1 | ExprId::H2 => &["t"],
            ExprId::G4 | ExprId::G6 | ExprId::G7 | ExprId::AReal => &["s", "t"],
            ExprId::G5 => &["s", "t", "r"],
        }
    }
}

impl fmt::Display for ExprId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExprId {
    type Err = Error;
    fn from_str(s: &str) -> Result<ExprId> {
        ExprId::ALL
            .iter()
            .copied()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown expression tag '{}'", s)))
    }
}

/// Named interval assignment for the free variables of an expression.
pub type PointMap = BTreeMap<String, Interval>;

struct Ctx<'a> {
    point: &'a PointMap,
    params: &'a ParamMap,
    prec: u32,
}

impl<'a> Ctx<'a> {
    /// Looks a symbol up in the point map, falling back to the integer
    /// parameter map.
    fn sym(&self, name: &str) -> Result<Interval> {
        if let Some(iv) = self.point.get(name) {
            return Ok(iv.with_prec(self.prec));
        }
        if let Some(&v) = self.params.get(name) {
            return Ok(Interval::from_int(v, self.prec));
        }
        Err(Error::MissingVar(name.to_string()))
    }

    fn int(&self, n: i64) -> Interval {
        Interval::from_int(n, self.prec)
    }

    /// n/2 as an exact dyadic interval.
    fn halves(&self, n: i64) -> Interval {
        self.int(n).scale2(-1)
    }

    fn ln(&self, x: &Interval) -> Result<Interval> {
        interval::ln(x, self.prec)
    }

    fn pos(&self, what: &str, x: &Interval) -> Result<()> {
        if !x.is_strictly_positive() {
            return Err(Error::Domain(format!("{} must be strictly positive, got {}", what, x)));
        }
        Ok(())
    }
}

/// Shared pieces of the epsilon family at integer parameters (k, M):
/// kb(t) = M + k - k t, kb(t) + t, b(t) = kb(t)/k.
struct EpsParts {
    t: Interval,
    kb: Interval,
    kbt: Interval,
    b: Interval,
    /// t + b(t) = M/k + 1, exactly.
    t_plus_b: Interval,
    k: i64,
}

fn eps_parts(ctx: &Ctx) -> Result<EpsParts> {
    let t = ctx.sym("t")?;
    let m = ctx.sym("M")?;
    let k_iv = ctx.sym("k")?;
    let k = ctx
        .params
        .get("k")
        .copied()
        .ok_or_else(|| Error::MissingParam("k".to_string()))?;
    if k < 1 {
        return Err(Error::Precondition(format!("k must be >= 1, got {}", k)));
    }
    let mk = m.add(&k_iv);
    let kb = mk.sub(&t.mul_int(k));
    let kbt = mk.sub(&t.mul_int(k - 1));
    ctx.pos("t", &t)?;
    ctx.pos("k b(t)", &kb)?;
    let b = kb.div(&k_iv)?;
    let t_plus_b = mk.div(&k_iv)?;
    Ok(EpsParts { t, kb, kbt, b, t_plus_b, k })
}

/// log epsilon(t) = ln(sqrt(2 pi)) - 2 + (kb + t + 1/2) ln(kb + t)
///                  - (kb + 1/2) ln(kb) - (t + 1/2) ln t.
pub fn eval_log_epsilon(point: &PointMap, params: &ParamMap, prec: u32) -> Result<Interval> {
    let ctx = Ctx { point, params, prec };
    let p = eps_parts(&ctx)?;
    let c = interval::ln_sqrt_2pi_minus_2(prec);
    let half = ctx.halves(1);
    let term1 = p.kbt.add(&half).mul(&ctx.ln(&p.kbt)?);
    let term2 = p.kb.add(&half).mul(&ctx.ln(&p.kb)?);
    let term3 = p.t.add(&half).mul(&ctx.ln(&p.t)?);
    Ok(c.add(&term1).sub(&term2).sub(&term3))
}

fn eval_epsilon(ctx: &Ctx) -> Result<Interval> {
    let l = eval_log_epsilon(ctx.point, ctx.params, ctx.prec)?;
    Ok(interval::exp(&l, ctx.prec))
}

/// (t^2 - k b(t)^2) / (2 b(t) t (kb(t) + t)), computed over a common
/// denominator: (k t^2 - kb^2) / (2 kb t (kb + t)).
fn eval_ine1_lhs(ctx: &Ctx) -> Result<Interval> {
    let p = eps_parts(ctx)?;
    let num = p.t.square().mul_int(p.k).sub(&p.kb.square());
    let den = p.kb.mul(&p.t).mul(&p.kbt).scale2(1);
    num.div(&den)
}

/// First derivative of log epsilon:
/// ine1 - k ln(1 + t/kb) + ln(1 + kb/t).
fn eval_dlog_epsilon(ctx: &Ctx) -> Result<Interval> {
    let p = eps_parts(ctx)?;
    let frac = eval_ine1_lhs(ctx)?;
    let one = ctx.int(1);
    let ratio1 = p.t.div(&p.kb)?;
    let log1 = ctx.ln(&one.add(&ratio1))?.mul_int(p.k);
    let ratio2 = p.kb.div(&p.t)?;
    let log2 = ctx.ln(&one.add(&ratio2))?;
    Ok(frac.sub(&log1).add(&log2))
}

/// Second derivative of log epsilon:
/// 1/(b t) + (t^2 - k b^2)^2 / (2 b^2 t^2 (kb+t)^2)
/// + (k-1)(t^2 - k b^2) / (b t (kb+t)^2) - k (t+b)^2 / (t b (kb+t)).
fn eval_d2log_epsilon(ctx: &Ctx) -> Result<Interval> {
    let p = eps_parts(ctx)?;
    let bt = p.b.mul(&p.t);
    ctx.pos("b(t) t", &bt)?;
    let kbt_sq = p.kbt.square();
    let term1 = ctx.int(1).div(&bt)?;
    // (t^2 - k b^2) = (k t^2 - kb^2)/k
    let num = p.t.square().mul_int(p.k).sub(&p.kb.square());
    let term2 = num.square().div(&bt.square().mul(&kbt_sq).mul_int(2 * p.k * p.k))?;
    let term3 = num.mul_int(p.k - 1).div(&bt.mul(&kbt_sq).mul_int(p.k))?;
    let term4 = p.t_plus_b.square().mul_int(p.k).div(&bt.mul(&p.kbt))?;
    Ok(term1.add(&term2).add(&term3).sub(&term4))
}

fn decimal(s: &str) -> BigRational {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    let digits: BigInt = format!("{}{}", int_part, frac_part)
        .parse()
        .expect("decimal literal");
    let den = BigInt::from(10u8).pow(frac_part.len() as u32);
    BigRational::new(digits * BigInt::from(sign), den)
}

fn brat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The printed cubic G1(M, k), with decimal coefficients read as exact
/// rationals:
/// M^3 + M^2 (2.58 - 6k) + M (12k^2 - 17.16k + 0.74)
///     - 8k^3 + 20.58k^2 - 11.74k - 0.84.
pub fn eval_g1_exact(m: i64, k: i64) -> BigRational {
    let m_r = brat(m);
    let k_r = brat(k);
    let c2 = decimal("2.58") - brat(6) * &k_r;
    let c1 = brat(12) * &k_r * &k_r - decimal("17.16") * &k_r + decimal("0.74");
    let c0 = brat(-8) * &k_r * &k_r * &k_r + decimal("20.58") * &k_r * &k_r
        - decimal("11.74") * &k_r
        - decimal("0.84");
    ((&m_r * &m_r * &m_r) + c2 * &m_r * &m_r) + c1 * &m_r + c0
}

/// G2(M, k) = log epsilon(a) - log beta(2) with a = M/k, where
/// b(a) = 1 has been substituted and beta(2) = (M-k+2)(M-k+1)/2 is the
/// real-polynomial extension of the binomial.
fn eval_g2(ctx: &Ctx) -> Result<Interval> {
    let m = ctx.sym("M")?;
    let k = ctx.sym("k")?;
    ctx.pos("k", &k)?;
    let a = m.div(&k)?;
    ctx.pos("a", &a)?;
    let half = ctx.halves(1);
    let ka = k.add(&a);
    let log_eps_a = interval::ln_sqrt_2pi_minus_2(ctx.prec)
        .add(&ka.add(&half).mul(&ctx.ln(&ka)?))
        .sub(&k.add(&half).mul(&ctx.ln(&k)?))
        .sub(&a.add(&half).mul(&ctx.ln(&a)?));
    let mk = m.sub(&k);
    let beta2 = mk.add(&ctx.int(2)).mul(&mk.add(&ctx.int(1))).scale2(-1);
    ctx.pos("beta(2)", &beta2)?;
    Ok(log_eps_a.sub(&ctx.ln(&beta2)?))
}

/// H1(t) = (8/t + 1)(8 ln t + t - 1/2)/(8 ln t + t - 1)
///         - (8/t)(8 ln t - 1/2)/(8 ln t - 1) - 1.
fn eval_h1(ctx: &Ctx) -> Result<Interval> {
    let t = ctx.sym("t")?;
    ctx.pos("t", &t)?;
    let lt8 = ctx.ln(&t)?.mul_int(8);
    let half = ctx.halves(1);
    let one = ctx.int(1);
    let eight_over_t = ctx.int(8).div(&t)?;
    let a_num = lt8.add(&t).sub(&half);
    let a_den = lt8.add(&t).sub(&one);
    let b_num = lt8.sub(&half);
    let b_den = lt8.sub(&one);
    let a = eight_over_t.add(&one).mul(&a_num.div(&a_den)?);
    let b = eight_over_t.mul(&b_num.div(&b_den)?);
    Ok(a.sub(&b).sub(&one))
}

/// H2(t) = -(8 ln t + 6)(1/(8 t ln t - 2t + 2) + 1/(8 t ln t - 2t + 1)).
fn eval_h2(ctx: &Ctx) -> Result<Interval> {
    let t = ctx.sym("t")?;
    ctx.pos("t", &t)?;
    let lt = ctx.ln(&t)?;
    let core = t.mul(&lt).mul_int(8).sub(&t.mul_int(2));
    let d1 = core.add(&ctx.int(2));
    let d2 = core.add(&ctx.int(1));
    let sum = d1.recip()?.add(&d2.recip()?);
    Ok(lt.mul_int(8).add(&ctx.int(6)).mul(&sum).neg())
}

/// G3(t) = ln(1 + (8 ln t - 1)/t) + (8/t) ln(1 + t/(8 ln t - 1))
///         - 1/(2t) + H1(t) + H2(t).
fn eval_g3(ctx: &Ctx) -> Result<Interval> {
    let t = ctx.sym("t")?;
    ctx.pos("t", &t)?;
    let one = ctx.int(1);
    let u = ctx.ln(&t)?.mul_int(8).sub(&one);
    ctx.pos("8 ln t - 1", &u)?;
    let first = ctx.ln(&one.add(&u.div(&t)?))?;
    let second = ctx.int(8).div(&t)?.mul(&ctx.ln(&one.add(&t.div(&u)?))?);
    let third = ctx.int(1).div(&t.scale2(1))?;
    let h1 = eval_h1(ctx)?;
    let h2 = eval_h2(ctx)?;
    Ok(first.add(&second).sub(&third).add(&h1).add(&h2))
}

/// G4(s, t) = (1/t) ln(1 + t^2/s) - t^2/(2 s (t^2 + s))
///            - (2s + 3 - 2t)/(s^2 + (3 - 2t) s + t^2 - 3t + 2).
fn eval_g4(ctx: &Ctx) -> Result<Interval> {
    let s = ctx.sym("s")?;
    let t = ctx.sym("t")?;
    ctx.pos("s", &s)?;
    ctx.pos("t", &t)?;
    let one = ctx.int(1);
    let t2 = t.square();
    let first = ctx.ln(&one.add(&t2.div(&s)?))?.div(&t)?;
    let second = t2.div(&s.mul(&t2.add(&s)).scale2(1))?;
    let num = s.scale2(1).add(&ctx.int(3)).sub(&t.scale2(1));
    let den = s
        .square()
        .add(&ctx.int(3).sub(&t.scale2(1)).mul(&s))
        .add(&t2)
        .sub(&t.mul_int(3))
        .add(&ctx.int(2));
    let third = num.div(&den)?;
    Ok(first.sub(&second).sub(&third))
}

/// A(s, t) = (s - 4t)(s - 5t)/2 + s + 2t, the codimension target as a
/// real function.
fn eval_a_real(ctx: &Ctx) -> Result<Interval> {
    let s = ctx.sym("s")?;
    let t = ctx.sym("t")?;
    let p = s.sub(&t.mul_int(4)).mul(&s.sub(&t.mul_int(5))).scale2(-1);
    Ok(p.add(&s).add(&t.scale2(1)))
}

/// G5(s, t, r) = (s/t + r + 3/2) ln(s/t + r + 1) - (r + 1/2) ln r
///               - (s/t + 3/2) ln(s/t + 1) + ln(sqrt(2 pi)/e^2) - ln A(s, t).
fn eval_g5(ctx: &Ctx, r: &Interval) -> Result<Interval> {
    let s = ctx.sym("s")?;
    let t = ctx.sym("t")?;
    ctx.pos("t", &t)?;
    ctx.pos("r", r)?;
    let x = s.div(&t)?;
    let one = ctx.int(1);
    let th = ctx.halves(3);
    let half = ctx.halves(1);
    let first = x.add(r).add(&th).mul(&ctx.ln(&x.add(r).add(&one))?);
    let second = r.add(&half).mul(&ctx.ln(r)?);
    let third = x.add(&th).mul(&ctx.ln(&x.add(&one))?);
    let a = eval_a_real(ctx)?;
    ctx.pos("A(s, t)", &a)?;
    let c = interval::ln_sqrt_2pi_minus_2(ctx.prec);
    Ok(first.sub(&second).sub(&third).add(&c).sub(&ctx.ln(&a)?))
}

/// G6(s, t) = G5(s, t, 2 ln t - 1).
fn eval_g6(ctx: &Ctx) -> Result<Interval> {
    let t = ctx.sym("t")?;
    ctx.pos("t", &t)?;
    let r = ctx.ln(&t)?.scale2(1).sub(&ctx.int(1));
    eval_g5(ctx, &r)
}

/// G7(s, t) = (1/t) ln(1 + (2 ln t - 1)/(s/t + 1))
///            - (2 ln t - 1)/(2 t (s/t + 1)(s/t + 2 ln t))
///            - (2s - 9t + 2)/(s^2 - 9ts + 2s + 20t^2 + 4t).
fn eval_g7(ctx: &Ctx) -> Result<Interval> {
    let s = ctx.sym("s")?;
    let t = ctx.sym("t")?;
    ctx.pos("t", &t)?;
    let one = ctx.int(1);
    let two_lt = ctx.ln(&t)?.scale2(1);
    let r = two_lt.sub(&one);
    ctx.pos("2 ln t - 1", &r)?;
    let x1 = s.div(&t)?.add(&one);
    ctx.pos("s/t + 1", &x1)?;
    let first = ctx.ln(&one.add(&r.div(&x1)?))?.div(&t)?;
    let den2 = t.scale2(1).mul(&x1).mul(&s.div(&t)?.add(&two_lt));
    let second = r.div(&den2)?;
    let num3 = s.scale2(1).sub(&t.mul_int(9)).add(&ctx.int(2));
    let den3 = s
        .square()
        .sub(&t.mul(&s).mul_int(9))
        .add(&s.scale2(1))
        .add(&t.square().mul_int(20))
        .add(&t.mul_int(4));
    let third = num3.div(&den3)?;
    Ok(first.sub(&second).sub(&third))
}

/// Evaluates a catalogued expression over the given point box. All free
/// variables must be supplied in `point`; integer constants come from
/// `params`.
pub fn iv_eval(expr: ExprId, point: &PointMap, params: &ParamMap, prec: u32) -> Result<Interval> {
    let ctx = Ctx { point, params, prec };
    match expr {
        ExprId::Epsilon => eval_epsilon(&ctx),
        ExprId::DlogEpsilon => eval_dlog_epsilon(&ctx),
        ExprId::D2logEpsilon => eval_d2log_epsilon(&ctx),
        ExprId::Ine1Lhs => eval_ine1_lhs(&ctx),
        ExprId::G1 => {
            let m = params
                .get("M")
                .copied()
                .ok_or_else(|| Error::MissingParam("M".to_string()))?;
            let k = params
                .get("k")
                .copied()
                .ok_or_else(|| Error::MissingParam("k".to_string()))?;
            Ok(Interval::from_rational(&eval_g1_exact(m, k), prec))
        }
        ExprId::G2 => eval_g2(&ctx),
        ExprId::G3 => eval_g3(&ctx),
        ExprId::G4 => eval_g4(&ctx),
        ExprId::G5 => {
            let r = ctx.sym("r")?;
            eval_g5(&ctx, &r)
        }
        ExprId::G6 => eval_g6(&ctx),
        ExprId::G7 => eval_g7(&ctx),
        ExprId::H1 => eval_h1(&ctx),
        ExprId::H2 => eval_h2(&ctx),
        ExprId::AReal => eval_a_real(&ctx),
    }
}

/// Convenience: single-variable point map.
pub fn point1(name: &str, iv: Interval) -> PointMap {
    let mut m = BTreeMap::new();
    m.insert(name.to_string(), iv);
    m
}

pub fn point2(n1: &str, v1: Interval, n2: &str, v2: Interval) -> PointMap {
    let mut m = BTreeMap::new();
    m.insert(n1.to_string(), v1);
    m.insert(n2.to_string(), v2);
    m
}
