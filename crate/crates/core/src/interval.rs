//! Interval arithmetic with dyadic endpoints and outward rounding.
//!
//! Every operation returns an interval that contains the true result of
//! applying the operation to any points of the inputs. Elementary
//! functions are built from argument reduction plus truncated series with
//! explicit remainder bounds; the needed constants (ln 2, pi, e) come
//! from rapidly converging rational series and are cached per precision.

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Extra working bits carried through series evaluation.
const GUARD: u32 = 24;

/// A closed interval with dyadic endpoints and a working bit count.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order: [{}, {}]", lo, hi);
        Interval { lo, hi, prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Interval {
        Interval { lo: d.clone(), hi: d, prec }
    }

    pub fn from_int(n: i64, prec: u32) -> Interval {
        Interval::point(Dyadic::from_int(n), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Interval {
        Interval::point(Dyadic::from_bigint(n), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Interval {
        Interval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    /// Outward enclosure of a rational interval.
    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> Interval {
        assert!(lo <= hi);
        Interval {
            lo: Dyadic::from_rational(lo, prec, Round::Down),
            hi: Dyadic::from_rational(hi, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
            prec,
        }
    }

    fn out(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        Interval::new(lo.round(prec, Round::Down), hi.round(prec, Round::Up), prec)
    }

    fn join_prec(&self, rhs: &Interval) -> u32 {
        self.prec.max(rhs.prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Exact rational midpoint.
    pub fn mid(&self) -> BigRational {
        (self.lo.to_rational() + self.hi.to_rational())
            / BigRational::from_integer(BigInt::from(2))
    }

    /// Dyadic midpoint (exact: dyadics are closed under halving).
    pub fn mid_dyadic(&self) -> Dyadic {
        self.lo.add(&self.hi).scale2(-1)
    }

    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.to_rational() <= *r && *r <= self.hi.to_rational()
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            prec: self.prec,
        }
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        let p = self.join_prec(rhs);
        Interval::out(self.lo.add(&rhs.lo), self.hi.add(&rhs.hi), p)
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        let p = self.join_prec(rhs);
        Interval::out(self.lo.sub(&rhs.hi), self.hi.sub(&rhs.lo), p)
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        let p = self.join_prec(rhs);
        // Dyadic products are exact, so compute all four and round once.
        let c1 = self.lo.mul(&rhs.lo);
        let c2 = self.lo.mul(&rhs.hi);
        let c3 = self.hi.mul(&rhs.lo);
        let c4 = self.hi.mul(&rhs.hi);
        let lo = c1.clone().min(c2.clone()).min(c3.clone()).min(c4.clone());
        let hi = c1.max(c2).max(c3).max(c4);
        Interval::out(lo, hi, p)
    }

    pub fn mul_int(&self, n: i64) -> Interval {
        if n >= 0 {
            Interval::out(self.lo.mul_int(n), self.hi.mul_int(n), self.prec)
        } else {
            Interval::out(self.hi.mul_int(n), self.lo.mul_int(n), self.prec)
        }
    }

    /// Exact scale by 2^n.
    pub fn scale2(&self, n: i64) -> Interval {
        Interval {
            lo: self.lo.scale2(n),
            hi: self.hi.scale2(n),
            prec: self.prec,
        }
    }

    pub fn div(&self, rhs: &Interval) -> Result<Interval> {
        if !rhs.is_strictly_positive() && !rhs.is_strictly_negative() {
            return Err(Error::Domain(format!(
                "division by interval containing zero: [{}, {}]",
                rhs.lo, rhs.hi
            )));
        }
        let p = self.join_prec(rhs);
        let wp = p + 2;
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&rhs.lo, &rhs.hi] {
                let d = a.div(b, wp, Round::Down);
                let u = a.div(b, wp, Round::Up);
                lo = Some(match lo {
                    None => d,
                    Some(x) => x.min(d),
                });
                hi = Some(match hi {
                    None => u,
                    Some(x) => x.max(u),
                });
            }
        }
        Ok(Interval::out(lo.unwrap(), hi.unwrap(), p))
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::from_int(1, self.prec).div(self)
    }

    /// Tight square (handles intervals straddling zero).
    pub fn square(&self) -> Interval {
        let p = self.prec;
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        if !self.lo.is_negative() {
            Interval::out(a, b, p)
        } else if !self.hi.is_positive() {
            Interval::out(b, a, p)
        } else {
            Interval::out(Dyadic::zero(), a.max(b), p)
        }
    }

    /// Integer power. Even powers are tightened around zero.
    pub fn powi(&self, n: u64) -> Interval {
        match n {
            0 => Interval::from_int(1, self.prec),
            1 => self.clone(),
            2 => self.square(),
            _ => {
                if n % 2 == 0 {
                    let h = self.powi(n / 2);
                    h.square()
                } else {
                    let h = self.powi(n - 1);
                    h.mul(self)
                }
            }
        }
    }

    /// Split at the dyadic midpoint: low half first.
    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid_dyadic();
        (
            Interval::new(self.lo.clone(), m.clone(), self.prec),
            Interval::new(m, self.hi.clone(), self.prec),
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]@{}", self.lo, self.hi, self.prec)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_decimal_string(), self.hi.to_decimal_string())
    }
}

// ---------------------------------------------------------------------------
// Cached constants
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum ConstKind {
    Ln2,
    Pi,
    E,
}

fn const_cache() -> &'static Mutex<BTreeMap<(ConstKind, u32), (Dyadic, Dyadic)>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(ConstKind, u32), (Dyadic, Dyadic)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn cached(kind: ConstKind, prec: u32, compute: impl Fn(u32) -> (BigRational, BigRational)) -> Interval {
    {
        let cache = const_cache().lock().unwrap();
        if let Some((lo, hi)) = cache.get(&(kind, prec)) {
            return Interval::new(lo.clone(), hi.clone(), prec);
        }
    }
    let (rlo, rhi) = compute(prec);
    let iv = Interval::from_rational_bounds(&rlo, &rhi, prec);
    let mut cache = const_cache().lock().unwrap();
    cache.insert((kind, prec), (iv.lo.clone(), iv.hi.clone()));
    iv
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational bracket of atanh(1/q): partial sum plus geometric tail bound.
fn atanh_inv_rational(q: i64, bits: u32) -> (BigRational, BigRational) {
    let x = BigRational::new(BigInt::one(), BigInt::from(q));
    let x2 = &x * &x;
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut j: i64 = 0;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 4) as usize);
    loop {
        term = &term * &x2;
        j += 1;
        let t = &term / big(2 * j + 1);
        if t < eps {
            // tail <= t * x^2/(1-x^2), with the current t as first omitted term
            let tail = &t * &x2 / (big(1) - &x2);
            return (sum.clone(), sum + t + tail);
        }
        sum += t;
    }
}

/// Rational bracket of atan(1/q) via the alternating series.
fn atan_inv_rational(q: i64, bits: u32) -> (BigRational, BigRational) {
    let x = BigRational::new(BigInt::one(), BigInt::from(q));
    let x2 = &x * &x;
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut j: i64 = 0;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 4) as usize);
    loop {
        term = &term * &x2;
        j += 1;
        let t = &term / big(2 * j + 1);
        if t < eps {
            // alternating with decreasing terms: |remainder| <= t
            return (sum.clone() - &t, sum + t);
        }
        if j % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
    }
}

/// Enclosure of ln 2 at the given precision.
pub fn ln2(prec: u32) -> Interval {
    cached(ConstKind::Ln2, prec, |p| {
        let (lo, hi) = atanh_inv_rational(3, p + 4);
        (lo * big(2), hi * big(2))
    })
}

/// Enclosure of pi (Machin's formula).
pub fn pi(prec: u32) -> Interval {
    cached(ConstKind::Pi, prec, |p| {
        let (a_lo, a_hi) = atan_inv_rational(5, p + 8);
        let (b_lo, b_hi) = atan_inv_rational(239, p + 8);
        (a_lo * big(16) - b_hi * big(4), a_hi * big(16) - b_lo * big(4))
    })
}

/// Enclosure of Euler's number e.
pub fn euler_e(prec: u32) -> Interval {
    cached(ConstKind::E, prec, |p| {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << (p + 4) as usize);
        let mut term = big(1);
        let mut sum = big(1);
        let mut n: i64 = 0;
        loop {
            n += 1;
            term = term / big(n);
            if term < eps {
                // remaining tail < 2 * first omitted term
                return (sum.clone(), sum + &term * big(2));
            }
            sum += &term;
        }
    })
}

// ---------------------------------------------------------------------------
// Elementary functions
// ---------------------------------------------------------------------------

/// Directed power of a non-negative dyadic by binary exponentiation.
fn dyadic_pow_dir(base: &Dyadic, n: u64, prec: u32, dir: Round) -> Dyadic {
    debug_assert!(!base.is_negative());
    let mut result = Dyadic::one();
    let mut sq = base.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = result.mul(&sq).round(prec, dir);
        }
        k >>= 1;
        if k > 0 {
            sq = sq.mul(&sq).round(prec, dir);
        }
    }
    result
}

/// Interval power with a positive base, exponent a non-negative integer.
fn powi_pos(base: &Interval, n: u64, prec: u32) -> Interval {
    debug_assert!(base.is_strictly_positive());
    Interval::new(
        dyadic_pow_dir(&base.lo, n, prec + 4, Round::Down),
        dyadic_pow_dir(&base.hi, n, prec + 4, Round::Up),
        prec,
    )
}

/// atanh on a non-negative interval bounded well below 1 (z <= ~0.35).
fn atanh_series(z: &Interval, wp: u32) -> Interval {
    let zsq = z.square().with_prec(wp);
    let mut term = z.with_prec(wp);
    let mut sum = term.clone();
    let mut j: i64 = 0;
    let threshold = Dyadic::one().scale2(-((wp + 4) as i64));
    loop {
        term = term.mul(&zsq);
        j += 1;
        let t = term
            .div(&Interval::from_int(2 * j + 1, wp))
            .expect("odd denominator");
        sum = sum.add(&t);
        if *t.hi() < threshold {
            // tail <= t * z^2 / (1 - z^2)
            let one = Interval::from_int(1, wp);
            let tail = t
                .mul(&zsq)
                .div(&one.sub(&zsq))
                .expect("1 - z^2 positive")
                .hi()
                .clone();
            assert!(!tail.is_negative());
            return Interval::new(sum.lo().clone(), sum.hi().add(&tail), wp);
        }
    }
}

/// Enclosure of ln(d) for a positive dyadic point.
fn ln_point(d: &Dyadic, prec: u32) -> Interval {
    assert!(d.is_positive(), "ln of non-positive value");
    let wp = prec + GUARD;
    let n = d.magnitude().unwrap() - 1;
    let y = d.scale2(-n); // y in [1, 2)
    let num = Interval::point(y.sub(&Dyadic::one()), wp);
    let den = Interval::point(y.add(&Dyadic::one()), wp);
    let z = num.div(&den).expect("y + 1 > 0");
    let s = atanh_series(&z, wp);
    let ln_y = s.scale2(1);
    let result = ln_y.add(&ln2(wp).mul_int(n));
    result.with_prec(prec)
}

/// Enclosure of the natural log over an interval with positive lower end.
pub fn ln(x: &Interval, prec: u32) -> Result<Interval> {
    if !x.is_strictly_positive() {
        return Err(Error::Domain(format!("ln of interval touching zero: {}", x)));
    }
    let lo = ln_point(&x.lo, prec);
    let hi = ln_point(&x.hi, prec);
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone(), prec))
}

/// exp on the fractional part |f| <= 1/2 by Taylor series with tail bound.
fn exp_frac(f: &Dyadic, wp: u32) -> Interval {
    let fi = Interval::point(f.clone(), wp);
    let mut term = Interval::from_int(1, wp);
    let mut sum = Interval::from_int(1, wp);
    let mut n: i64 = 0;
    let threshold = Dyadic::one().scale2(-((wp + 4) as i64));
    loop {
        n += 1;
        term = term.mul(&fi).div(&Interval::from_int(n, wp)).unwrap();
        sum = sum.add(&term);
        let mag = term.lo().abs().max(term.hi().abs());
        if mag < threshold {
            // |tail| <= |f|^(n+1)/(n+1)! * 1/(1-|f|) <= 2 * next term magnitude
            let tail = mag.mul(&f.abs()).scale2(1);
            return Interval::new(sum.lo().sub(&tail), sum.hi().add(&tail), wp);
        }
    }
}

/// Enclosure of exp(d) for a dyadic point.
fn exp_point(d: &Dyadic, prec: u32) -> Interval {
    let w = d.round_to_int();
    let w_i64 = i64::try_from(&w).expect("exp argument out of range");
    let extra = 64 - (w_i64.unsigned_abs().leading_zeros().min(63));
    let wp = prec + GUARD + extra;
    let f = d.sub(&Dyadic::from_bigint(&w));
    let series = exp_frac(&f, wp);
    let e = euler_e(wp);
    let pow = if w_i64 >= 0 {
        powi_pos(&e, w_i64 as u64, wp)
    } else {
        powi_pos(&e, w_i64.unsigned_abs(), wp)
            .recip()
            .expect("positive power")
    };
    pow.mul(&series).with_prec(prec)
}

/// Enclosure of exp over an interval.
pub fn exp(x: &Interval, prec: u32) -> Interval {
    let lo = exp_point(&x.lo, prec);
    let hi = exp_point(&x.hi, prec);
    Interval::new(lo.lo().clone(), hi.hi().clone(), prec)
}

/// Enclosure of sqrt(d) for a non-negative dyadic point.
fn sqrt_point(d: &Dyadic, prec: u32) -> Interval {
    if d.is_zero() {
        return Interval::from_int(0, prec);
    }
    let r = d.to_rational();
    let (num, den) = (r.numer().clone(), r.denom().clone());
    // sqrt(num/den) = sqrt(num * den) / den, with num*den a positive integer
    let prod = &num * &den;
    let bits = prod.bits();
    let want = 2 * (prec as u64 + 4);
    let shift = if bits < want { (want - bits + 1) & !1 } else { 0 };
    let scaled = &prod << shift;
    let root = scaled.sqrt();
    let exact = &root * &root == scaled;
    let lo_num = root.clone();
    let hi_num = if exact { root } else { lo_num.clone() + 1 };
    let scale = -((shift / 2) as i64);
    let den_d = Dyadic::from_bigint(&den);
    let lo = Dyadic::from_bigint(&lo_num)
        .scale2(scale)
        .div(&den_d, prec + 4, Round::Down);
    let hi = Dyadic::from_bigint(&hi_num)
        .scale2(scale)
        .div(&den_d, prec + 4, Round::Up);
    Interval::new(lo, hi, prec).with_prec(prec)
}

/// Enclosure of sqrt over a non-negative interval.
pub fn sqrt(x: &Interval, prec: u32) -> Result<Interval> {
    if x.lo.is_negative() {
        return Err(Error::Domain(format!("sqrt of interval with negative end: {}", x)));
    }
    let lo = sqrt_point(&x.lo, prec);
    let hi = sqrt_point(&x.hi, prec);
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone(), prec))
}

/// u^v for u strictly positive, computed as exp(v ln u).
pub fn pow_real(u: &Interval, v: &Interval, prec: u32) -> Result<Interval> {
    let wp = prec + GUARD;
    let l = ln(&u.with_prec(wp), wp)?;
    Ok(exp(&v.with_prec(wp).mul(&l), prec))
}

/// Enclosure of sqrt(2 pi) / e^2.
pub fn sqrt_2pi_over_e2(prec: u32) -> Interval {
    let wp = prec + GUARD;
    let two_pi = pi(wp).scale2(1);
    let s = sqrt(&two_pi, wp).expect("2 pi positive");
    let e2 = exp(&Interval::from_int(2, wp), wp);
    s.div(&e2).expect("e^2 positive").with_prec(prec)
}

/// Enclosure of ln(sqrt(2 pi)) - 2 = ln(2 pi)/2 - 2.
pub fn ln_sqrt_2pi_minus_2(prec: u32) -> Interval {
    let wp = prec + GUARD;
    let two_pi = pi(wp).scale2(1);
    let l = ln(&two_pi, wp).expect("2 pi positive").scale2(-1);
    l.sub(&Interval::from_int(2, wp)).with_prec(prec)
}

/// Enclosure of ln(n!) from the two-sided Stirling bound
/// `n! = sqrt(2 pi n) n^n e^(-n) e^(theta/(12n))` with `theta in (0, 1)`.
pub fn stirling_log_factorial(n: u64, prec: u32) -> Result<Interval> {
    if n == 0 {
        return Err(Error::Precondition("stirling_log_factorial requires n >= 1".into()));
    }
    let wp = prec + GUARD;
    let n_iv = Interval::from_int(n as i64, wp);
    let two_pi_n = pi(wp).scale2(1).mul(&n_iv);
    let half_log = ln(&two_pi_n, wp)?.scale2(-1);
    let n_log_n = n_iv.mul(&ln(&n_iv, wp)?);
    let base = half_log.add(&n_log_n).sub(&n_iv);
    // theta in (0,1): add [0, 1/(12n)]
    let slack = Interval::from_int(1, wp)
        .div(&Interval::from_int(12 * n as i64, wp))?
        .hi()
        .clone();
    Ok(Interval::new(base.lo().clone(), base.hi().add(&slack), wp).with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2_REF: &str =
        "0.693147180559945309417232121458176568075500134360255254120680009493393621969694715605863326996418687542001481020570685733685520235758";
    const LN10_REF: &str =
        "2.30258509299404568401799145468436420760110148862877297603332790096757260967735248023599720508959829834196778404228624863340952546508";
    const PI_REF: &str =
        "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955";
    const E_REF: &str =
        "2.71828182845904523536028747135266249775724709369995957496696762772407663035354759457138217852516642742746639193200305992181741359663";

    fn rat(s: &str) -> BigRational {
        // parse a plain decimal string into an exact rational
        let (sign, body) = if let Some(stripped) = s.strip_prefix('-') {
            (-1, stripped)
        } else {
            (1, s)
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((a, b)) => (a, b),
            None => (body, ""),
        };
        let digits: BigInt = format!("{}{}", int_part, frac_part).parse().unwrap();
        let den = BigInt::from(10u8).pow(frac_part.len() as u32);
        BigRational::new(digits * sign, den)
    }

    #[test]
    fn ln2_reference_digits() {
        let iv = ln2(256);
        let r = rat(LN2_REF);
        assert!(iv.contains_rational(&r), "ln2 enclosure {} misses reference", iv);
        let w = iv.width().to_rational();
        assert!(w < BigRational::new(BigInt::one(), BigInt::one() << 200), "width {}", iv.width());
    }

    #[test]
    fn pi_and_e_reference_digits() {
        let p = pi(256);
        assert!(p.contains_rational(&rat(PI_REF)));
        assert!(p.width().to_rational() < BigRational::new(BigInt::one(), BigInt::one() << 200));
        let e = euler_e(256);
        assert!(e.contains_rational(&rat(E_REF)));
        assert!(e.width().to_rational() < BigRational::new(BigInt::one(), BigInt::one() << 200));
    }

    #[test]
    fn ln10_via_ln() {
        let x = Interval::from_int(10, 256);
        let iv = ln(&x, 256).unwrap();
        assert!(iv.contains_rational(&rat(LN10_REF)), "ln10 {}", iv);
        assert!(iv.width().to_rational() < BigRational::new(BigInt::one(), BigInt::one() << 200));
    }

    #[test]
    fn ln_of_two_tight() {
        let iv = ln(&Interval::from_int(2, 128), 128).unwrap();
        assert!(iv.contains_rational(&rat(LN2_REF)));
        assert!(iv.width().to_rational() < BigRational::new(BigInt::one(), BigInt::one() << 100));
    }

    #[test]
    fn exp_identity_cases() {
        let one = exp(&Interval::from_int(0, 128), 128);
        assert!(one.contains_rational(&BigRational::from_integer(BigInt::one())));
        assert!(one.width().to_rational() < BigRational::new(BigInt::one(), BigInt::one() << 100));
        // exp(1) contains e
        let e1 = exp(&Interval::from_int(1, 128), 128);
        assert!(e1.contains_rational(&rat(E_REF)));
    }

    #[test]
    fn sqrt_of_four() {
        let iv = sqrt(&Interval::from_int(4, 128), 128).unwrap();
        assert!(iv.contains_rational(&big(2)));
        assert!(iv.width().to_rational() < BigRational::new(BigInt::one(), BigInt::one() << 100));
        // sqrt(2)^2 contains 2
        let s2 = sqrt(&Interval::from_int(2, 128), 128).unwrap();
        assert!(s2.square().contains_rational(&big(2)));
    }

    #[test]
    fn exp_ln_roundtrip_contains() {
        for v in [3i64, 7, 100, 443] {
            let x = Interval::from_int(v, 128);
            let l = ln(&x, 128).unwrap();
            let back = exp(&l, 128);
            assert!(back.contains_rational(&big(v)), "roundtrip {} -> {}", v, back);
        }
    }

    #[test]
    fn exp_large_argument() {
        // exp(ln(2)*100) must contain 2^100
        let l = ln(&Interval::from_int(2, 192), 192).unwrap();
        let x = l.mul_int(100);
        let big_pow = exp(&x, 192);
        assert!(big_pow.contains_rational(&BigRational::from_integer(BigInt::one() << 100)));
    }

    #[test]
    fn division_brackets() {
        let a = Interval::from_int(1, 64);
        let b = Interval::from_int(3, 64);
        let q = a.div(&b).unwrap();
        assert!(q.contains_rational(&BigRational::new(BigInt::one(), BigInt::from(3))));
        assert!(a.div(&Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1), 64)).is_err());
    }

    #[test]
    fn square_straddling_zero() {
        let x = Interval::new(Dyadic::from_int(-2), Dyadic::from_int(3), 64);
        let s = x.square();
        assert_eq!(*s.lo(), Dyadic::zero());
        assert_eq!(*s.hi(), Dyadic::from_int(9));
    }

    #[test]
    fn stirling_contains_exact_factorials() {
        let mut fact = BigInt::one();
        for n in 1u64..=200 {
            fact *= n;
            let iv = stirling_log_factorial(n, 128).unwrap();
            let back = exp(&iv, 128);
            assert!(
                back.contains_rational(&BigRational::from_integer(fact.clone())),
                "{}! = {} not in {}",
                n,
                fact,
                back
            );
        }
    }

    #[test]
    fn stirling_small_values() {
        let iv = stirling_log_factorial(1, 128).unwrap();
        assert!(iv.contains_rational(&big(0)));
        let iv10 = stirling_log_factorial(10, 128).unwrap();
        assert!(iv10.contains_rational(&rat("15.10441257307551529522570932925107037188")));
        // theta slack dominates the width at n = 100
        let iv100 = stirling_log_factorial(100, 128).unwrap();
        let w = iv100.width().to_rational();
        assert!(w > BigRational::new(BigInt::one(), BigInt::from(1300)));
        assert!(w < BigRational::new(BigInt::one(), BigInt::from(1199)));
    }

    #[test]
    fn monotone_refinement() {
        for p in [64u32, 128, 256] {
            let a = ln(&Interval::from_int(443, p), p).unwrap();
            let b = ln(&Interval::from_int(443, p + 32), p + 32).unwrap();
            assert!(b.width() <= a.width());
            let ea = exp(&Interval::from_int(7, p), p);
            let eb = exp(&Interval::from_int(7, p + 32), p + 32);
            assert!(eb.width() <= ea.width());
        }
    }

    #[test]
    fn pow_real_matches_integer_powers() {
        let u = Interval::from_int(443, 160);
        let v = Interval::from_int(3, 160);
        let p = pow_real(&u, &v, 160).unwrap();
        assert!(p.contains_rational(&big(443 * 443 * 443)));
    }
}
