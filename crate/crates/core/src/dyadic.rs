//! Exact dyadic rationals `mant * 2^exp` with directed rounding.
//!
//! These are the endpoint type for the interval arithmetic: addition,
//! subtraction and multiplication are exact, and every rounding step is
//! explicit and directed (toward minus or plus infinity). No binary
//! floating point is involved anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward minus infinity.
    Down,
    /// Toward plus infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// An exact dyadic rational `mant * 2^exp`, canonicalized so that `mant`
/// is odd (or zero, with `exp = 0`).
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn from_bigint(n: &BigInt) -> Dyadic {
        Dyadic::new(n.clone(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(magnitude-1) <= |self| < 2^magnitude`.
    /// Zero returns `None`.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 + self.exp)
        }
    }

    /// Exact scale by a power of two.
    pub fn scale2(&self, n: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + n }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: if self.mant.is_zero() { 0 } else { self.exp } }
    }

    pub fn add(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let ma = &self.mant << u64::try_from(self.exp - e).expect("exponent overflow");
        let mb = &rhs.mant << u64::try_from(rhs.exp - e).expect("exponent overflow");
        Dyadic::new(ma + mb, e)
    }

    pub fn sub(&self, rhs: &Dyadic) -> Dyadic {
        self.add(&rhs.clone().neg())
    }

    pub fn mul(&self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }

    pub fn mul_int(&self, n: i64) -> Dyadic {
        Dyadic::new(&self.mant * n, self.exp)
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = bits - prec as u64;
        let divisor = BigInt::one() << drop;
        let (q, r) = self.mant.div_mod_floor(&divisor);
        let exact = r.is_zero();
        let mant = match dir {
            Round::Down => q,
            Round::Up => {
                if exact {
                    q
                } else {
                    q + 1
                }
            }
        };
        Dyadic::new(mant, self.exp + drop as i64)
    }

    /// Directed division to `prec` significant bits.
    pub fn div(&self, rhs: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the quotient carries prec + 2 bits.
        let want = prec as i64 + 2;
        let shift = (want + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0) as u64;
        let num = &self.mant << shift;
        let (q, r) = num.div_mod_floor(&rhs.mant);
        // div_mod_floor gives q = floor(num/den) for any sign combination.
        let mant = match dir {
            Round::Down => q,
            Round::Up => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
        };
        Dyadic::new(mant, self.exp - rhs.exp - shift as i64).round(prec, dir)
    }

    /// Directed conversion from an exact rational.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_bigint(num).div(&Dyadic::from_bigint(den), prec, dir)
    }

    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(r.numer(), r.denom(), prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    /// Nearest integer (ties toward even).
    pub fn round_to_int(&self) -> BigInt {
        let fl = self.floor();
        let twice = self.scale2(1);
        if twice.floor() == (&fl << 1u8) {
            return fl; // fractional part < 1/2
        }
        // Canonical form has an odd mantissa, so 2x is an integer iff exp >= 0;
        // together with frac >= 1/2 that pins the exact tie x = fl + 1/2.
        let exact_half = twice.exp >= 0;
        if exact_half && fl.is_even() {
            fl
        } else {
            fl + 1
        }
    }

    /// Exact decimal rendering (dyadics have finite decimal expansions).
    pub fn to_decimal_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.exp >= 0 {
            return (&self.mant << self.exp as u64).to_string();
        }
        let n = (-self.exp) as u64;
        let scaled: BigInt = &self.mant * BigInt::from(5u8).pow(n as u32);
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let digits = if (digits.len() as u64) <= n {
            format!("{}{}", "0".repeat((n + 1 - digits.len() as u64) as usize), digits)
        } else {
            digits
        };
        let point = digits.len() - n as usize;
        let (int_part, frac_part) = digits.split_at(point);
        let frac_part = frac_part.trim_end_matches('0');
        let body = if frac_part.is_empty() {
            int_part.to_string()
        } else {
            format!("{}.{}", int_part, frac_part)
        };
        if neg {
            format!("-{}", body)
        } else {
            body
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (num_bigint::Sign::Minus, num_bigint::Sign::NoSign | num_bigint::Sign::Plus) => {
                return Ordering::Less
            }
            (num_bigint::Sign::NoSign | num_bigint::Sign::Plus, num_bigint::Sign::Minus) => {
                return Ordering::Greater
            }
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => return Ordering::Equal,
            (num_bigint::Sign::NoSign, num_bigint::Sign::Plus) => return Ordering::Less,
            (num_bigint::Sign::Plus, num_bigint::Sign::NoSign) => return Ordering::Greater,
            _ => {}
        }
        // Same nonzero sign: compare magnitudes first via leading-bit position.
        let (ma, mb) = (self.magnitude().unwrap(), other.magnitude().unwrap());
        let pos = self.mant.is_positive();
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if pos { ord } else { ord.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << u64::try_from(self.exp - e).unwrap();
        let b = &other.mant << u64::try_from(other.exp - e).unwrap();
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({})", self.to_decimal_string())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn canonical_form() {
        let x = d(12, 0); // 12 = 3 * 2^2
        assert_eq!(x, d(3, 2));
        assert_eq!(Dyadic::zero(), d(0, 57));
    }

    #[test]
    fn exact_ops() {
        let a = d(3, -2); // 0.75
        let b = d(1, -1); // 0.5
        assert_eq!(a.add(&b), d(5, -2));
        assert_eq!(a.sub(&b), d(1, -2));
        assert_eq!(a.mul(&b), d(3, -3));
        assert_eq!(a.to_decimal_string(), "0.75");
        assert_eq!(d(-5, -3).to_decimal_string(), "-0.625");
        assert_eq!(d(7, 2).to_decimal_string(), "28");
    }

    #[test]
    fn ordering() {
        assert!(d(1, -1) < d(3, -2));
        assert!(d(-3, -2) < d(-1, -1));
        assert!(d(-1, 10) < d(1, -10));
        assert_eq!(d(4, -2), d(1, 0));
    }

    #[test]
    fn directed_rounding() {
        // 0.3125 = 5/16 = 101.b * 2^-4; at 2 bits: down -> 0.25, up -> 0.375
        let x = d(5, -4);
        assert_eq!(x.round(2, Round::Down), d(1, -2));
        assert_eq!(x.round(2, Round::Up), d(3, -3));
        // negative: -5/16 at 2 bits: down -> -0.375, up -> -0.25
        let y = d(-5, -4);
        assert_eq!(y.round(2, Round::Down), d(-3, -3));
        assert_eq!(y.round(2, Round::Up), d(-1, -2));
        // exact stays exact
        assert_eq!(x.round(3, Round::Down), x);
        assert_eq!(x.round(3, Round::Up), x);
    }

    #[test]
    fn directed_division() {
        // 1/3 rounded both ways must bracket the true value
        let one = Dyadic::one();
        let three = d(3, 0);
        let lo = one.div(&three, 20, Round::Down);
        let hi = one.div(&three, 20, Round::Up);
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!(hi.sub(&lo).to_rational() < BigRational::new(BigInt::from(1), BigInt::from(1) << 18));
        // negative numerator brackets too
        let lo = d(-1, 0).div(&three, 20, Round::Down);
        let hi = d(-1, 0).div(&three, 20, Round::Up);
        assert!(lo.to_rational() < -third.clone() && -third < hi.to_rational());
        // exact division is exact in both directions
        assert_eq!(d(6, 0).div(&three, 8, Round::Down), d(2, 0));
        assert_eq!(d(6, 0).div(&three, 8, Round::Up), d(2, 0));
    }

    #[test]
    fn floor_and_round_to_int() {
        assert_eq!(d(5, -1).floor(), BigInt::from(2)); // 2.5
        assert_eq!(d(-5, -1).floor(), BigInt::from(-3));
        assert_eq!(d(5, -1).round_to_int(), BigInt::from(2)); // tie to even
        assert_eq!(d(7, -1).round_to_int(), BigInt::from(4)); // 3.5 -> 4
        assert_eq!(d(-5, -1).round_to_int(), BigInt::from(-2)); // -2.5 -> -2
        assert_eq!(d(11, -2).round_to_int(), BigInt::from(3)); // 2.75 -> 3
        assert_eq!(d(9, -2).round_to_int(), BigInt::from(2)); // 2.25 -> 2
    }
}
