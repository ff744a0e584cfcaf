//! Exact big-integer combinatorics and certified integer floors of
//! transcendental quantities.

use crate::error::{Error, Result};
use crate::interval::{self, Interval};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact binomial coefficient C(n, r); returns 0 when r > n.
pub fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1; // exact: C(n, i+1) is an integer
    }
    acc
}

/// floor(2 ln k), decided by refining an enclosure of ln k until the
/// floor is unambiguous. `2 ln k` is irrational for k > 1, so the
/// refinement terminates; machine floating point is never consulted.
pub fn floor_two_log(k: u64) -> u64 {
    assert!(k >= 1, "floor_two_log requires k >= 1");
    if k == 1 {
        return 0;
    }
    let mut prec = 64;
    loop {
        let lnk = interval::ln(&Interval::from_int(k as i64, prec), prec)
            .expect("k >= 1 is positive");
        let two = lnk.scale2(1);
        let flo = two.lo().floor();
        let fhi = two.hi().floor();
        if flo == fhi {
            return u64::try_from(&flo).expect("floor of 2 ln k is a small non-negative integer");
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "floor_two_log failed to converge for k = {}", k);
    }
}

/// Decide `m >= c * ln k` exactly by enclosure refinement (the two sides
/// are never equal for integer m >= 1, c >= 1, k >= 2).
pub fn ge_c_ln_k(m: u64, c: u64, k: u64) -> bool {
    assert!(k >= 1);
    if k == 1 {
        return true; // ln 1 = 0, so any m >= 0 clears the bound
    }
    let m_iv = BigInt::from(m);
    let mut prec = 64;
    loop {
        let lnk = interval::ln(&Interval::from_int(k as i64, prec), prec)
            .expect("k positive");
        let rhs = lnk.mul_int(c as i64);
        if rhs.hi().to_rational() < num_rational::BigRational::from_integer(m_iv.clone()) {
            return true;
        }
        if rhs.lo().to_rational() > num_rational::BigRational::from_integer(m_iv.clone()) {
            return false;
        }
        prec *= 2;
        assert!(prec <= 1 << 20, "comparison failed to converge");
    }
}

/// Guard for preconditions of the form `lo <= value <= hi`.
pub fn check_range(name: &'static str, value: i64, min: i64, max: i64) -> Result<()> {
    if value < min || value > max {
        return Err(Error::IndexOutOfRange { name, value, min, max });
    }
    Ok(())
}

/// Exact factorial, used as an independent oracle in tests.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

pub fn is_nonneg(x: &BigInt) -> bool {
    !x.is_negative()
}
