//! Arbitrary-precision integer and rational primitives.
//!
//! Everything downstream is exact: naturals are [`BigUint`], rationals are
//! [`BigRational`], which keeps its numerator and denominator reduced with a
//! positive denominator after every operation.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Natural = BigUint;
pub type Rational = BigRational;

/// Builds the reduced rational `num/den`. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Floor of the square root, by Newton iteration from an over-estimate.
pub fn isqrt(n: &Natural) -> Natural {
    if n < &Natural::from(2u32) {
        return n.clone();
    }
    // 2^ceil(bits/2) > sqrt(n), so the iteration decreases monotonically
    // until it reaches the floor.
    let mut x = Natural::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            break;
        }
        x = y;
    }
    while &x * &x > *n {
        x -= 1u32;
    }
    loop {
        let next = &x + 1u32;
        if &next * &next <= *n {
            x = next;
        } else {
            break;
        }
    }
    x
}

pub fn is_perfect_square(n: &Natural) -> Option<Natural> {
    // Squares mod 16 are 0, 1, 4, 9.
    let low = n.iter_u32_digits().next().unwrap_or(0) & 15;
    if !matches!(low, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = isqrt(n);
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a non-negative rational, when one exists.
pub fn rational_sqrt(r: &Rational) -> Result<Option<Rational>> {
    if r.is_negative() {
        return Err(Error::Domain(format!("square root of negative rational {r}")));
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let Some(sn) = is_perfect_square(num) else {
        return Ok(None);
    };
    let Some(sd) = is_perfect_square(den) else {
        return Ok(None);
    };
    Ok(Some(Rational::new(
        BigInt::from_biguint(Sign::Plus, sn),
        BigInt::from_biguint(Sign::Plus, sd),
    )))
}

pub fn lcm_many(ds: &[Natural]) -> Result<Natural> {
    if ds.is_empty() {
        return Err(Error::EmptyInput("lcm_many"));
    }
    let mut acc = Natural::one();
    for d in ds {
        if d.is_zero() {
            return Err(Error::ZeroEntry("lcm_many"));
        }
        acc = acc.lcm(d);
    }
    Ok(acc)
}

/// Formats a rational as `p/q`, always including the denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

pub fn to_natural(r: &Rational) -> Option<Natural> {
    if r.is_integer() && !r.is_negative() {
        Some(r.numer().magnitude().clone())
    } else {
        None
    }
}

pub fn from_natural(n: &Natural) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
}
