//! Real numbers known either exactly or through a certified rational
//! enclosure.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use crate::arith::{fmt_rational, isqrt, rational_sqrt, Natural, Rational};
use crate::error::{Error, Result};

/// A real value: either an exact rational or a closed interval `[lo, hi]`
/// with rational endpoints that is guaranteed to contain it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Real {
    Exact(Rational),
    Interval { lo: Rational, hi: Rational },
}

/// Three-valued comparison result for enclosures that may straddle a
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    True,
    False,
    Indeterminate,
}

impl Tri {
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Indeterminate,
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl Real {
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        if lo == hi {
            Real::Exact(lo)
        } else {
            Real::Interval { lo, hi }
        }
    }

    /// The non-negative square root of `q`: exact when `q` is a rational
    /// square, otherwise enclosed in an interval of width at most `2^-bits`.
    pub fn sqrt_of(q: &Rational, bits: u32) -> Result<Self> {
        if let Some(s) = rational_sqrt(q)? {
            return Ok(Real::Exact(s));
        }
        // sqrt(n/d) = sqrt(n*d)/d; scale by 4^bits before taking the floor.
        let n = q.numer().magnitude();
        let d = q.denom().magnitude();
        let scaled: Natural = (n * d) << (2 * bits as usize);
        let root = isqrt(&scaled);
        let denom = BigInt::from_biguint(Sign::Plus, d << bits as usize);
        let lo = Rational::new(BigInt::from_biguint(Sign::Plus, root.clone()), denom.clone());
        let hi = Rational::new(BigInt::from_biguint(Sign::Plus, root + 1u32), denom);
        Ok(Real::interval(lo, hi))
    }

    pub fn lo(&self) -> &Rational {
        match self {
            Real::Exact(x) => x,
            Real::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            Real::Exact(x) => x,
            Real::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(x) => Some(x),
            Real::Interval { .. } => None,
        }
    }

    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    pub fn add_rational(&self, r: &Rational) -> Real {
        Real::interval(self.lo() + r, self.hi() + r)
    }

    /// Multiplies by a rational constant.
    pub fn scale(&self, k: &Rational) -> Real {
        let (a, b) = (self.lo() * k, self.hi() * k);
        if a <= b {
            Real::interval(a, b)
        } else {
            Real::interval(b, a)
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let products = [
            self.lo() * other.lo(),
            self.lo() * other.hi(),
            self.hi() * other.lo(),
            self.hi() * other.hi(),
        ];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.iter().max().expect("nonempty").clone();
        Real::interval(lo, hi)
    }

    /// Enclosure of `self²`.
    pub fn square(&self) -> Real {
        if self.lo().is_negative() && self.hi().is_positive() {
            let m = std::cmp::max(self.lo().abs(), self.hi().abs());
            Real::interval(Rational::zero(), &m * &m)
        } else {
            self.mul(self)
        }
    }

    pub fn gt(&self, r: &Rational) -> Tri {
        if self.lo() > r {
            Tri::True
        } else if self.hi() <= r {
            Tri::False
        } else {
            Tri::Indeterminate
        }
    }

    pub fn lt(&self, r: &Rational) -> Tri {
        if self.hi() < r {
            Tri::True
        } else if self.lo() >= r {
            Tri::False
        } else {
            Tri::Indeterminate
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let mid = (self.lo() + self.hi()) / Rational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn parse(s: &str) -> Result<Real> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let q = crate::arith::parse_rational(inner)?;
            if q.is_negative() {
                return Err(Error::Domain(format!("square root of negative {s}")));
            }
            return Real::sqrt_of(&q, 96);
        }
        crate::arith::parse_rational(s).map(Real::Exact)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(x) => f.write_str(&fmt_rational(x)),
            Real::Interval { lo, hi } => write!(f, "[{}, {}]", fmt_rational(lo), fmt_rational(hi)),
        }
    }
}

impl From<Rational> for Real {
    fn from(x: Rational) -> Self {
        Real::Exact(x)
    }
}
