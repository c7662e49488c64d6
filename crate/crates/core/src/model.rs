//! Integer cuboids, their classification, and the passage to rational
//! points on the unit sphere and back.
//!
//! Labeling: `alpha` is the diagonal of the (b,c) face, `beta` of the (c,a)
//! face, `gamma` of the (a,b) face, and `d` is the space diagonal. After
//! division by `d` the face diagonals become `d1 = alpha/d`, `d2 = beta/d`,
//! `d3 = gamma/d`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{from_natural, is_perfect_square, lcm_many, to_natural, Natural, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuboidSeptuple {
    pub a: Natural,
    pub b: Natural,
    pub c: Natural,
    pub alpha: Natural,
    pub beta: Natural,
    pub gamma: Natural,
    pub d: Natural,
}

impl CuboidSeptuple {
    pub fn new(values: [Natural; 7]) -> Result<Self> {
        if values.iter().any(Zero::is_zero) {
            return Err(Error::Domain("septuple entries must be positive".into()));
        }
        let [a, b, c, alpha, beta, gamma, d] = values;
        Ok(Self { a, b, c, alpha, beta, gamma, d })
    }

    pub fn from_u64(values: [u64; 7]) -> Result<Self> {
        Self::new(values.map(Natural::from))
    }

    pub fn entries(&self) -> [&Natural; 7] {
        [&self.a, &self.b, &self.c, &self.alpha, &self.beta, &self.gamma, &self.d]
    }

    /// Truth of each defining equation, in the order
    /// `a²+b²=γ²`, `b²+c²=α²`, `c²+a²=β²`, `a²+b²+c²=d²`.
    pub fn equations(&self) -> [bool; 4] {
        let (a2, b2, c2) = (sq(&self.a), sq(&self.b), sq(&self.c));
        [
            &a2 + &b2 == sq(&self.gamma),
            &b2 + &c2 == sq(&self.alpha),
            &c2 + &a2 == sq(&self.beta),
            a2 + b2 + c2 == sq(&self.d),
        ]
    }

    pub fn gcd(&self) -> Natural {
        self.entries().iter().fold(Natural::zero(), |g, x| g.gcd(x))
    }

    pub fn scaled(&self, k: &Natural) -> Self {
        Self {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            alpha: &self.alpha * k,
            beta: &self.beta * k,
            gamma: &self.gamma * k,
            d: &self.d * k,
        }
    }
}

fn sq(n: &Natural) -> Natural {
    n * n
}

pub fn verify_perfect(s: &CuboidSeptuple) -> bool {
    s.equations().iter().all(|&ok| ok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CuboidClass {
    Perfect,
    EulerBrick,
    FaceCuboid,
    Other,
}

impl CuboidClass {
    pub fn name(self) -> &'static str {
        match self {
            CuboidClass::Perfect => "PERFECT",
            CuboidClass::EulerBrick => "EULER_BRICK",
            CuboidClass::FaceCuboid => "FACE_CUBOID",
            CuboidClass::Other => "OTHER",
        }
    }
}

impl fmt::Display for CuboidClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which of the four diagonals of an edge triple are integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TripleClassification {
    pub edges: [u64; 3],
    /// Diagonal of the (a,b) face.
    pub gamma: Option<u64>,
    /// Diagonal of the (b,c) face.
    pub alpha: Option<u64>,
    /// Diagonal of the (c,a) face.
    pub beta: Option<u64>,
    pub d: Option<u64>,
}

impl TripleClassification {
    pub fn face_count(&self) -> usize {
        [self.gamma, self.alpha, self.beta].iter().filter(|x| x.is_some()).count()
    }

    pub fn class(&self) -> CuboidClass {
        match (self.face_count(), self.d.is_some()) {
            (3, true) => CuboidClass::Perfect,
            (3, false) => CuboidClass::EulerBrick,
            (2, true) => CuboidClass::FaceCuboid,
            _ => CuboidClass::Other,
        }
    }

    /// Relabels a face cuboid so that the missing face diagonal is the (a,b)
    /// face, with `a >= b`.
    pub fn face_cuboid_labeling(&self) -> Result<FaceCuboidLabeling> {
        if self.class() != CuboidClass::FaceCuboid {
            return Err(Error::NotFaceCuboid(self.edges));
        }
        let [a, b, c] = self.edges;
        // (missing-face edges, remaining edge)
        let (p, q, r) = if self.gamma.is_none() {
            (a, b, c)
        } else if self.alpha.is_none() {
            (b, c, a)
        } else {
            (c, a, b)
        };
        let (x, y) = if p >= q { (p, q) } else { (q, p) };
        let alpha = isqrt_u64(y, r);
        let beta = isqrt_u64(r, x);
        match (alpha, beta, self.d) {
            (Some(alpha), Some(beta), Some(d)) => Ok(FaceCuboidLabeling { a: x, b: y, c: r, alpha, beta, d }),
            _ => Err(Error::Internal(format!("inconsistent face cuboid flags for {:?}", self.edges))),
        }
    }
}

/// A face cuboid relabeled so the (a,b) face diagonal is the irrational one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceCuboidLabeling {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub alpha: u64,
    pub beta: u64,
    pub d: u64,
}

impl FaceCuboidLabeling {
    /// `(x1, x2, x3, d1, d2)`: every normalized quantity except the missing `d3`.
    pub fn normalized(&self) -> [Rational; 5] {
        let d = Natural::from(self.d);
        [self.a, self.b, self.c, self.alpha, self.beta]
            .map(|v| from_natural(&Natural::from(v)) / from_natural(&d))
    }
}

fn isqrt_u64(x: u64, y: u64) -> Option<u64> {
    let s = Natural::from(x) * x + Natural::from(y) * y;
    is_perfect_square(&s).map(|r| r.try_into().expect("diagonal fits in u64"))
}

pub fn classify_triple(a: u64, b: u64, c: u64) -> Result<TripleClassification> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::Domain("edges must be positive".into()));
    }
    let [a2, b2, c2] = [a, b, c].map(|x| Natural::from(x) * x);
    let root = |n: &Natural| is_perfect_square(n).map(|r| u64::try_from(r).expect("diagonal fits in u64"));
    Ok(TripleClassification {
        edges: [a, b, c],
        gamma: root(&(&a2 + &b2)),
        alpha: root(&(&b2 + &c2)),
        beta: root(&(&c2 + &a2)),
        d: root(&(a2 + b2 + c2)),
    })
}

/// The six positive rationals `x1, x2, x3, d1, d2, d3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitVectorPoint {
    pub x1: Rational,
    pub x2: Rational,
    pub x3: Rational,
    pub d1: Rational,
    pub d2: Rational,
    pub d3: Rational,
}

impl UnitVectorPoint {
    pub fn components(&self) -> [&Rational; 6] {
        [&self.x1, &self.x2, &self.x3, &self.d1, &self.d2, &self.d3]
    }

    /// Truth of `x1²+x2²+x3²=1`, `x1²+x2²=d3²`, `x2²+x3²=d1²`, `x3²+x1²=d2²`.
    pub fn equations(&self) -> [bool; 4] {
        let s = |r: &Rational| r * r;
        let (x1, x2, x3) = (s(&self.x1), s(&self.x2), s(&self.x3));
        [
            &x1 + &x2 + &x3 == Rational::one(),
            &x1 + &x2 == s(&self.d3),
            &x2 + &x3 == s(&self.d1),
            &x3 + &x1 == s(&self.d2),
        ]
    }

    pub fn is_valid(&self) -> bool {
        self.components().iter().all(|r| r.is_positive()) && self.equations().iter().all(|&ok| ok)
    }
}

/// Divides each value by `d`.
pub fn normalize_components(values: &[Natural], d: &Natural) -> Result<Vec<Rational>> {
    if d.is_zero() {
        return Err(Error::ZeroDenominator("normalize_components"));
    }
    let d = from_natural(d);
    Ok(values.iter().map(|v| from_natural(v) / &d).collect())
}

/// Clears denominators: returns `(L, [v * L])` with `L` the LCM of the
/// reduced denominators.
pub fn denormalize_components(values: &[Rational]) -> Result<(Natural, Vec<Natural>)> {
    if values.iter().any(|v| !v.is_positive()) {
        return Err(Error::Domain("components must be positive".into()));
    }
    let dens: Vec<Natural> = values.iter().map(|v| v.denom().magnitude().clone()).collect();
    let l = lcm_many(&dens)?;
    let lr = from_natural(&l);
    let ints = values
        .iter()
        .map(|v| to_natural(&(v * &lr)).ok_or_else(|| Error::NonIntegral(format!("{v} * {l}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((l, ints))
}

pub fn normalize(s: &CuboidSeptuple) -> Result<UnitVectorPoint> {
    if !verify_perfect(s) {
        return Err(Error::NotPerfect);
    }
    let v = normalize_components(
        &[s.a.clone(), s.b.clone(), s.c.clone(), s.alpha.clone(), s.beta.clone(), s.gamma.clone()],
        &s.d,
    )?;
    let [x1, x2, x3, d1, d2, d3]: [Rational; 6] = v.try_into().expect("six components");
    Ok(UnitVectorPoint { x1, x2, x3, d1, d2, d3 })
}

pub fn denormalize(p: &UnitVectorPoint) -> Result<CuboidSeptuple> {
    if !p.is_valid() {
        return Err(Error::Domain("point is not a positive rational solution of the unit-sphere system".into()));
    }
    let comps: Vec<Rational> = p.components().into_iter().cloned().collect();
    let (d, ints) = denormalize_components(&comps)?;
    let [a, b, c, alpha, beta, gamma]: [Natural; 6] = ints.try_into().expect("six components");
    let s = CuboidSeptuple::new([a, b, c, alpha, beta, gamma, d])?;
    if !verify_perfect(&s) {
        return Err(Error::Internal("denormalized septuple fails verification".into()));
    }
    Ok(s)
}
