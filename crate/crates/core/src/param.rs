//! The two-parameter rational map `(u, z) -> (x1, x2, x3, d1)` onto the
//! unit sphere, the squared quantities `a²`, `b²` it induces, and the
//! auxiliary linear system relating them back to `u` and `z`.
//!
//! Only squares of `a` and `b` are stored. Every downstream formula uses
//! even powers of them, so the whole pipeline stays in exact rationals.

use num_traits::{One, Signed, Zero};

use crate::arith::{from_natural, rat_int, Natural, Rational};
use crate::error::{Error, Result};
use crate::interval::{Real, Tri};
use crate::model::TripleClassification;

/// A parameter point of the open unit square `0 < u < 1`, `0 < z < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamUZ {
    u: Rational,
    z: Rational,
}

impl ParamUZ {
    pub fn new(u: Rational, z: Rational) -> Result<Self> {
        if !in_domain_uz(&u, &z) {
            return Err(Error::Domain(format!("({u}, {z}) is outside the open unit square")));
        }
        Ok(Self { u, z })
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn z(&self) -> &Rational {
        &self.z
    }

    pub fn u_sq(&self) -> Rational {
        &self.u * &self.u
    }

    pub fn z_sq(&self) -> Rational {
        &self.z * &self.z
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquaredAB {
    pub a_sq: Rational,
    pub b_sq: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AuxQuantities {
    pub xi: Rational,
    pub zeta: Rational,
    pub theta: Rational,
}

/// Normalized edges `x1, x2, x3` and the `(b,c)`-face diagonal `d1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ForwardPoint {
    pub x1: Rational,
    pub x2: Rational,
    pub x3: Rational,
    pub d1: Rational,
}

pub fn in_domain_uz(u: &Rational, z: &Rational) -> bool {
    let unit = |x: &Rational| x.is_positive() && x < &Rational::one();
    unit(u) && unit(z)
}

/// Tangent half-angle point `(2u/(1+u²), (1-u²)/(1+u²))` on the unit circle.
pub fn circle_point(u: &Rational) -> Result<(Rational, Rational)> {
    if !(u.is_positive() && u < &Rational::one()) {
        return Err(Error::Domain(format!("u = {u} is outside (0, 1)")));
    }
    Ok(half_angle(u))
}

fn half_angle(t: &Rational) -> (Rational, Rational) {
    let t2 = t * t;
    let one = Rational::one();
    let den = &one + &t2;
    (rat_int(2) * t / &den, (one - t2) / den)
}

pub fn forward(p: &ParamUZ) -> ForwardPoint {
    let (x1, d1) = half_angle(&p.u);
    let (sz, cz) = half_angle(&p.z);
    ForwardPoint { x2: &d1 * sz, x3: &d1 * cz, x1, d1 }
}

/// `(1+u²)(1+z²)` and `2z(1-u²)`, the two building blocks of `ζ` and `b²`.
fn zeta_parts(p: &ParamUZ) -> (Rational, Rational) {
    let one = Rational::one();
    let u2 = p.u_sq();
    let prod = (&one + &u2) * (&one + p.z_sq());
    let twist = rat_int(2) * &p.z * (one - u2);
    (prod, twist)
}

pub fn d3_squared(p: &ParamUZ) -> Rational {
    let (u2, z2) = (p.u_sq(), p.z_sq());
    let one = Rational::one();
    let den = (&one + &u2) * (&one + &z2);
    rat_int(4) * (&u2 * &z2 + &one) * (&u2 + &z2) / (&den * &den)
}

pub fn d2_squared(p: &ParamUZ) -> Rational {
    let (prod, twist) = zeta_parts(p);
    (&prod + &twist) * (&prod - &twist) / (&prod * &prod)
}

pub fn ab_squared(p: &ParamUZ) -> SquaredAB {
    let (u2, z2) = (p.u_sq(), p.z_sq());
    let a_sq = (&u2 + &z2) / (&u2 * &z2 + Rational::one());
    let (prod, twist) = zeta_parts(p);
    let b_sq = (&prod - &twist) / (prod + twist);
    SquaredAB { a_sq, b_sq }
}

/// Face diagonals `d2`, `d3` from `a`, `b`: `d2 = ζb/((1+u²)(1+z²))`,
/// `d3 = 2(u²z²+1)a/((1+u²)(1+z²))`. Rational inputs give rational outputs;
/// enclosures give enclosures.
pub fn recover_d2_d3(p: &ParamUZ, a: &Real, b: &Real) -> Result<(Real, Real)> {
    let ab = ab_squared(p);
    for (name, v, sq) in [("a", a, &ab.a_sq), ("b", b, &ab.b_sq)] {
        let positive = match v.exact() {
            Some(x) => x.is_positive(),
            None => v.hi().is_positive(),
        };
        if !positive {
            return Err(Error::Domain(format!("{name} must be positive")));
        }
        let ok = match v.exact() {
            Some(x) => &(x * x) == sq,
            None => v.square().contains(sq),
        };
        if !ok {
            return Err(Error::InconsistentSquares(format!("{name}² does not match {sq}")));
        }
    }
    let (prod, twist) = zeta_parts(p);
    let zeta = &prod + twist;
    let xi = p.u_sq() * p.z_sq() + Rational::one();
    let d2 = b.scale(&(zeta / &prod));
    let d3 = a.scale(&(rat_int(2) * xi / prod));
    Ok((d2, d3))
}

pub fn aux_from_uz(p: &ParamUZ) -> AuxQuantities {
    let (prod, twist) = zeta_parts(p);
    AuxQuantities {
        xi: p.u_sq() * p.z_sq() + Rational::one(),
        zeta: prod + twist,
        theta: p.z_sq(),
    }
}

/// Solution of the linear system in `(ξ, ζ)` obtained by subtracting the
/// `ξ` relations from the `ζ` relations.
pub fn xi_zeta_from_ab(z: &Rational, u: &Rational, a_sq: &Rational, b_sq: &Rational) -> Result<(Rational, Rational)> {
    let one = Rational::one();
    let one_minus_b = &one - b_sq;
    let one_plus_a = &one + a_sq;
    if one_minus_b.is_zero() || one_plus_a.is_zero() {
        return Err(Error::ZeroDenominator("xi_zeta_from_ab"));
    }
    let k = rat_int(2) * z * (&one - u * u);
    let xi = &k * (&one + b_sq) / (&one_minus_b * one_plus_a);
    let zeta = rat_int(2) * k / one_minus_b;
    Ok((xi, zeta))
}

/// `θ = (a² - u²)/(1 - a²u²)`, which equals `z²` on consistent inputs.
pub fn theta_from_a_u(u_sq: &Rational, a_sq: &Rational) -> Result<Rational> {
    let den = Rational::one() - a_sq * u_sq;
    if den.is_zero() {
        return Err(Error::ZeroDenominator("theta_from_a_u"));
    }
    Ok((a_sq - u_sq) / den)
}

/// `z = (1+u²)(1-b²)(1+a²) / (2(1+b²)(1-a²u²))`.
pub fn z_from_abu(u_sq: &Rational, a_sq: &Rational, b_sq: &Rational) -> Result<Rational> {
    let one = Rational::one();
    let den = rat_int(2) * (&one + b_sq) * (&one - a_sq * u_sq);
    if den.is_zero() {
        return Err(Error::ZeroDenominator("z_from_abu"));
    }
    Ok((&one + u_sq) * (&one - b_sq) * (&one + a_sq) / den)
}

/// Membership in the curvilinear triangle `0 < a < 1`, `0 < b < 1`,
/// `b > -1 + 2/(a+1)`. Exact for rational inputs; enclosures that straddle
/// a side yield [`Tri::Indeterminate`].
pub fn in_domain_ab(a: &Real, b: &Real) -> Tri {
    let zero = Rational::zero();
    let one = Rational::one();
    let box_test = a
        .gt(&zero)
        .and(a.lt(&one))
        .and(b.gt(&zero))
        .and(b.lt(&one));
    if box_test == Tri::False {
        return Tri::False;
    }
    // With a + 1 > 0 the curve condition is (a + 1)(b + 1) > 2.
    let curve = a.add_rational(&one).mul(&b.add_rational(&one)).gt(&rat_int(2));
    box_test.and(curve)
}

/// [`in_domain_ab`] for `a = sqrt(a_sq)`, `b = sqrt(b_sq)`, refining the
/// enclosures until the answer is decided or `max_bits` is reached.
pub fn in_domain_ab_squared(sq: &SquaredAB, max_bits: u32) -> Result<Tri> {
    let mut bits = 64;
    loop {
        let a = Real::sqrt_of(&sq.a_sq, bits)?;
        let b = Real::sqrt_of(&sq.b_sq, bits)?;
        let verdict = in_domain_ab(&a, &b);
        if verdict != Tri::Indeterminate || bits >= max_bits || (a.exact().is_some() && b.exact().is_some()) {
            return Ok(verdict);
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// Inverts the two half-angle maps for a face cuboid: `u = x1/(1+d1)`,
/// `z = x2/(d1+x3)`, using the labeling whose missing face diagonal is the
/// (a,b) face.
pub fn lift_face_cuboid(t: &TripleClassification) -> Result<ParamUZ> {
    let l = t.face_cuboid_labeling()?;
    let n = |v: u64| from_natural(&Natural::from(v));
    let (a, b, c, alpha, d) = (n(l.a), n(l.b), n(l.c), n(l.alpha), n(l.d));
    let u = &a / (&d + &alpha);
    let z = &b / (alpha + c);
    ParamUZ::new(u, z)
}
