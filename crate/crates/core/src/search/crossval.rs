//! End-to-end agreement between the integer oracle and the parametrization.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{fmt_rational, rational_sqrt, Natural, Rational};
use crate::charpoly::{char_eval, invert_ab};
use crate::error::Error;
use crate::model::{classify_triple, normalize, CuboidClass, CuboidSeptuple};
use crate::param::{ab_squared, forward, ParamUZ};
use crate::search::oracle::{brute_force_cuboids, OracleRecord};
use crate::search::scan::{scan_point, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    Classification,
    ForwardReproduces,
    BSquare,
    CharacteristicZero,
    InversionRoundTrip,
    ScanVerdict,
    PerfectLift,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Classification => "recorded diagonals match the edges",
            Check::ForwardReproduces => "forward(lift) reproduces the normalized edges",
            Check::BSquare => "b² is a rational square",
            Check::CharacteristicZero => "characteristic residual is zero",
            Check::InversionRoundTrip => "invert_ab returns the lift",
            Check::ScanVerdict => "scan verdict is B_ONLY",
            Check::PerfectLift => "perfect cuboid maps to a BOTH_SQUARE point",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossValidationFailure {
    pub record: Box<OracleRecord>,
    pub check: Check,
    pub detail: String,
}

impl fmt::Display for CrossValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "triple {:?} failed: {} ({})", self.record.triple.edges, self.check, self.detail)
    }
}

impl std::error::Error for CrossValidationFailure {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossValidationReport {
    pub records: usize,
    pub face_cuboids: usize,
    pub euler_bricks: usize,
    pub perfect: usize,
    pub checks_passed: usize,
}

/// Runs every check that applies to `r`, returning how many passed.
pub fn validate_record(r: &OracleRecord) -> Result<usize, CrossValidationFailure> {
    let fail = |check: Check, detail: String| CrossValidationFailure { record: Box::new(r.clone()), check, detail };
    let [a, b, c] = r.triple.edges;
    match classify_triple(a, b, c) {
        Ok(t) if t == r.triple && t.class() == r.class => {}
        other => return Err(fail(Check::Classification, format!("{other:?}"))),
    }
    match r.class {
        CuboidClass::FaceCuboid => {
            let lift = r
                .lift
                .as_ref()
                .ok_or_else(|| fail(Check::ForwardReproduces, "face cuboid without lift".into()))?;
            let labeling = r
                .triple
                .face_cuboid_labeling()
                .map_err(|e| fail(Check::ForwardReproduces, e.to_string()))?;
            let f = forward(lift);
            let want = labeling.normalized();
            if [&f.x1, &f.x2, &f.x3, &f.d1] != [&want[0], &want[1], &want[2], &want[3]] {
                return Err(fail(Check::ForwardReproduces, format!("got {:?}", [f.x1, f.x2, f.x3, f.d1])));
            }

            let ab = ab_squared(lift);
            match rational_sqrt(&ab.b_sq) {
                Ok(Some(_)) => {}
                _ => return Err(fail(Check::BSquare, fmt_rational(&ab.b_sq))),
            }

            let residual = char_eval(&lift.u_sq(), &ab.a_sq, &ab.b_sq);
            if !residual.is_zero() {
                return Err(fail(Check::CharacteristicZero, fmt_rational(&residual)));
            }

            match invert_ab(&ab.a_sq, &ab.b_sq) {
                Ok(Some(p)) if &p == lift => {}
                other => return Err(fail(Check::InversionRoundTrip, format!("{other:?}"))),
            }

            match scan_point(lift) {
                Ok(rec) if rec.verdict == Verdict::BOnly => {}
                other => return Err(fail(Check::ScanVerdict, format!("{other:?}"))),
            }
            Ok(6)
        }
        CuboidClass::Perfect => {
            let t = &r.triple;
            let (Some(alpha), Some(beta), Some(gamma), Some(d)) = (t.alpha, t.beta, t.gamma, t.d) else {
                return Err(fail(Check::PerfectLift, "missing diagonal".into()));
            };
            let s = CuboidSeptuple::new([a, b, c, alpha, beta, gamma, d].map(Natural::from))
                .map_err(|e| fail(Check::PerfectLift, e.to_string()))?;
            let p = normalize(&s).map_err(|e| fail(Check::PerfectLift, e.to_string()))?;
            let one = Rational::one();
            let u = &p.x1 / (&one + &p.d1);
            let z = &p.x2 / (&p.d1 + &p.x3);
            let lift = ParamUZ::new(u, z).map_err(|e| fail(Check::PerfectLift, e.to_string()))?;
            match scan_point(&lift) {
                Ok(rec) if rec.verdict == Verdict::BothSquare => Ok(2),
                other => Err(fail(Check::PerfectLift, format!("{other:?}"))),
            }
        }
        _ => Ok(1),
    }
}

pub fn cross_validate_records(records: &[OracleRecord]) -> Result<CrossValidationReport, CrossValidationFailure> {
    let mut report = CrossValidationReport { records: records.len(), ..Default::default() };
    for r in records {
        match r.class {
            CuboidClass::FaceCuboid => report.face_cuboids += 1,
            CuboidClass::EulerBrick => report.euler_bricks += 1,
            CuboidClass::Perfect => report.perfect += 1,
            CuboidClass::Other => {}
        }
        report.checks_passed += validate_record(r)?;
    }
    Ok(report)
}

#[derive(Debug, thiserror::Error)]
pub enum CrossValidationError {
    #[error(transparent)]
    Oracle(#[from] Error),
    #[error(transparent)]
    Failed(#[from] CrossValidationFailure),
}

/// Brute-forces every triple up to `edge_bound` and validates the result.
pub fn cross_validate(edge_bound: u64) -> Result<CrossValidationReport, CrossValidationError> {
    let records = brute_force_cuboids(edge_bound)?;
    Ok(cross_validate_records(&records)?)
}
