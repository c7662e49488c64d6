//! The `(u, z)` scan: every pair of height-ordered rationals is mapped to
//! `(a², b²)` and tested for rational squares.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rational, rat, rational_sqrt, Rational};
use crate::charpoly::{char_eval, char_eval_cleared};
use crate::error::{Error, Result};
use crate::interval::Real;
use crate::model::{denormalize, verify_perfect, CuboidSeptuple, UnitVectorPoint};
use crate::param::{ab_squared, forward, recover_d2_d3, ParamUZ};
use crate::search::farey::HeightOrderedRationals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    BothSquare,
    AOnly,
    BOnly,
    None,
}

impl Verdict {
    pub const ALL: [Verdict; 4] = [Verdict::BothSquare, Verdict::AOnly, Verdict::BOnly, Verdict::None];

    pub fn name(self) -> &'static str {
        match self {
            Verdict::BothSquare => "BOTH_SQUARE",
            Verdict::AOnly => "A_ONLY",
            Verdict::BOnly => "B_ONLY",
            Verdict::None => "NONE",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Verdict::ALL.into_iter().find(|v| v.name() == s)
    }

    fn from_witnesses(a: bool, b: bool) -> Self {
        match (a, b) {
            (true, true) => Verdict::BothSquare,
            (true, false) => Verdict::AOnly,
            (false, true) => Verdict::BOnly,
            (false, false) => Verdict::None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SearchRecord {
    pub u: Rational,
    pub z: Rational,
    pub a_sq: Rational,
    pub b_sq: Rational,
    pub verdict: Verdict,
    pub witness_a: Option<Rational>,
    pub witness_b: Option<Rational>,
    /// Characteristic polynomial at `(u², a², b²)`; always zero.
    pub residual: Rational,
}

impl SearchRecord {
    pub fn param(&self) -> Result<ParamUZ> {
        ParamUZ::new(self.u.clone(), self.z.clone())
    }
}

/// Evaluates one parameter point. A nonzero characteristic residual is an
/// internal error.
pub fn scan_point(p: &ParamUZ) -> Result<SearchRecord> {
    let ab = ab_squared(p);
    let u_sq = p.u_sq();
    if !char_eval_cleared(&u_sq, &ab.a_sq, &ab.b_sq).is_zero() {
        let residual = char_eval(&u_sq, &ab.a_sq, &ab.b_sq);
        return Err(Error::Internal(format!(
            "characteristic residual {} at ({}, {})",
            fmt_rational(&residual),
            fmt_rational(p.u()),
            fmt_rational(p.z())
        )));
    }
    let witness_a = rational_sqrt(&ab.a_sq)?;
    let witness_b = rational_sqrt(&ab.b_sq)?;
    Ok(SearchRecord {
        u: p.u().clone(),
        z: p.z().clone(),
        verdict: Verdict::from_witnesses(witness_a.is_some(), witness_b.is_some()),
        a_sq: ab.a_sq,
        b_sq: ab.b_sq,
        witness_a,
        witness_b,
        residual: Rational::zero(),
    })
}

/// Rebuilds the full cuboid behind a `BOTH_SQUARE` record. Failure here
/// means the parametrization itself is broken.
pub fn escalate(r: &SearchRecord) -> Result<CuboidSeptuple> {
    let (Some(a), Some(b)) = (&r.witness_a, &r.witness_b) else {
        return Err(Error::Domain(format!("record at ({}, {}) is not BOTH_SQUARE", r.u, r.z)));
    };
    let p = r.param()?;
    let f = forward(&p);
    let (d2, d3) = recover_d2_d3(&p, &Real::Exact(a.clone()), &Real::Exact(b.clone()))?;
    let (Real::Exact(d2), Real::Exact(d3)) = (d2, d3) else {
        return Err(Error::Internal("rational witnesses produced irrational diagonals".into()));
    };
    let point = UnitVectorPoint { x1: f.x1, x2: f.x2, x3: f.x3, d1: f.d1, d2, d3 };
    let s = denormalize(&point).map_err(|e| Error::Internal(format!("escalation failed at ({}, {}): {e}", r.u, r.z)))?;
    if !verify_perfect(&s) {
        return Err(Error::Internal(format!("escalated septuple at ({}, {}) is not perfect", r.u, r.z)));
    }
    Ok(s)
}

/// The height-ordered rationals up to `bound` as `(u, z)` axis values.
pub fn axis(bound: u64) -> Vec<Rational> {
    HeightOrderedRationals::new(bound).map(|(p, q)| rat(p as i64, q as i64)).collect()
}

/// All records for one fixed `u`, in axis order of `z`.
pub fn scan_row(u: &Rational, axis: &[Rational]) -> Result<Vec<SearchRecord>> {
    axis.iter()
        .map(|z| scan_point(&ParamUZ::new(u.clone(), z.clone())?))
        .collect()
}

/// The full scan as a lazy stream in `(u index, z index)` order.
pub fn scan_uz(bound: u64) -> impl Iterator<Item = Result<SearchRecord>> {
    let axis = axis(bound);
    let us = axis.clone();
    us.into_iter().flat_map(move |u| {
        let axis = axis.clone();
        axis.into_iter().map(move |z| scan_point(&ParamUZ::new(u.clone(), z)?))
    })
}

/// Records for the `u`-rows assigned to `worker` out of `workers` by
/// `row % workers`, tagged with their `(row, column)` indices.
pub fn scan_partition(bound: u64, worker: usize, workers: usize) -> Result<Vec<(usize, usize, SearchRecord)>> {
    assert!(workers >= 1 && worker < workers);
    let axis = axis(bound);
    let mut out = Vec::new();
    for (i, u) in axis.iter().enumerate().skip(worker).step_by(workers) {
        for (j, rec) in scan_row(u, &axis)?.into_iter().enumerate() {
            out.push((i, j, rec));
        }
    }
    Ok(out)
}

/// Deterministic merge of partition outputs into scan order.
pub fn merge_partitions(parts: Vec<Vec<(usize, usize, SearchRecord)>>) -> Vec<SearchRecord> {
    let mut all: Vec<_> = parts.into_iter().flatten().collect();
    all.sort_by_key(|(i, j, _)| (*i, *j));
    all.into_iter().map(|(_, _, r)| r).collect()
}

/// Scans rows `[start, end)` in parallel and returns them in row order.
pub fn scan_rows_parallel(axis: &[Rational], start: usize, end: usize) -> Result<Vec<Vec<SearchRecord>>> {
    (start..end).into_par_iter().map(|i| scan_row(&axis[i], axis)).collect()
}
