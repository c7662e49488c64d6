//! Brute-force enumeration of integer edge triples with at least two integer
//! face diagonals.

use rayon::prelude::*;

use crate::error::Result;
use crate::model::{classify_triple, CuboidClass, TripleClassification};
use crate::param::{lift_face_cuboid, ParamUZ};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OracleRecord {
    pub triple: TripleClassification,
    pub class: CuboidClass,
    /// Present exactly for face cuboids.
    pub lift: Option<ParamUZ>,
}

impl OracleRecord {
    pub fn from_classification(triple: TripleClassification) -> Result<Self> {
        let class = triple.class();
        let lift = match class {
            CuboidClass::FaceCuboid => Some(lift_face_cuboid(&triple)?),
            _ => None,
        };
        Ok(Self { triple, class, lift })
    }
}

fn is_square_u64(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|k| k.checked_mul(k) == Some(n))
}

/// Edges `x <= c` for which `x² + c²` is a perfect square.
fn partners(c: u64) -> Vec<bool> {
    let mut v = vec![false; c as usize + 1];
    for x in 1..=c {
        v[x as usize] = is_square_u64(x * x + c * c);
    }
    v
}

/// Triples `a <= b <= c` with largest edge `c` and at least two integer face
/// diagonals, classified exactly, in ascending `(b, a)` order.
fn records_for_largest_edge(c: u64) -> Result<Vec<OracleRecord>> {
    // Two integer face diagonals among {ab, ac, bc} force a or b to pair
    // with c.
    let pc = partners(c);
    let mut out = Vec::new();
    for b in 1..=c {
        for a in 1..=b {
            if !(pc[a as usize] || pc[b as usize]) {
                continue;
            }
            let t = classify_triple(a, b, c)?;
            if t.class() != CuboidClass::Other {
                out.push(OracleRecord::from_classification(t)?);
            }
        }
    }
    Ok(out)
}

/// All `EULER_BRICK`, `FACE_CUBOID` and `PERFECT` triples with
/// `1 <= a <= b <= c <= edge_bound`, ordered by `c`, then `b`, then `a`.
pub fn brute_force_cuboids(edge_bound: u64) -> Result<Vec<OracleRecord>> {
    let rows: Vec<Vec<OracleRecord>> = (1..=edge_bound)
        .into_par_iter()
        .map(records_for_largest_edge)
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}
