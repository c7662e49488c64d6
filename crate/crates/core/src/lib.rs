//! Exact-arithmetic tools for the perfect Euler cuboid problem.
//!
//! A perfect cuboid is a box whose edges, face diagonals and space diagonal
//! are all integers. Dividing through by the space diagonal turns it into a
//! rational point on the unit sphere, which a two-parameter rational map
//! `(u, z)` covers up to two remaining square conditions. Those conditions
//! collapse into a single quartic relation in `u` (a quadratic in `u²`),
//! the characteristic polynomial, whose rational roots in `(0, 1)` inside the
//! right domain correspond exactly to perfect cuboids.
//!
//! Modules:
//! - [`arith`]: big-integer square roots, rational square roots, LCM.
//! - [`model`]: integer septuples, classification, normalization.
//! - [`param`]: the `(u, z)` parametrization and its derived quantities.
//! - [`charpoly`]: the characteristic polynomial and its inversion.
//! - [`search`]: Farey enumeration, the `(u, z)` scan, the brute-force
//!   integer oracle and cross-validation.
//! - [`records`]: line-record formats shared with the command-line tool.

pub mod arith;
pub mod charpoly;
pub mod error;
pub mod interval;
pub mod model;
pub mod param;
pub mod records;
pub mod search;

pub use error::{Error, Result};
