//! Reduced fractions in `(0, 1)` ordered by denominator, then numerator.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{rat, Rational};

/// Position of the next fraction to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FareyCursor {
    pub q: u64,
    pub p: u64,
}

/// Emits every reduced `p/q` with `0 < p < q <= bound` exactly once, by
/// ascending `q` and ascending `p` within each `q`.
#[derive(Debug, Clone)]
pub struct HeightOrderedRationals {
    bound: u64,
    cursor: FareyCursor,
}

impl HeightOrderedRationals {
    pub fn new(bound: u64) -> Self {
        Self::resume(bound, FareyCursor { q: 2, p: 1 })
    }

    pub fn resume(bound: u64, cursor: FareyCursor) -> Self {
        Self { bound, cursor }
    }

    pub fn cursor(&self) -> FareyCursor {
        self.cursor
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }
}

impl Iterator for HeightOrderedRationals {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let FareyCursor { q, p } = self.cursor;
            if q > self.bound {
                return None;
            }
            if p >= q {
                self.cursor = FareyCursor { q: q + 1, p: 1 };
                continue;
            }
            self.cursor.p += 1;
            if p.gcd(&q) == 1 {
                return Some((p, q));
            }
        }
    }
}

pub fn enumerate_rationals(bound: u64) -> impl Iterator<Item = Rational> {
    HeightOrderedRationals::new(bound).map(|(p, q)| rat(p as i64, q as i64))
}

/// `Σ_{q=2..bound} φ(q)`, via a totient sieve.
pub fn farey_count(bound: u64) -> u64 {
    if bound < 2 {
        return 0;
    }
    let n = bound as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            for j in (i..=n).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi[2..].iter().sum()
}
