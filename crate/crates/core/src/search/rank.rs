//! Ordering of near misses by squarefree kernel.

use num_traits::{One, Zero};

use crate::arith::{is_perfect_square, Natural, Rational};
use crate::error::{Error, Result};
use crate::search::scan::{SearchRecord, Verdict};

/// Default trial-division limit for kernel computation.
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 20;

/// Product of the primes dividing `n` to an odd power. When a cofactor
/// survives trial division and is not a square, it is multiplied in whole
/// and `complete` is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kernel {
    pub value: Natural,
    pub complete: bool,
}

pub fn squarefree_kernel(n: &Natural, trial_bound: u64) -> Kernel {
    if n.is_zero() {
        return Kernel { value: Natural::zero(), complete: true };
    }
    let mut rest = n.clone();
    let mut kernel = Natural::one();
    let mut p = 2u64;
    while p <= trial_bound {
        let pp = Natural::from(p);
        if &pp * &pp > rest {
            break;
        }
        let mut odd = false;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            odd = !odd;
        }
        if odd {
            kernel *= &pp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Kernel { value: kernel, complete: true };
    }
    let bound = Natural::from(trial_bound);
    if &bound * &bound >= rest {
        // No factor up to sqrt(rest): prime.
        return Kernel { value: kernel * rest, complete: true };
    }
    if is_perfect_square(&rest).is_some() {
        return Kernel { value: kernel, complete: true };
    }
    Kernel { value: kernel * rest, complete: false }
}

fn rational_kernel(r: &Rational, trial_bound: u64) -> Kernel {
    let n = r.numer().magnitude() * r.denom().magnitude();
    squarefree_kernel(&n, trial_bound)
}

/// Closeness of a record to `BOTH_SQUARE`: the smallest kernel among its
/// non-square quantities (1 would be a square).
pub fn near_miss_rank(r: &SearchRecord, trial_bound: u64) -> Result<Kernel> {
    let candidates: Vec<&Rational> = match r.verdict {
        Verdict::BothSquare => {
            return Err(Error::Domain("BOTH_SQUARE records have no near-miss rank".into()));
        }
        Verdict::AOnly => vec![&r.b_sq],
        Verdict::BOnly => vec![&r.a_sq],
        Verdict::None => vec![&r.a_sq, &r.b_sq],
    };
    Ok(candidates
        .into_iter()
        .map(|q| rational_kernel(q, trial_bound))
        .min()
        .expect("at least one candidate"))
}
