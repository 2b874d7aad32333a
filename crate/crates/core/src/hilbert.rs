//! Hilbert symbols over the completions of `Q`.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{legendre, prime_divisors, squarefree_part, BaseField};

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// `(a, b)_v` for nonzero integers: `1` if `z^2 = a x^2 + b y^2` has a
/// nontrivial solution over the completion at `v`, `-1` otherwise.
pub fn hilbert_symbol(a: i64, b: i64, place: Place) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroClass);
    }
    let (a, b) = (squarefree_part(a), squarefree_part(b));
    Ok(match place {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => hilbert_two(a, b),
        Place::Prime(p) => hilbert_odd(a, b, p),
    })
}

/// Hilbert symbol of two nonzero rationals.
pub fn hilbert_symbol_rational(a: &BigRational, b: &BigRational, place: Place) -> Result<i8> {
    let q = BaseField::Rationals;
    hilbert_symbol(q.class_of_rational(a)?.0, q.class_of_rational(b)?.0, place)
}

fn split(x: i64, p: i64) -> (u32, i64) {
    // squarefree input: valuation is 0 or 1
    if x % p == 0 {
        (1, x / p)
    } else {
        (0, x)
    }
}

fn hilbert_odd(a: i64, b: i64, p: u64) -> i8 {
    let (alpha, u) = split(a, p as i64);
    let (beta, v) = split(b, p as i64);
    let mut s: i8 = 1;
    if alpha * beta == 1 && (p - 1) / 2 % 2 == 1 {
        s = -s;
    }
    if beta == 1 {
        s *= legendre(u, p);
    }
    if alpha == 1 {
        s *= legendre(v, p);
    }
    s
}

fn hilbert_two(a: i64, b: i64) -> i8 {
    let (alpha, u) = split(a, 2);
    let (beta, v) = split(b, 2);
    let eps = |x: i64| -> u32 { u32::from(x.rem_euclid(4) == 3) };
    let omega = |x: i64| -> u32 {
        let r = x.rem_euclid(8);
        u32::from(r == 3 || r == 5)
    };
    let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Places at which `(a, b)_v` can be nontrivial: infinity, 2 and the odd
/// primes dividing `a` or `b`.
pub fn relevant_places<I: IntoIterator<Item = i64>>(values: I) -> Vec<Place> {
    let mut primes: Vec<u64> = vec![2];
    for x in values {
        if x != 0 {
            primes.extend(prime_divisors(x.unsigned_abs()));
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![Place::Infinity];
    out.extend(primes.into_iter().map(Place::Prime));
    out
}

/// Whether the squarefree integer `x` is a square in the completion at `v`.
pub fn is_local_square(x: i64, place: Place) -> bool {
    let x = squarefree_part(x);
    match place {
        Place::Infinity => x > 0,
        Place::Prime(2) => x.rem_euclid(8) == 1,
        Place::Prime(p) => x % p as i64 != 0 && legendre(x, p) == 1,
    }
}
