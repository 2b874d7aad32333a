//! Base fields of characteristic different from two and canonical square
//! classes `k^x / (k^x)^2` for each of them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The fields supported by the arithmetic layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseField {
    Rationals,
    Reals,
    /// A prime field `F_p` with `p` odd.
    FiniteField(u64),
    QuadraticallyClosed,
}

impl BaseField {
    /// `F_p`, rejecting `p = 2` and composite moduli.
    pub fn finite(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "F_p requires an odd prime, got {p}"
            )));
        }
        Ok(BaseField::FiniteField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::FiniteField(p) => *p,
            _ => 0,
        }
    }

    /// Whether the field has an ordering, so that signatures make sense.
    pub fn has_signature(&self) -> bool {
        matches!(self, BaseField::Rationals | BaseField::Reals)
    }

    /// The square class of a nonzero integer.
    pub fn class_of_int(&self, n: i64) -> Result<SquareClass> {
        if n == 0 {
            return Err(Error::ZeroClass);
        }
        Ok(match *self {
            BaseField::Rationals => SquareClass(squarefree_part(n)),
            BaseField::Reals => SquareClass(n.signum()),
            BaseField::QuadraticallyClosed => SquareClass(1),
            BaseField::FiniteField(p) => {
                let r = n.rem_euclid(p as i64);
                if r == 0 {
                    return Err(Error::ZeroClass);
                }
                self.fp_class(legendre(r, p))
            }
        })
    }

    /// The square class of a nonzero rational number.
    pub fn class_of_rational(&self, q: &BigRational) -> Result<SquareClass> {
        if q.is_zero() {
            return Err(Error::ZeroClass);
        }
        match *self {
            BaseField::Reals => Ok(SquareClass(if q.is_negative() { -1 } else { 1 })),
            BaseField::QuadraticallyClosed => Ok(SquareClass(1)),
            BaseField::Rationals => {
                // a/b and ab lie in the same square class
                let ab: BigInt = q.numer() * q.denom();
                let small = ab.to_i64().ok_or_else(|| {
                    Error::Unsupported(format!("rational {q} too large to factor"))
                })?;
                self.class_of_int(small)
            }
            BaseField::FiniteField(p) => {
                let pb = BigInt::from(p);
                let num = (q.numer() % &pb + &pb) % &pb;
                let den = (q.denom() % &pb + &pb) % &pb;
                if den.is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "{q} is not defined in F_{p}"
                    )));
                }
                if num.is_zero() {
                    return Err(Error::ZeroClass);
                }
                let n = num.to_i64().expect("residue fits");
                let d = den.to_i64().expect("residue fits");
                Ok(self.fp_class(legendre(n, p) * legendre(d, p)))
            }
        }
    }

    fn fp_class(&self, symbol: i8) -> SquareClass {
        match *self {
            BaseField::FiniteField(p) if symbol < 0 => SquareClass(least_nonresidue(p) as i64),
            _ => SquareClass(1),
        }
    }

    /// Product of square classes, reduced to canonical form.
    pub fn mul_classes(&self, a: SquareClass, b: SquareClass) -> SquareClass {
        match *self {
            BaseField::Rationals => {
                let g = gcd(a.0.unsigned_abs(), b.0.unsigned_abs()) as i64;
                SquareClass((a.0 / g) * (b.0 / g))
            }
            BaseField::Reals => SquareClass(a.0 * b.0),
            BaseField::QuadraticallyClosed => SquareClass(1),
            BaseField::FiniteField(_) => {
                if (a.0 == 1) == (b.0 == 1) {
                    SquareClass(1)
                } else {
                    self.fp_class(-1)
                }
            }
        }
    }

    /// The sign of a class under the (unique) real embedding.
    pub fn sign(&self, a: SquareClass) -> Option<i64> {
        self.has_signature().then(|| a.0.signum())
    }

    /// All square classes when the group is finite.
    pub fn all_classes(&self) -> Option<Vec<SquareClass>> {
        match *self {
            BaseField::Rationals => None,
            BaseField::Reals => Some(vec![SquareClass(1), SquareClass(-1)]),
            BaseField::QuadraticallyClosed => Some(vec![SquareClass(1)]),
            BaseField::FiniteField(p) => Some(vec![
                SquareClass(1),
                SquareClass(least_nonresidue(p) as i64),
            ]),
        }
    }

    pub fn one(&self) -> SquareClass {
        SquareClass(1)
    }

    /// The class of `-1`.
    pub fn minus_one(&self) -> SquareClass {
        self.class_of_int(-1).expect("-1 is a unit")
    }

    /// Class of two; defined in every supported field.
    pub fn two(&self) -> SquareClass {
        self.class_of_int(2).expect("2 is a unit in characteristic != 2")
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Reals => write!(f, "R"),
            BaseField::QuadraticallyClosed => write!(f, "C"),
            BaseField::FiniteField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for BaseField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" => Ok(BaseField::Rationals),
            "R" => Ok(BaseField::Reals),
            "C" => Ok(BaseField::QuadraticallyClosed),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!(
                            "unknown field '{other}' (expected Q, R, C or Fp:<p>)"
                        ))
                    })?;
                BaseField::finite(p)
            }
        }
    }
}

/// Canonical representative of a square class.
///
/// Over `Q` this is a squarefree integer, over `R` it is `+-1`, over `F_p`
/// it is `1` or the least non-residue, and over a quadratically closed field
/// it is always `1`. Values are only meaningful relative to a [`BaseField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareClass(pub i64);

impl SquareClass {
    pub fn rep(self) -> i64 {
        self.0
    }
}

impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.unsigned_abs(), self.0 < 0).cmp(&(other.0.unsigned_abs(), other.0 < 0))
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0, "squarefree part of zero");
    let mut m = n.unsigned_abs();
    let mut out: u64 = 1;
    let mut p: u64 = 2;
    while p.saturating_mul(p).saturating_mul(p) <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // m now has at most two prime factors, all larger than p
    let r = isqrt(m);
    if r * r != m {
        out *= m;
    }
    let out = out as i64;
    if n < 0 {
        -out
    } else {
        out
    }
}

/// Distinct prime divisors of `n > 0`.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1u128;
    let mut b = (base % m) as u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// Legendre symbol `(a/p)` for an odd prime `p`; zero when `p | a`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Least quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| legendre(a as i64, p) == -1)
        .expect("odd primes have non-residues")
}
