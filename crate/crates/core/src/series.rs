//! Truncated power series `c_0 + c_1 t + ... + c_N t^N` over a [`Ring`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 16;

/// A power series known modulo `t^(order+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> Series<E> {
    /// `coeffs` must be non-empty; its length fixes the order.
    pub fn from_coeffs(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &E {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Series<T>
    where
        F: FnMut(&E) -> T,
    {
        Series::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

pub fn one<R: Ring>(ring: &R, order: usize) -> Series<R::Elem> {
    let mut c = vec![ring.zero(); order + 1];
    c[0] = ring.one();
    Series::from_coeffs(c)
}

/// `1 + a t^k`, truncated.
pub fn binomial_term<R: Ring>(ring: &R, a: &R::Elem, k: usize, order: usize) -> Series<R::Elem> {
    let mut s = one(ring, order);
    if k <= order {
        s.coeffs[k] = ring.add(&s.coeffs[k], a);
    }
    s
}

pub fn add<R: Ring>(ring: &R, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Series<R::Elem> {
    let n = f.order().min(g.order());
    Series::from_coeffs((0..=n).map(|i| ring.add(&f.coeffs[i], &g.coeffs[i])).collect())
}

pub fn mul<R: Ring>(ring: &R, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Series<R::Elem> {
    let n = f.order().min(g.order());
    let mut out = vec![ring.zero(); n + 1];
    for (i, a) in f.coeffs[..=n].iter().enumerate() {
        if ring.is_structurally_zero(a) {
            continue;
        }
        for (j, b) in g.coeffs[..=n - i].iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
        }
    }
    Series::from_coeffs(out)
}

/// Multiplicative inverse of a series with constant term 1.
pub fn invert<R: Ring>(ring: &R, f: &Series<R::Elem>) -> Result<Series<R::Elem>> {
    if !ring.is_one(&f.coeffs[0]) {
        return Err(Error::NotInvertible(ring.render(&f.coeffs[0])));
    }
    let n = f.order();
    let mut g = vec![ring.zero(); n + 1];
    g[0] = ring.one();
    for k in 1..=n {
        let mut acc = ring.zero();
        for i in 1..=k {
            acc = ring.add(&acc, &ring.mul(&f.coeffs[i], &g[k - i]));
        }
        g[k] = ring.neg(&acc);
    }
    Ok(Series::from_coeffs(g))
}

/// `f^n` for an integer `n` (negative powers via inversion).
pub fn pow_int<R: Ring>(ring: &R, f: &Series<R::Elem>, n: i64) -> Result<Series<R::Elem>> {
    let base = if n < 0 { invert(ring, f)? } else { f.clone() };
    let mut e = n.unsigned_abs();
    let mut result = one(ring, f.order());
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(ring, &result, &sq);
        }
        e >>= 1;
        if e > 0 {
            sq = mul(ring, &sq, &sq);
        }
    }
    Ok(result)
}

/// `f(t^k)` truncated at `order`.
pub fn substitute_power<R: Ring>(ring: &R, f: &Series<R::Elem>, k: usize, order: usize) -> Series<R::Elem> {
    assert!(k >= 1);
    let mut out = vec![ring.zero(); order + 1];
    for (i, c) in f.coeffs.iter().enumerate() {
        if i * k > order {
            break;
        }
        out[i * k] = c.clone();
    }
    Series::from_coeffs(out)
}

/// `f(-t)`.
pub fn negate_variable<R: Ring>(ring: &R, f: &Series<R::Elem>) -> Series<R::Elem> {
    Series::from_coeffs(
        f.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { ring.neg(c) } else { c.clone() })
            .collect(),
    )
}

/// Coefficientwise ring equality up to the smaller order.
pub fn series_eq<R: Ring>(ring: &R, f: &Series<R::Elem>, g: &Series<R::Elem>) -> bool {
    first_difference(ring, f, g).is_none()
}

/// Index of the first coefficient where `f` and `g` differ.
pub fn first_difference<R: Ring>(ring: &R, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Option<usize> {
    let n = f.order().min(g.order());
    (0..=n).find(|&i| !ring.eq(&f.coeffs[i], &g.coeffs[i]))
}

/// Text rendering `1 + c1*t + c2*t^2 + ...` (zero coefficients omitted).
pub fn render<R: Ring>(ring: &R, f: &Series<R::Elem>) -> String {
    let one = ring.render(&ring.one());
    let zero = ring.render(&ring.zero());
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        let s = ring.render(c);
        if s == zero {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        let term = if s == one {
            if i == 0 {
                "1".to_string()
            } else {
                var
            }
        } else {
            let c = if s.contains(' ') || (s.starts_with('-') && !parts.is_empty()) {
                format!("({s})")
            } else {
                s
            };
            if i == 0 {
                c
            } else {
                format!("{c}*{var}")
            }
        };
        parts.push(term);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Machine rendering: coefficient strings plus the truncation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedSeries {
    pub order: usize,
    pub coeffs: Vec<String>,
}

pub fn render_json<R: Ring>(ring: &R, f: &Series<R::Elem>) -> RenderedSeries {
    RenderedSeries {
        order: f.order(),
        coeffs: f.coeffs.iter().map(|c| ring.render(c)).collect(),
    }
}
