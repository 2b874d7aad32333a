//! Quadratic Göttsche series and the punctual Hilbert series, with their
//! integer specializations.

use rayon::prelude::*;

use crate::astructure::AStructure;
use crate::error::{Error, Result};
use crate::field::BaseField;
use crate::gw::GwElement;
use crate::power::{gen_binomial, power_pow};
use crate::ring::{GwRing, Ring};
use crate::series::{self, Series};

fn alternating_class(field: BaseField, n: usize) -> GwElement {
    if n % 2 == 1 {
        GwElement::one(field)
    } else {
        GwElement::class(field, field.minus_one())
    }
}

/// `1 - c t^n` truncated at `order`.
fn linear_factor(ring: &GwRing, c: &GwElement, n: usize, order: usize) -> Series<GwElement> {
    let mut coeffs = vec![ring.zero(); order + 1];
    coeffs[0] = ring.one();
    if n <= order {
        coeffs[n] = ring.neg(c);
    }
    Series::from_coeffs(coeffs)
}

fn ordered_product(ring: &GwRing, factors: Vec<Series<GwElement>>, order: usize) -> Series<GwElement> {
    factors.iter().fold(series::one(ring, order), |acc, f| series::mul(ring, &acc, f))
}

/// `prod_{n>=1} (1 - <-1>^{n-1} t^n)^{-1}` to `order`.
pub fn punctual_series(field: BaseField, order: usize) -> Series<GwElement> {
    let ring = GwRing::new(field);
    let factors = (1..=order)
        .map(|n| {
            let f = linear_factor(&ring, &alternating_class(field, n), n, order);
            series::invert(&ring, &f).expect("constant term 1")
        })
        .collect();
    ordered_product(&ring, factors, order)
}

/// `prod_{n>=1} (1 - <-1>^{n-1} t^n)^{-chi}` to `order`, exponentiated with
/// the `a_*` power structure. Each factor is computed as `(1 - c t)^{-chi}`
/// with `t -> t^n` substituted afterwards.
pub fn goettsche_series(chi: &GwElement, order: usize) -> Result<Series<GwElement>> {
    let field = chi.field();
    let ring = GwRing::new(field);
    let ps = AStructure::new(field);
    let exponent = ring.neg(chi);
    let factors = (1..=order)
        .into_par_iter()
        .map(|n| {
            let inner = order / n;
            let base = linear_factor(&ring, &alternating_class(field, n), 1, inner);
            let powered = power_pow(&ps, &base, &exponent)?;
            Ok(series::substitute_power(&ring, &powered, n, order))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ordered_product(&ring, factors, order))
}

/// Coefficients of `prod_{m>=1} (1 - t^m)^{-e}` through `t^order`, by the
/// recurrence `n F_n = e sum_{k=1}^n sigma(k) F_{n-k}`.
pub fn classical_series(e: i64, order: usize) -> Vec<i64> {
    let sigma: Vec<i64> = (0..=order as i64)
        .map(|k| (1..=k).filter(|d| k % d == 0).sum())
        .collect();
    let mut f = vec![1i64];
    for n in 1..=order {
        let s: i64 = (1..=n).map(|k| sigma[k] * f[n - k]).sum();
        f.push(e * s / n as i64);
    }
    f
}

/// Coefficients of `(1-t)^{-s} (1-t^2)^{-(r-s)/2}` through `t^order`.
pub fn real_macdonald(r: i64, s: i64, order: usize) -> Result<Vec<i64>> {
    if (r - s).rem_euclid(2) != 0 {
        return Err(Error::InvalidArgument(format!("rank {r} and signature {s} differ in parity")));
    }
    let m = (r - s) / 2;
    let first: Vec<i64> = (0..=order as i64).map(|i| gen_binomial(s + i - 1, i)).collect();
    let mut out = vec![0i64; order + 1];
    for j in 0..=order / 2 {
        let c = gen_binomial(m + j as i64 - 1, j as i64);
        for (i, a) in first.iter().enumerate().take(order + 1 - 2 * j) {
            out[i + 2 * j] += c * a;
        }
    }
    Ok(out)
}

/// Signatures of the real Göttsche series for `chi` of rank `r` and
/// signature `s`: the product of `RM(r, s)(t^n)` over odd `n` and
/// `RM(r, -s)(t^n)` over even `n`.
pub fn real_goettsche_signatures(r: i64, s: i64, order: usize) -> Result<Vec<i64>> {
    let mut acc = vec![0i64; order + 1];
    acc[0] = 1;
    for n in 1..=order {
        let sign = if n % 2 == 1 { s } else { -s };
        let f = real_macdonald(r, sign, order / n)?;
        let mut next = vec![0i64; order + 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in f.iter().enumerate() {
                let k = i + j * n;
                if k > order {
                    break;
                }
                next[k] += a * b;
            }
        }
        acc = next;
    }
    Ok(acc)
}
