//! Power structures `(f(t), r) -> f(t)^r` on a coefficient ring.
//!
//! A structure is given by the series `(1 - t)^{-r} = sum b_n(r) t^n`
//! ([`PowerStructure::expand`]); everything else is derived from it through
//! the Euler factorization `f = prod (1 - t^i)^{-c_i}`.

use crate::error::{Error, Result};
use crate::ring::{Integers, Ring};
use crate::series::{self, Series};

pub trait PowerStructure: Sync {
    type R: Ring;

    fn ring(&self) -> &Self::R;

    fn name(&self) -> String;

    /// `(1 - t)^{-r}` truncated at `order`.
    fn expand(&self, r: &<Self::R as Ring>::Elem, order: usize) -> Result<Series<<Self::R as Ring>::Elem>>;

    /// `b_n(r)`.
    fn b(&self, r: &<Self::R as Ring>::Elem, n: usize) -> Result<<Self::R as Ring>::Elem> {
        Ok(self.expand(r, n)?.coeff(n).clone())
    }
}

/// Elem type of a structure's ring.
pub type ElemOf<P> = <<P as PowerStructure>::R as Ring>::Elem;

/// Generalized binomial coefficient `C(top, k)` for any integer `top`.
pub fn gen_binomial(top: i64, k: i64) -> i64 {
    if k < 0 {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (top as i128 - i as i128) / (i as i128 + 1);
    }
    i64::try_from(acc).expect("binomial coefficient overflows i64")
}

/// The binomial structure on `Z`: `b_n(r) = C(r + n - 1, n)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Binomial;

impl PowerStructure for Binomial {
    type R = Integers;

    fn ring(&self) -> &Integers {
        &Integers
    }

    fn name(&self) -> String {
        "binomial on Z".into()
    }

    fn expand(&self, r: &i64, order: usize) -> Result<Series<i64>> {
        let mut c = Vec::with_capacity(order + 1);
        let mut b: i128 = 1;
        c.push(1);
        for n in 1..=order as i128 {
            // n b_n = (r + n - 1) b_{n-1}, always exact
            b = b * (*r as i128 + n - 1) / n;
            c.push(i64::try_from(b).map_err(|_| Error::Internal(format!("b_{n}({r}) overflows")))?);
        }
        Ok(Series::from_coeffs(c))
    }
}

/// `prod g_j^{k_j}` for generator series `g_j`, i.e. the value on
/// `sum k_j x_j` of a structure fixed on generators `x_j`.
pub fn combine_generators<R: Ring>(
    ring: &R,
    parts: impl IntoIterator<Item = (Series<R::Elem>, i64)>,
    order: usize,
) -> Result<Series<R::Elem>> {
    let mut acc = series::one(ring, order);
    for (g, k) in parts {
        acc = series::mul(ring, &acc, &series::pow_int(ring, &g, k)?);
    }
    Ok(acc)
}

/// `c_1, ..., c_N` with `f = prod_{i=1}^N (1 - t^i)^{-c_i} mod t^{N+1}`,
/// where powers are taken in `ps`.
pub fn euler_factorize<P: PowerStructure>(ps: &P, f: &Series<ElemOf<P>>) -> Result<Vec<ElemOf<P>>> {
    let ring = ps.ring();
    check_unit_constant(ring, f)?;
    let n = f.order();
    let mut rest = f.clone();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // rest = prod_{j >= i} (1 - t^j)^{-c_j}, so its t^i coefficient is c_i
        let c = rest.coeff(i).clone();
        let factor = series::substitute_power(ring, &ps.expand(&c, n / i)?, i, n);
        rest = series::mul(ring, &rest, &series::invert(ring, &factor)?);
        out.push(c);
    }
    Ok(out)
}

/// Inverse of [`euler_factorize`].
pub fn reconstruct<P: PowerStructure>(ps: &P, cs: &[ElemOf<P>], order: usize) -> Result<Series<ElemOf<P>>> {
    let ring = ps.ring();
    let mut acc = series::one(ring, order);
    for (idx, c) in cs.iter().enumerate() {
        let i = idx + 1;
        if i > order {
            break;
        }
        let factor = series::substitute_power(ring, &ps.expand(c, order / i)?, i, order);
        acc = series::mul(ring, &acc, &factor);
    }
    Ok(acc)
}

/// `f(t)^r = prod (1 - t^i)^{-c_i r}`.
pub fn power_pow<P: PowerStructure>(ps: &P, f: &Series<ElemOf<P>>, r: &ElemOf<P>) -> Result<Series<ElemOf<P>>> {
    let ring = ps.ring();
    let cs = euler_factorize(ps, f)?;
    let scaled: Vec<_> = cs.iter().map(|c| ring.mul(c, r)).collect();
    reconstruct(ps, &scaled, f.order())
}

fn check_unit_constant<R: Ring>(ring: &R, f: &Series<R::Elem>) -> Result<()> {
    if ring.is_one(f.coeff(0)) {
        Ok(())
    } else {
        Err(Error::NotInvertible(ring.render(f.coeff(0))))
    }
}

/// Direction of [`convert_lambda_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    LambdaToB,
    BToLambda,
}

/// Converts the values `lambda_n(r)` to `b_n(r)` or back through
/// `sum b_n t^n = (sum lambda_n (-t)^n)^{-1}`.
pub fn convert_lambda_power<R: Ring>(ring: &R, data: &Series<R::Elem>, direction: Conversion) -> Result<Series<R::Elem>> {
    Ok(match direction {
        Conversion::LambdaToB => series::invert(ring, &series::negate_variable(ring, data))?,
        Conversion::BToLambda => series::negate_variable(ring, &series::invert(ring, data)?),
    })
}

/// Opposite pre-lambda structure: `lambda_n(r)` is the `t^n` coefficient of
/// `(1 + t)^r`.
pub fn opposite_lambda<P: PowerStructure>(ps: &P, r: &ElemOf<P>, order: usize) -> Result<Series<ElemOf<P>>> {
    let ring = ps.ring();
    let one_plus_t = series::binomial_term(ring, &ring.one(), 1, order);
    power_pow(ps, &one_plus_t, r)
}

/// Fault injection: adds `1` to `b_2(r)` for every `r != 0`.
#[derive(Debug, Clone)]
pub struct Corrupted<P> {
    pub inner: P,
}

impl<P: PowerStructure> PowerStructure for Corrupted<P> {
    type R = P::R;

    fn ring(&self) -> &P::R {
        self.inner.ring()
    }

    fn name(&self) -> String {
        format!("{} with corrupted b_2", self.inner.name())
    }

    fn expand(&self, r: &ElemOf<P>, order: usize) -> Result<Series<ElemOf<P>>> {
        let s = self.inner.expand(r, order)?;
        let ring = self.ring();
        if order < 2 || ring.is_zero(r) {
            return Ok(s);
        }
        let mut c = s.into_coeffs();
        c[2] = ring.add(&c[2], &ring.one());
        Ok(Series::from_coeffs(c))
    }
}
