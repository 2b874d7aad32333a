//! The big-Witt product `⊙` on `1 + tR[[t]]`, characterized by
//! `prod (1 + r_i t) ⊙ prod (1 + s_j t) = prod (1 + r_i s_j t)`.
//!
//! Torsion-free rings use ghost coordinates (which need exact division by
//! `n`). Rings with additive torsion evaluate universal integer polynomials
//! `h_n = P_n(f_1..f_n, g_1..g_n)`, precomputed once by running the ghost
//! route over a polynomial ring over `Z`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::series::{self, Series};

/// Largest order served by the universal-polynomial path.
pub const UNIVERSAL_MAX_ORDER: usize = 8;

/// `f ⊙ g` truncated at the smaller order.
pub fn witt_product<R: Ring>(ring: &R, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Result<Series<R::Elem>> {
    check_unit(ring, f)?;
    check_unit(ring, g)?;
    if ring.is_torsion_free() {
        witt_product_ghost(ring, f, g)
    } else {
        witt_product_universal(ring, f, g)
    }
}

fn check_unit<R: Ring>(ring: &R, f: &Series<R::Elem>) -> Result<()> {
    if ring.is_one(f.coeff(0)) {
        Ok(())
    } else {
        Err(Error::NotInvertible(ring.render(f.coeff(0))))
    }
}

/// Ghost components: the coefficients of `t f'(t) / f(t)`.
pub fn ghost<R: Ring>(ring: &R, f: &Series<R::Elem>) -> Vec<R::Elem> {
    let n = f.order();
    let mut q: Vec<R::Elem> = Vec::with_capacity(n + 1);
    q.push(ring.zero());
    for k in 1..=n {
        let mut acc = ring.scale(f.coeff(k), k as i64);
        for i in 1..k {
            acc = ring.sub(&acc, &ring.mul(&q[i], f.coeff(k - i)));
        }
        q.push(acc);
    }
    q
}

/// Inverse of [`ghost`]; fails if a division by `n` is not exact.
pub fn from_ghost<R: Ring>(ring: &R, q: &[R::Elem]) -> Result<Series<R::Elem>> {
    let n = q.len() - 1;
    let mut h = vec![ring.one()];
    for k in 1..=n {
        let mut acc = ring.zero();
        for i in 1..=k {
            acc = ring.add(&acc, &ring.mul(&q[i], &h[k - i]));
        }
        let hk = ring.div_int(&acc, k as i64).ok_or_else(|| {
            Error::Internal(format!("ghost integrality check failed at t^{k}: {}", ring.render(&acc)))
        })?;
        h.push(hk);
    }
    Ok(Series::from_coeffs(h))
}

pub fn witt_product_ghost<R: Ring>(ring: &R, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Result<Series<R::Elem>> {
    if !ring.is_torsion_free() {
        return Err(Error::Unsupported("ghost coordinates over a ring with torsion".into()));
    }
    let n = f.order().min(g.order());
    let (qf, qg) = (ghost(ring, &f.truncate(n)), ghost(ring, &g.truncate(n)));
    let mut q = vec![ring.zero()];
    for k in 1..=n {
        let p = ring.mul(&qf[k], &qg[k]);
        q.push(if k % 2 == 0 { ring.neg(&p) } else { p });
    }
    from_ghost(ring, &q)
}

pub fn witt_product_universal<R: Ring>(ring: &R, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Result<Series<R::Elem>> {
    let n = f.order().min(g.order());
    if n > UNIVERSAL_MAX_ORDER {
        return Err(Error::Unsupported(format!(
            "⊙ over a ring with torsion beyond order {UNIVERSAL_MAX_ORDER} (requested {n})"
        )));
    }
    let polys = universal_polynomials();
    // powers[v][e] = e-th power of variable v
    let vars: Vec<&R::Elem> = (1..=UNIVERSAL_MAX_ORDER)
        .map(|i| if i <= n { f.coeff(i) } else { f.coeff(0) })
        .chain((1..=UNIVERSAL_MAX_ORDER).map(|i| if i <= n { g.coeff(i) } else { g.coeff(0) }))
        .collect();
    let mut powers: Vec<Vec<R::Elem>> = Vec::with_capacity(vars.len());
    for v in &vars {
        let mut p = vec![ring.one()];
        for e in 1..=n {
            p.push(ring.mul(&p[e - 1], v));
        }
        powers.push(p);
    }
    let mut out = vec![ring.one()];
    for poly in &polys[1..=n] {
        let mut acc = ring.zero();
        for (mono, &c) in &poly.terms {
            let mut term = ring.from_int(i64::try_from(c).map_err(|_| Error::Internal("universal coefficient overflow".into()))?);
            for (v, &e) in mono.iter().enumerate() {
                if e > 0 {
                    term = ring.mul(&term, &powers[v][e as usize]);
                }
            }
            acc = ring.add(&acc, &term);
        }
        out.push(acc);
    }
    Ok(Series::from_coeffs(out))
}

const NVARS: usize = 2 * UNIVERSAL_MAX_ORDER;
type Monomial = [u8; NVARS];

/// Polynomials over `Z` in `f_1..f_8, g_1..g_8` (variables `0..8` and
/// `8..16`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    terms: BTreeMap<Monomial, i128>,
}

impl IntPoly {
    fn constant(c: i128) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert([0; NVARS], c);
        }
        IntPoly { terms }
    }

    fn var(v: usize) -> Self {
        let mut m = [0; NVARS];
        m[v] = 1;
        IntPoly { terms: BTreeMap::from([(m, 1)]) }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// `Z[f_1..f_8, g_1..g_8]` as a [`Ring`].
#[derive(Debug, Clone, Copy, Default)]
pub struct IntPolyRing;

impl Ring for IntPolyRing {
    type Elem = IntPoly;

    fn zero(&self) -> IntPoly {
        IntPoly::default()
    }
    fn one(&self) -> IntPoly {
        IntPoly::constant(1)
    }
    fn from_int(&self, n: i64) -> IntPoly {
        IntPoly::constant(n as i128)
    }
    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            *terms.entry(*m).or_insert(0) += c;
        }
        terms.retain(|_, c| *c != 0);
        IntPoly { terms }
    }
    fn neg(&self, a: &IntPoly) -> IntPoly {
        IntPoly { terms: a.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        let mut terms: BTreeMap<Monomial, i128> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let mut m = *ma;
                for (x, y) in m.iter_mut().zip(mb) {
                    *x += y;
                }
                *terms.entry(m).or_insert(0) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0);
        IntPoly { terms }
    }
    fn eq(&self, a: &IntPoly, b: &IntPoly) -> bool {
        a == b
    }
    fn render(&self, a: &IntPoly) -> String {
        format!("{:?}", a.terms)
    }
    fn is_structurally_zero(&self, a: &IntPoly) -> bool {
        a.terms.is_empty()
    }
    fn is_torsion_free(&self) -> bool {
        true
    }
    fn div_int(&self, a: &IntPoly, n: i64) -> Option<IntPoly> {
        let n = n as i128;
        if a.terms.values().any(|c| c % n != 0) {
            return None;
        }
        Some(IntPoly { terms: a.terms.iter().map(|(m, c)| (*m, c / n)).collect() })
    }
}

/// `P_0, ..., P_8` with `(f ⊙ g)_n = P_n(f, g)`.
pub fn universal_polynomials() -> &'static [IntPoly] {
    static POLYS: OnceLock<Vec<IntPoly>> = OnceLock::new();
    POLYS.get_or_init(|| {
        let ring = IntPolyRing;
        let n = UNIVERSAL_MAX_ORDER;
        let f = Series::from_coeffs(
            std::iter::once(ring.one()).chain((0..n).map(IntPoly::var)).collect(),
        );
        let g = Series::from_coeffs(
            std::iter::once(ring.one()).chain((n..2 * n).map(IntPoly::var)).collect(),
        );
        witt_product_ghost(&ring, &f, &g)
            .expect("the universal ghost computation is integral")
            .into_coeffs()
    })
}

/// `(1 + t) ⊙ f = f`: the unit for `⊙`.
pub fn witt_unit<R: Ring>(ring: &R, order: usize) -> Series<R::Elem> {
    series::binomial_term(ring, &ring.one(), 1, order)
}
