//! Congruence diagonalization of symmetric Gram matrices and trace forms of
//! multiquadratic extensions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{mod_pow, BaseField, SquareClass};
use crate::gw::GwElement;

/// Minimal field interface needed for symmetric Gaussian elimination.
trait Scalar: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
}

impl Scalar for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct ModP {
    v: u64,
    p: u64,
}

impl Scalar for ModP {
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, o: &Self) -> Self {
        ModP { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        ModP { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        ModP { v: ((self.v as u128 * o.v as u128) % self.p as u128) as u64, p: self.p }
    }
    fn div(&self, o: &Self) -> Self {
        self.mul(&ModP { v: mod_pow(o.v, self.p - 2, self.p), p: self.p })
    }
}

/// Diagonal entries of a matrix congruent to `m` (symmetric, nondegenerate).
fn congruence_diagonal<S: Scalar>(mut m: Vec<Vec<S>>) -> Result<Vec<S>> {
    let n = m.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // e_k <- e_k + e_j makes the pivot 2 m[k][j] != 0
                for c in 0..n {
                    let v = m[k][c].add(&m[j][c]);
                    m[k][c] = v;
                }
                for row in m.iter_mut() {
                    let v = row[k].add(&row[j]);
                    row[k] = v;
                }
            } else {
                return Err(Error::Degenerate);
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = m[i][k].div(&pivot);
            for c in 0..n {
                let v = m[i][c].sub(&factor.mul(&m[k][c]));
                m[i][c] = v;
            }
            for row in m.iter_mut() {
                let v = row[i].sub(&factor.mul(&row[k]));
                row[i] = v;
            }
        }
        diag.push(pivot);
    }
    Ok(diag)
}

/// Diagonalizes a symmetric nondegenerate rational matrix by congruence and
/// returns `sum <d_i>` in `GW(field)`.
pub fn diagonalize_gram(field: BaseField, gram: &[Vec<BigRational>]) -> Result<GwElement> {
    let n = gram.len();
    if gram.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("Gram matrix must be square".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(Error::InvalidArgument("Gram matrix must be symmetric".into()));
            }
        }
    }
    let classes: Vec<SquareClass> = match field {
        BaseField::FiniteField(p) => {
            let pb = BigInt::from(p);
            let reduce = |q: &BigRational| -> Result<ModP> {
                let den = ((q.denom() % &pb) + &pb) % &pb;
                if den.is_zero() {
                    return Err(Error::InvalidArgument(format!("{q} is not defined in F_{p}")));
                }
                let num = ((q.numer() % &pb) + &pb) % &pb;
                let num = ModP { v: num.to_u64().expect("residue"), p };
                let den = ModP { v: den.to_u64().expect("residue"), p };
                Ok(num.div(&den))
            };
            let m = gram
                .iter()
                .map(|row| row.iter().map(reduce).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            congruence_diagonal(m)?
                .into_iter()
                .map(|d| field.class_of_int(d.v as i64))
                .collect::<Result<_>>()?
        }
        _ => congruence_diagonal(gram.to_vec())?
            .iter()
            .map(|d| field.class_of_rational(d))
            .collect::<Result<_>>()?,
    };
    Ok(GwElement::from_terms(field, classes.into_iter().map(|c| (c, 1))))
}

/// Checks that the classes of `gens` span a subgroup of order `2^s` and
/// returns that subgroup, indexed by exponent vectors `eps in {0,1}^s`.
pub fn span_classes(field: BaseField, gens: &[SquareClass]) -> Result<Vec<SquareClass>> {
    let mut span = vec![field.one()];
    for g in gens {
        let next: Vec<SquareClass> = span.iter().map(|c| field.mul_classes(*c, *g)).collect();
        span.extend(next);
    }
    let mut sorted = span.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != span.len() {
        let list: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        return Err(Error::NotIndependent(list.join(", ")));
    }
    Ok(span)
}

/// Trace form of `k(sqrt c_1, ..., sqrt c_s)`: `sum_eps <2^s prod c_i^eps_i>`.
pub fn trace_form(field: BaseField, gens: &[SquareClass]) -> Result<GwElement> {
    let span = span_classes(field, gens)?;
    let scale = field.class_of_int(1i64 << gens.len())?;
    Ok(GwElement::from_terms(
        field,
        span.into_iter().map(|c| (field.mul_classes(scale, c), 1)),
    ))
}

/// Gram matrix of `(x, y) -> Tr(xy)` on the monomial basis
/// `b_eps = prod sqrt(c_i)^eps_i` of `Q(sqrt c_1, ..., sqrt c_s)`.
pub fn trace_gram_matrix(gens: &[BigRational]) -> Vec<Vec<BigRational>> {
    let s = gens.len();
    let dim = 1usize << s;
    let degree = BigRational::from_integer(BigInt::from(dim));
    let mut m = vec![vec![BigRational::zero(); dim]; dim];
    for (e, row) in m.iter_mut().enumerate() {
        for (d, entry) in row.iter_mut().enumerate() {
            // b_e b_d = (prod_{i in e & d} c_i) b_{e xor d}; only b_0 has nonzero trace
            if e ^ d != 0 {
                continue;
            }
            let mut coeff = BigRational::one();
            for (i, c) in gens.iter().enumerate() {
                if (e & d) >> i & 1 == 1 {
                    coeff *= c;
                }
            }
            *entry = coeff * &degree;
        }
    }
    m
}
