//! Virtual quadratic forms: elements of the Grothendieck-Witt ring `GW(k)`.
//!
//! An element is stored as a finite map from canonical square classes to
//! integer coefficients, i.e. as a formal combination of one-dimensional
//! forms `<a>`. Distinct maps may denote the same ring element (for instance
//! `<2> + <-1>` and `<1> + <-2>` over `Q`); [`gw_equal`] decides equality in
//! the ring itself.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{BaseField, SquareClass};
use crate::hilbert::{hilbert_symbol, is_local_square, relevant_places, Place};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GwElement {
    field: BaseField,
    terms: BTreeMap<SquareClass, i64>,
}

impl GwElement {
    pub fn zero(field: BaseField) -> Self {
        GwElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: BaseField) -> Self {
        Self::from_int(field, 1)
    }

    /// The image of `n` under `Z -> GW(k)`, i.e. `n<1>`.
    pub fn from_int(field: BaseField, n: i64) -> Self {
        Self::from_terms(field, [(SquareClass(1), n)])
    }

    /// `<a>` for a canonical square class `a` of `field`.
    pub fn class(field: BaseField, a: SquareClass) -> Self {
        Self::from_terms(field, [(a, 1)])
    }

    /// `<a>` for a nonzero integer `a`.
    pub fn form(field: BaseField, a: i64) -> Result<Self> {
        Ok(Self::class(field, field.class_of_int(a)?))
    }

    /// The hyperbolic plane `<1> + <-1>`.
    pub fn hyperbolic(field: BaseField) -> Self {
        Self::from_terms(field, [(SquareClass(1), 1), (field.minus_one(), 1)])
    }

    /// Builds an element from `(class, coefficient)` pairs, summing repeats
    /// and dropping zeros. Classes must already be canonical for `field`.
    pub fn from_terms<I: IntoIterator<Item = (SquareClass, i64)>>(field: BaseField, terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (c, k) in terms {
            *map.entry(c).or_insert(0) += k;
        }
        map.retain(|_, k| *k != 0);
        GwElement { field, terms: map }
    }

    /// Builds `sum k_i <a_i>` from integer representatives.
    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64)>>(field: BaseField, terms: I) -> Result<Self> {
        let mut out = Vec::new();
        for (a, k) in terms {
            out.push((field.class_of_int(a)?, k));
        }
        Ok(Self::from_terms(field, out))
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    /// Nonzero terms in canonical class order.
    pub fn terms(&self) -> impl Iterator<Item = (SquareClass, i64)> + '_ {
        self.terms.iter().map(|(c, k)| (*c, *k))
    }

    pub fn coeff(&self, a: SquareClass) -> i64 {
        self.terms.get(&a).copied().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Zero as a formal combination (not just zero in the ring).
    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All stored coefficients are non-negative.
    pub fn is_diagonal_effective(&self) -> bool {
        self.terms.values().all(|&k| k >= 0)
    }

    fn check_field(&self, other: &GwElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GwElement) -> Result<GwElement> {
        self.check_field(other)?;
        let mut terms = self.terms.clone();
        for (c, k) in &other.terms {
            *terms.entry(*c).or_insert(0) += k;
        }
        terms.retain(|_, k| *k != 0);
        Ok(GwElement {
            field: self.field,
            terms,
        })
    }

    pub fn try_sub(&self, other: &GwElement) -> Result<GwElement> {
        self.try_add(&other.neg())
    }

    /// Tensor product: `<a><b> = <ab>` extended bilinearly.
    pub fn try_mul(&self, other: &GwElement) -> Result<GwElement> {
        self.check_field(other)?;
        let f = self.field;
        let mut terms: BTreeMap<SquareClass, i64> = BTreeMap::new();
        for (a, j) in &self.terms {
            for (b, k) in &other.terms {
                *terms.entry(f.mul_classes(*a, *b)).or_insert(0) += j * k;
            }
        }
        terms.retain(|_, k| *k != 0);
        Ok(GwElement { field: f, terms })
    }

    pub fn scale(&self, n: i64) -> GwElement {
        Self::from_terms(self.field, self.terms.iter().map(|(c, k)| (*c, k * n)))
    }

    /// Multiplication by `<a>`.
    pub fn twist(&self, a: SquareClass) -> GwElement {
        let f = self.field;
        Self::from_terms(f, self.terms.iter().map(|(c, k)| (f.mul_classes(*c, a), *k)))
    }

    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Signature with respect to the real embedding.
    pub fn signature(&self) -> Result<i64> {
        if !self.field.has_signature() {
            return Err(Error::Unsupported(format!(
                "signature over {}",
                self.field
            )));
        }
        Ok(self.terms.iter().map(|(c, k)| c.0.signum() * k).sum())
    }

    /// Determinant square class `prod a^k`, extended multiplicatively to
    /// virtual forms.
    pub fn discriminant(&self) -> SquareClass {
        let f = self.field;
        self.terms
            .iter()
            .filter(|(_, k)| k.rem_euclid(2) == 1)
            .fold(f.one(), |acc, (c, _)| f.mul_classes(acc, *c))
    }

    /// Signed discriminant `(-1)^(r(r-1)/2) * det`.
    pub fn signed_discriminant(&self) -> SquareClass {
        let r = self.rank();
        let d = self.discriminant();
        if (r * (r - 1) / 2).rem_euclid(2) == 1 {
            self.field.mul_classes(d, self.field.minus_one())
        } else {
            d
        }
    }

    /// Positive and negative parts as effective forms: `self = pos - neg`.
    pub fn split_effective(&self) -> (GwElement, GwElement) {
        let pos = Self::from_terms(self.field, self.terms().filter(|(_, k)| *k > 0));
        let neg = Self::from_terms(self.field, self.terms().filter(|(_, k)| *k < 0).map(|(c, k)| (c, -k)));
        (pos, neg)
    }

    pub fn invariants(&self) -> InvariantProfile {
        let signature = self.signature().ok();
        let hasse = (self.field == BaseField::Rationals).then(|| {
            let (pos, neg) = self.split_effective();
            relevant_places(self.terms.keys().map(|c| c.0))
                .into_iter()
                .map(|v| (v, (hasse_invariant(&pos, v), hasse_invariant(&neg, v))))
                .collect()
        });
        InvariantProfile {
            rank: self.rank(),
            signature,
            discriminant: self.discriminant(),
            signed_discriminant: self.signed_discriminant(),
            hasse,
        }
    }
}

/// Hasse invariant `prod_{i<j} (a_i, a_j)_v` of an effective diagonal form
/// over `Q`, computed from class multiplicities.
pub fn hasse_invariant(q: &GwElement, v: Place) -> i8 {
    debug_assert!(q.is_diagonal_effective());
    let terms: Vec<(SquareClass, i64)> = q.terms().collect();
    let mut parity = 0i64;
    for (i, (a, m)) in terms.iter().enumerate() {
        if hilbert_symbol(a.0, a.0, v).expect("nonzero") == -1 {
            parity += m * (m - 1) / 2;
        }
        for (b, n) in &terms[i + 1..] {
            if hilbert_symbol(a.0, b.0, v).expect("nonzero") == -1 {
                parity += m * n;
            }
        }
    }
    if parity % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Rank, signature, discriminants and (over `Q`) per-place Hasse invariants
/// of the positive and negative effective parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub rank: i64,
    pub signature: Option<i64>,
    pub discriminant: SquareClass,
    pub signed_discriminant: SquareClass,
    pub hasse: Option<BTreeMap<Place, (i8, i8)>>,
}

/// Equality in `GW(k)`, decided by a complete set of invariants.
pub fn gw_equal(x: &GwElement, y: &GwElement) -> Result<bool> {
    let d = x.try_sub(y)?;
    Ok(is_zero_in_gw(&d))
}

/// Whether `q = 0` in `GW(k)`.
pub fn is_zero_in_gw(q: &GwElement) -> bool {
    if q.is_formally_zero() {
        return true;
    }
    if q.rank() != 0 {
        return false;
    }
    match q.field {
        BaseField::QuadraticallyClosed => true,
        BaseField::Reals => q.signature() == Ok(0),
        BaseField::FiniteField(_) => q.discriminant() == SquareClass(1),
        BaseField::Rationals => {
            // Witt cancellation: q = P - N is zero iff P and N are isometric,
            // which Hasse-Minkowski decides locally.
            let (pos, neg) = q.split_effective();
            if pos.signature() != neg.signature() || pos.discriminant() != neg.discriminant() {
                return false;
            }
            relevant_places(q.terms.keys().map(|c| c.0))
                .into_iter()
                .all(|v| hasse_invariant(&pos, v) == hasse_invariant(&neg, v))
        }
    }
}

/// Whether `q` is the class of an honest (non-virtual) form, i.e. equals
/// some `sum <a_i>` with non-negative multiplicities. Zero counts as
/// effective.
pub fn is_effective(q: &GwElement) -> bool {
    let r = q.rank();
    if r < 0 {
        return false;
    }
    if r == 0 {
        return is_zero_in_gw(q);
    }
    match q.field {
        BaseField::QuadraticallyClosed | BaseField::FiniteField(_) => true,
        BaseField::Reals => q.signature().map(|s| s.abs() <= r).unwrap_or(false),
        BaseField::Rationals => {
            if q.is_diagonal_effective() {
                return true;
            }
            let s = q.signature().expect("Q is ordered");
            if s.abs() > r {
                return false;
            }
            // Look for X with X + N = P: its invariants are forced, and X
            // exists iff the local existence conditions hold everywhere.
            let (pos, neg) = q.split_effective();
            let f = q.field;
            let d_x = f.mul_classes(pos.discriminant(), neg.discriminant());
            let d_n = neg.discriminant();
            relevant_places(q.terms.keys().map(|c| c.0))
                .into_iter()
                .filter(|v| *v != Place::Infinity)
                .all(|v| {
                    let eps = hasse_invariant(&pos, v)
                        * hasse_invariant(&neg, v)
                        * hilbert_symbol(d_x.0, d_n.0, v).expect("nonzero");
                    match r {
                        1 => eps == 1,
                        2 => eps == 1 || !is_local_square(-d_x.0, v),
                        _ => true,
                    }
                })
        }
    }
}

impl fmt::Display for GwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, k)) in self.terms.iter().enumerate() {
            let mag = k.unsigned_abs();
            match (i, *k < 0) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "<{c}>")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermJson {
    class: String,
    coeff: i64,
}

/// Canonical JSON rendering: `[{"class": "2", "coeff": 1}, ...]`.
impl Serialize for GwElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (c, k) in &self.terms {
            seq.serialize_element(&TermJson {
                class: c.to_string(),
                coeff: *k,
            })?;
        }
        seq.end()
    }
}

impl Add for &GwElement {
    type Output = GwElement;
    fn add(self, rhs: &GwElement) -> GwElement {
        self.try_add(rhs).expect("field mismatch in GW addition")
    }
}

impl Sub for &GwElement {
    type Output = GwElement;
    fn sub(self, rhs: &GwElement) -> GwElement {
        self.try_sub(rhs).expect("field mismatch in GW subtraction")
    }
}

impl Mul for &GwElement {
    type Output = GwElement;
    fn mul(self, rhs: &GwElement) -> GwElement {
        self.try_mul(rhs).expect("field mismatch in GW multiplication")
    }
}

impl Neg for &GwElement {
    type Output = GwElement;
    fn neg(self) -> GwElement {
        self.scale(-1)
    }
}

impl GwElement {
    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> GwElement {
        self.scale(-1)
    }
}
