//! Coefficient rings for truncated power series.
//!
//! A [`Ring`] is a descriptor object: elements are plain values and all
//! arithmetic goes through the descriptor, so that rings whose elements need
//! context (such as the base field of `GW(k)`) fit the same interface.

use std::fmt::Debug;

use crate::field::BaseField;
use crate::gw::{gw_equal, is_zero_in_gw, GwElement};

pub trait Ring: Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Equality in the ring, which may be coarser than equality of
    /// representations.
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn render(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.zero())
    }

    /// Cheap check that `a` is stored as zero; may return `false` for
    /// representations of zero that need the full equality test.
    fn is_structurally_zero(&self, _a: &Self::Elem) -> bool {
        false
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.one())
    }

    fn scale(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_int(n))
    }

    /// Whether the additive group has no torsion.
    fn is_torsion_free(&self) -> bool {
        false
    }

    /// Exact division by a nonzero integer; only meaningful (and only
    /// implemented) for torsion-free rings. `None` if not divisible.
    fn div_int(&self, _a: &Self::Elem, _n: i64) -> Option<Self::Elem> {
        None
    }
}

/// The integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = i64;

    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn from_int(&self, n: i64) -> i64 {
        n
    }
    fn add(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn neg(&self, a: &i64) -> i64 {
        -a
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a * b
    }
    fn eq(&self, a: &i64, b: &i64) -> bool {
        a == b
    }
    fn render(&self, a: &i64) -> String {
        a.to_string()
    }
    fn is_structurally_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn is_torsion_free(&self) -> bool {
        true
    }
    fn div_int(&self, a: &i64, n: i64) -> Option<i64> {
        (a % n == 0).then(|| a / n)
    }
}

/// `GW(k)` for a fixed base field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GwRing {
    pub field: BaseField,
}

impl GwRing {
    pub fn new(field: BaseField) -> Self {
        GwRing { field }
    }
}

impl Ring for GwRing {
    type Elem = GwElement;

    fn zero(&self) -> GwElement {
        GwElement::zero(self.field)
    }
    fn one(&self) -> GwElement {
        GwElement::one(self.field)
    }
    fn from_int(&self, n: i64) -> GwElement {
        GwElement::from_int(self.field, n)
    }
    fn add(&self, a: &GwElement, b: &GwElement) -> GwElement {
        a + b
    }
    fn neg(&self, a: &GwElement) -> GwElement {
        a.neg()
    }
    fn mul(&self, a: &GwElement, b: &GwElement) -> GwElement {
        a * b
    }
    fn eq(&self, a: &GwElement, b: &GwElement) -> bool {
        gw_equal(a, b).expect("elements of one GwRing share a field")
    }
    fn is_zero(&self, a: &GwElement) -> bool {
        is_zero_in_gw(a)
    }
    fn render(&self, a: &GwElement) -> String {
        a.to_string()
    }
    fn is_structurally_zero(&self, a: &GwElement) -> bool {
        a.is_formally_zero()
    }
    fn scale(&self, a: &GwElement, n: i64) -> GwElement {
        a.scale(n)
    }

    /// `GW(k)` is torsion-free exactly when every form is determined by rank
    /// and signature, which among the supported fields means `R` and
    /// quadratically closed fields.
    fn is_torsion_free(&self) -> bool {
        matches!(self.field, BaseField::Reals | BaseField::QuadraticallyClosed)
    }

    fn div_int(&self, a: &GwElement, n: i64) -> Option<GwElement> {
        // Over R and C the representation by classes is unique, so
        // coefficientwise division is exact division in the ring.
        if !self.is_torsion_free() {
            return None;
        }
        let mut out = Vec::new();
        for (c, k) in a.terms() {
            if k % n != 0 {
                return None;
            }
            out.push((c, k / n));
        }
        Some(GwElement::from_terms(self.field, out))
    }
}
