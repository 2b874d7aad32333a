//! A symbolic fragment of the Grothendieck ring of varieties.
//!
//! Classes are integer combinations of monomials `L * A^m * (opaque atoms)`
//! where `L` is a multiquadratic field and the opaque atoms are curves,
//! symmetric powers of curves and abelian varieties. Projective spaces and
//! tori are rewritten into affine cells on construction.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::astructure::AStructure;
use crate::error::{Error, Result};
use crate::etale::{etale_product, etale_sym, EtaleField, EtaleSum};
use crate::field::{BaseField, SquareClass};
use crate::gw::{gw_equal, GwElement};
use crate::power::{combine_generators, gen_binomial, PowerStructure};
use crate::ring::{GwRing, Ring};
use crate::series::{self, Series};

/// Atoms without a decomposition in the fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Opaque {
    /// Smooth projective geometrically connected curve of genus `g`.
    Curve(u32),
    /// `Sym^n` of a curve of genus `g`, for `n >= 2`.
    SymCurve(u32, u32),
    /// Abelian variety of dimension `d >= 1`.
    Abelian(u32),
}

impl fmt::Display for Opaque {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Opaque::Curve(g) => write!(f, "Curve(g={g})"),
            Opaque::SymCurve(g, n) => write!(f, "Sym^{n}(Curve(g={g}))"),
            Opaque::Abelian(d) => write!(f, "Ab({d})"),
        }
    }
}

/// `L * A^affine * prod opaque`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub affine: u32,
    pub etale: EtaleField,
    pub opaque: Vec<Opaque>,
}

impl Monomial {
    pub fn point(field: BaseField) -> Self {
        Monomial { affine: 0, etale: EtaleField::trivial(field), opaque: Vec::new() }
    }

    pub fn is_curve_free(&self) -> bool {
        self.opaque.is_empty()
    }

    fn field(&self) -> BaseField {
        self.etale.field()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if !self.etale.is_trivial() {
            factors.push(self.etale.to_string());
        }
        if self.affine > 0 {
            factors.push(format!("A^{}", self.affine));
        }
        factors.extend(self.opaque.iter().map(|o| o.to_string()));
        if factors.is_empty() {
            write!(f, "Pt")
        } else {
            write!(f, "{}", factors.join(" * "))
        }
    }
}

/// An integer combination of monomials over a fixed base field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarietyClass {
    field: BaseField,
    terms: BTreeMap<Monomial, i64>,
}

impl VarietyClass {
    pub fn zero(field: BaseField) -> Self {
        VarietyClass { field, terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: Monomial, k: i64) -> Self {
        let field = m.field();
        let mut terms = BTreeMap::new();
        if k != 0 {
            terms.insert(m, k);
        }
        VarietyClass { field, terms }
    }

    pub fn point(field: BaseField) -> Self {
        Self::from_monomial(Monomial::point(field), 1)
    }

    pub fn from_int(field: BaseField, n: i64) -> Self {
        Self::from_monomial(Monomial::point(field), n)
    }

    pub fn affine(field: BaseField, n: u32) -> Self {
        Self::from_monomial(Monomial { affine: n, ..Monomial::point(field) }, 1)
    }

    /// `P^n = A^0 + ... + A^n`.
    pub fn projective(field: BaseField, n: u32) -> Self {
        (0..=n).fold(Self::zero(field), |acc, i| acc.add(&Self::affine(field, i)))
    }

    /// `G_m = A^1 - Pt`.
    pub fn torus(field: BaseField) -> Self {
        Self::affine(field, 1).sub(&Self::point(field))
    }

    pub fn etale(field: BaseField, gens: &[SquareClass]) -> Result<Self> {
        let l = EtaleField::from_generators(field, gens)?;
        Ok(Self::from_monomial(Monomial { etale: l, ..Monomial::point(field) }, 1))
    }

    pub fn from_etale_sum(field: BaseField, sum: &EtaleSum) -> Self {
        let mut out = Self::zero(field);
        for (l, k) in sum {
            out.add_term(Monomial { etale: l.clone(), ..Monomial::point(field) }, *k);
        }
        out
    }

    /// Curve of genus `g`.
    pub fn curve(field: BaseField, g: u32) -> Self {
        Self::opaque(field, Opaque::Curve(g))
    }

    /// `Sym^n` of a genus-`g` curve (`Pt` for `n = 0`, the curve for `n = 1`).
    pub fn sym_curve(field: BaseField, g: u32, n: u32) -> Self {
        match n {
            0 => Self::point(field),
            1 => Self::curve(field, g),
            _ => Self::opaque(field, Opaque::SymCurve(g, n)),
        }
    }

    /// Abelian variety of dimension `d` (`Ab(0)` is a point).
    pub fn abelian(field: BaseField, d: u32) -> Self {
        if d == 0 {
            Self::point(field)
        } else {
            Self::opaque(field, Opaque::Abelian(d))
        }
    }

    fn opaque(field: BaseField, o: Opaque) -> Self {
        Self::from_monomial(Monomial { opaque: vec![o], ..Monomial::point(field) }, 1)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, k)| (m, *k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, k: i64) {
        let e = self.terms.entry(m).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.retain(|_, k| *k != 0);
        }
    }

    fn check_field(&self, other: &VarietyClass) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &VarietyClass) -> Result<VarietyClass> {
        self.check_field(other)?;
        let mut out = self.clone();
        for (m, k) in other.terms() {
            out.add_term(m.clone(), k);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &VarietyClass) -> Result<VarietyClass> {
        self.check_field(other)?;
        let mut out = Self::zero(self.field);
        for (a, ka) in self.terms() {
            for (b, kb) in other.terms() {
                let mut opaque: Vec<Opaque> = a.opaque.iter().chain(&b.opaque).copied().collect();
                opaque.sort();
                for (l, kl) in etale_product(&a.etale, &b.etale)? {
                    out.add_term(Monomial { affine: a.affine + b.affine, etale: l, opaque: opaque.clone() }, ka * kb * kl);
                }
            }
        }
        Ok(out)
    }

    fn add(&self, other: &VarietyClass) -> VarietyClass {
        self.try_add(other).expect("same field")
    }

    fn sub(&self, other: &VarietyClass) -> VarietyClass {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, n: i64) -> VarietyClass {
        let mut out = Self::zero(self.field);
        for (m, k) in self.terms() {
            out.add_term(m.clone(), k * n);
        }
        out
    }

    pub fn is_curve_free(&self) -> bool {
        self.terms.keys().all(Monomial::is_curve_free)
    }

    pub fn contains_abelian(&self) -> bool {
        self.terms.keys().any(|m| m.opaque.iter().any(|o| matches!(o, Opaque::Abelian(_))))
    }

    pub fn contains_curves(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.opaque.iter().any(|o| matches!(o, Opaque::Curve(_) | Opaque::SymCurve(..))))
    }

    /// The class as a single curve-with-affine-factor `Curve(g) * A^m`, if
    /// it is one.
    pub fn as_curve_monomial(&self) -> Option<(u32, u32)> {
        let mut it = self.terms();
        let (m, k) = it.next()?;
        if it.next().is_some() || k != 1 || !m.etale.is_trivial() {
            return None;
        }
        match m.opaque.as_slice() {
            [Opaque::Curve(g)] => Some((*g, m.affine)),
            _ => None,
        }
    }
}

impl fmt::Display for VarietyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, k)) in self.terms.iter().enumerate() {
            let (sign, abs) = if *k < 0 { ("-", -k) } else { ("+", *k) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if abs != 1 {
                write!(f, "{abs}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Serialize for VarietyClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The fragment as a [`Ring`]; equality is equality of normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarietyRing {
    pub field: BaseField,
}

impl Ring for VarietyRing {
    type Elem = VarietyClass;

    fn zero(&self) -> VarietyClass {
        VarietyClass::zero(self.field)
    }
    fn one(&self) -> VarietyClass {
        VarietyClass::point(self.field)
    }
    fn from_int(&self, n: i64) -> VarietyClass {
        VarietyClass::from_int(self.field, n)
    }
    fn add(&self, a: &VarietyClass, b: &VarietyClass) -> VarietyClass {
        a.try_add(b).expect("elements of one VarietyRing share a field")
    }
    fn neg(&self, a: &VarietyClass) -> VarietyClass {
        a.scale(-1)
    }
    fn mul(&self, a: &VarietyClass, b: &VarietyClass) -> VarietyClass {
        a.try_mul(b).expect("étale products within one field")
    }
    fn eq(&self, a: &VarietyClass, b: &VarietyClass) -> bool {
        a == b
    }
    fn render(&self, a: &VarietyClass) -> String {
        a.to_string()
    }
    fn is_structurally_zero(&self, a: &VarietyClass) -> bool {
        a.is_zero()
    }
    fn scale(&self, a: &VarietyClass, n: i64) -> VarietyClass {
        a.scale(n)
    }
}

/// Symmetric powers on the étale-times-affine part of the fragment:
/// `Sym^n(L * A^m) = Sym^n(L) * A^{mn}`, extended by the power-structure
/// rules to integer combinations.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricPowers {
    ring: VarietyRing,
}

impl SymmetricPowers {
    pub fn new(field: BaseField) -> Self {
        SymmetricPowers { ring: VarietyRing { field } }
    }

    fn generator_series(&self, m: &Monomial, order: usize) -> Result<Series<VarietyClass>> {
        if !m.is_curve_free() {
            return Err(Error::Unsupported(format!(
                "geometric Sym^n of {m} (only its Euler characteristic is available)"
            )));
        }
        let f = self.ring.field;
        let single: EtaleSum = [(m.etale.clone(), 1)].into_iter().collect();
        let mut c = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let sym = VarietyClass::from_etale_sum(f, &etale_sym(f, &single, n)?);
            c.push(sym.try_mul(&VarietyClass::affine(f, m.affine * n as u32))?);
        }
        Ok(Series::from_coeffs(c))
    }
}

impl PowerStructure for SymmetricPowers {
    type R = VarietyRing;

    fn ring(&self) -> &VarietyRing {
        &self.ring
    }

    fn name(&self) -> String {
        format!("symmetric powers of varieties over {}", self.ring.field)
    }

    fn expand(&self, c: &VarietyClass, order: usize) -> Result<Series<VarietyClass>> {
        let parts = c
            .terms()
            .map(|(m, k)| Ok((self.generator_series(m, order)?, k)))
            .collect::<Result<Vec<_>>>()?;
        combine_generators(&self.ring, parts, order)
    }
}

/// Geometric class of `Sym^n(c)` for curve-free `c`.
pub fn sym_class(c: &VarietyClass, n: usize) -> Result<VarietyClass> {
    SymmetricPowers::new(c.field()).b(c, n)
}

/// Compactly supported `A^1`-Euler characteristic of a monomial.
fn chi_monomial(m: &Monomial) -> Result<GwElement> {
    let f = m.field();
    let sign = if m.affine % 2 == 0 { f.one() } else { f.minus_one() };
    let mut out = m.etale.trace_form().twist(sign);
    for o in &m.opaque {
        let v = match *o {
            Opaque::Curve(g) => GwElement::hyperbolic(f).scale(1 - g as i64),
            Opaque::SymCurve(g, n) => curve_sym_chi(f, g, n as i64)?,
            Opaque::Abelian(_) => GwElement::zero(f),
        };
        out = out.try_mul(&v)?;
    }
    Ok(out)
}

/// `chi_c`, a ring homomorphism from the fragment to `GW(k)`.
pub fn chi_c(c: &VarietyClass) -> Result<GwElement> {
    let mut out = GwElement::zero(c.field());
    for (m, k) in c.terms() {
        out = out.try_add(&chi_monomial(m)?.scale(k))?;
    }
    Ok(out)
}

/// Closed form for `chi_c(Sym^n C)` of a genus-`g` curve: for `n = 2m`,
/// `sum_{i<=m} C(g,i) <-1>^i + (C(2g-2,n) - sum_{i<=m} C(g,i))/2 * H`; for
/// odd `n`, `-C(2g-2,n)/2 * H`.
pub fn curve_sym_chi(field: BaseField, g: u32, n: i64) -> Result<GwElement> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("Sym^n needs n >= 0, got {n}")));
    }
    let g = g as i64;
    let top = gen_binomial(2 * g - 2, n);
    let half = |x: i64| -> Result<i64> {
        if x % 2 != 0 {
            return Err(Error::Internal(format!("curve closed form: {x}/2 is not integral")));
        }
        Ok(x / 2)
    };
    let h = GwElement::hyperbolic(field);
    if n % 2 == 1 {
        return Ok(h.scale(-half(top)?));
    }
    let m = n / 2;
    let mut sum = 0;
    let mut diag = GwElement::zero(field);
    for i in 0..=m {
        let c = gen_binomial(g, i);
        sum += c;
        let class = if i % 2 == 0 { field.one() } else { field.minus_one() };
        diag = diag.try_add(&GwElement::from_terms(field, [(class, c)]))?;
    }
    diag.try_add(&h.scale(half(top - sum)?))
}

/// Series `sum_n chi_c(Sym^n M) t^n` for a monomial whose symmetric powers
/// are known at the level of Euler characteristics.
fn monomial_chi_series(m: &Monomial, order: usize) -> Result<Series<GwElement>> {
    let f = m.field();
    let twist = |n: usize| if (m.affine as usize * n) % 2 == 0 { f.one() } else { f.minus_one() };
    match m.opaque.as_slice() {
        [] => {
            let single: EtaleSum = [(m.etale.clone(), 1)].into_iter().collect();
            let c = (0..=order)
                .map(|n| {
                    let sym = VarietyClass::from_etale_sum(f, &etale_sym(f, &single, n)?);
                    Ok(chi_c(&sym)?.twist(twist(n)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Series::from_coeffs(c))
        }
        [Opaque::Curve(g)] if m.etale.is_trivial() => {
            let c = (0..=order)
                .map(|n| Ok(curve_sym_chi(f, *g, n as i64)?.twist(twist(n))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Series::from_coeffs(c))
        }
        _ => Err(Error::Unsupported(format!("Euler characteristic of Sym^n({m})"))),
    }
}

/// `sum_n chi_c(Sym^n c) t^n` up to `order`.
pub fn sym_chi_series(c: &VarietyClass, order: usize) -> Result<Series<GwElement>> {
    let ring = GwRing::new(c.field());
    let parts = c
        .terms()
        .map(|(m, k)| Ok((monomial_chi_series(m, order)?, k)))
        .collect::<Result<Vec<_>>>()?;
    combine_generators(&ring, parts, order)
}

/// `chi_c(Sym^n c)` where it is known: étale-times-affine classes, curves
/// times affine spaces, and integer combinations of these.
pub fn sym_chi(c: &VarietyClass, n: usize) -> Result<GwElement> {
    Ok(sym_chi_series(c, n)?.coeff(n).clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub n: usize,
    /// `chi_c(Sym^n X)`; absent when unknown.
    pub lhs: Option<GwElement>,
    /// `a_n(chi_c(X))`.
    pub rhs: GwElement,
    pub equal: Option<bool>,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub class: String,
    pub field: BaseField,
    pub max_n: usize,
    pub rows: Vec<VerificationRow>,
    pub pass: bool,
    pub prediction_only: bool,
}

/// Compares `chi_c(Sym^n c)` with `a_n(chi_c(c))` for `n <= max_n`.
///
/// Classes containing abelian varieties only get the right-hand side (the
/// predicted value); their rows carry no verdict.
pub fn verify_conjecture(c: &VarietyClass, max_n: usize) -> Result<VerificationReport> {
    let field = c.field();
    let chi = chi_c(c)?;
    let rhs = AStructure::new(field).expand(&chi, max_n)?;
    let prediction_only = c.contains_abelian();
    let method = if prediction_only {
        "prediction-only"
    } else if c.contains_curves() {
        "closed-form"
    } else if c.terms().any(|(m, _)| m.affine > 0) {
        "module-structure"
    } else {
        "orbit"
    };
    let lhs = if prediction_only { None } else { Some(sym_chi_series(c, max_n)?) };
    let mut rows = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let l = lhs.as_ref().map(|s| s.coeff(n).clone());
        let equal = match &l {
            Some(l) => Some(gw_equal(l, rhs.coeff(n))?),
            None => None,
        };
        rows.push(VerificationRow { n, lhs: l, rhs: rhs.coeff(n).clone(), equal, method: method.to_string() });
    }
    let pass = rows.iter().all(|r| r.equal != Some(false));
    Ok(VerificationReport {
        class: c.to_string(),
        field,
        max_n,
        rows,
        pass,
        prediction_only,
    })
}

/// Renders `sum_n chi_c(Sym^n c) t^n` for display.
pub fn render_sym_chi_series(c: &VarietyClass, order: usize) -> Result<String> {
    let ring = GwRing::new(c.field());
    Ok(series::render(&ring, &sym_chi_series(c, order)?))
}
