//! Multiquadratic étale algebras and their symmetric powers.
//!
//! A multiquadratic field `k(sqrt a : a in A)` is stored as the finite
//! subgroup `A` of `k^x / (k^x)^2`. For a finite family of such fields, let
//! `W` be the subgroup generated by all of them and `G = Hom(W, {+-1})` the
//! Galois group of `k(sqrt W)`. The geometric points of `Spec k(sqrt A)` are
//! the characters of `A`, permuted by `G` through restriction. Orbits of
//! `G` on any finite `G`-set built from these points correspond to the
//! connected components of the associated étale scheme: an orbit with
//! stabilizer `S` is `Spec k(sqrt S^perp)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{BaseField, SquareClass};
use crate::gram::span_classes;
use crate::gw::GwElement;

/// Largest number of configurations an orbit enumeration may visit.
pub const MAX_CONFIGURATIONS: u64 = 2_000_000;

/// A multiquadratic field extension, given by its subgroup of square
/// classes. The trivial subgroup is the base field itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EtaleField {
    field: BaseField,
    elements: Vec<SquareClass>,
}

impl EtaleField {
    pub fn trivial(field: BaseField) -> Self {
        EtaleField { field, elements: vec![field.one()] }
    }

    /// `k(sqrt c_1, ..., sqrt c_s)` for independent classes.
    pub fn from_generators(field: BaseField, gens: &[SquareClass]) -> Result<Self> {
        let mut elements = span_classes(field, gens)?;
        elements.sort();
        Ok(EtaleField { field, elements })
    }

    fn from_elements(field: BaseField, mut elements: Vec<SquareClass>) -> Self {
        elements.sort();
        elements.dedup();
        EtaleField { field, elements }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    /// The subgroup, sorted, always containing `<1>`.
    pub fn elements(&self) -> &[SquareClass] {
        &self.elements
    }

    pub fn degree(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Canonical generators: greedily the smallest classes not yet spanned.
    pub fn generators(&self) -> Vec<SquareClass> {
        let f = self.field;
        let mut span: HashSet<SquareClass> = HashSet::from([f.one()]);
        let mut gens = Vec::new();
        for &c in &self.elements {
            if span.contains(&c) {
                continue;
            }
            gens.push(c);
            let next: Vec<SquareClass> = span.iter().map(|x| f.mul_classes(*x, c)).collect();
            span.extend(next);
        }
        gens
    }

    /// Trace form `sum_{w in A} <2^s w>`.
    pub fn trace_form(&self) -> GwElement {
        let f = self.field;
        let s = self.generators().len();
        let scale = f.class_of_int(1i64 << s).expect("powers of two are units");
        GwElement::from_terms(f, self.elements.iter().map(|w| (f.mul_classes(scale, *w), 1)))
    }
}

impl fmt::Display for EtaleField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|c| c.to_string()).collect();
        write!(f, "Et({})", gens.join(","))
    }
}

/// An étale algebra as a formal non-negative combination of fields.
pub type EtaleSum = BTreeMap<EtaleField, i64>;

/// Coordinates on the group `W` spanned by a family of fields.
struct Universe {
    field: BaseField,
    basis: Vec<SquareClass>,
    mask_of: HashMap<SquareClass, u32>,
}

impl Universe {
    fn new<'a>(field: BaseField, fields: impl IntoIterator<Item = &'a EtaleField>) -> Result<Self> {
        let mut basis = Vec::new();
        let mut mask_of = HashMap::from([(field.one(), 0u32)]);
        for l in fields {
            if l.field != field {
                return Err(Error::FieldMismatch(l.field.to_string(), field.to_string()));
            }
            for &c in &l.elements {
                if mask_of.contains_key(&c) {
                    continue;
                }
                if basis.len() >= 16 {
                    return Err(Error::Unsupported("étale data spanning more than 16 square classes".into()));
                }
                let bit = 1u32 << basis.len();
                basis.push(c);
                let old: Vec<(SquareClass, u32)> = mask_of.iter().map(|(k, v)| (*k, *v)).collect();
                for (k, v) in old {
                    mask_of.insert(field.mul_classes(k, c), v | bit);
                }
            }
        }
        Ok(Universe { field, basis, mask_of })
    }

    fn rank(&self) -> usize {
        self.basis.len()
    }

    fn class_of_mask(&self, u: u32) -> SquareClass {
        (0..self.rank())
            .filter(|i| u >> i & 1 == 1)
            .fold(self.field.one(), |acc, i| self.field.mul_classes(acc, self.basis[i]))
    }

    /// Masks of a basis of the subgroup `l`.
    fn subgroup_basis(&self, l: &EtaleField) -> Vec<u32> {
        l.generators().iter().map(|c| self.mask_of[c]).collect()
    }

    /// The fixed field of a subgroup `S` of `G`, i.e. `k(sqrt S^perp)`.
    fn fixed_field(&self, stabilizer: &[u32]) -> EtaleField {
        let elements = (0..1u32 << self.rank())
            .filter(|&u| stabilizer.iter().all(|&g| (g & u).count_ones() % 2 == 0))
            .map(|u| self.class_of_mask(u))
            .collect();
        EtaleField::from_elements(self.field, elements)
    }
}

/// Geometric points of a disjoint union of fields, with the Galois action
/// tabulated as `action[g][p]`.
struct PointSet {
    count: usize,
    action: Vec<Vec<u16>>,
}

impl PointSet {
    fn new(u: &Universe, parts: &[(&EtaleField, i64)]) -> Result<Self> {
        // point = (part, copy, character bits on the part's basis)
        let mut points: Vec<(usize, u32)> = Vec::new();
        let mut bases = Vec::new();
        let mut offsets = Vec::new();
        for (l, k) in parts {
            let basis = u.subgroup_basis(l);
            for _ in 0..*k {
                offsets.push(points.len());
                for bits in 0..1u32 << basis.len() {
                    points.push((bases.len(), bits));
                }
                bases.push(basis.clone());
            }
        }
        if points.len() > u16::MAX as usize {
            return Err(Error::Unsupported("étale algebra of too large degree".into()));
        }
        let action = (0..1u32 << u.rank())
            .map(|g| {
                points
                    .iter()
                    .map(|&(copy, bits)| {
                        let basis = &bases[copy];
                        let flip = basis
                            .iter()
                            .enumerate()
                            .fold(0u32, |acc, (i, &a)| acc | ((g & a).count_ones() & 1) << i);
                        (offsets[copy] + (bits ^ flip) as usize) as u16
                    })
                    .collect()
            })
            .collect();
        Ok(PointSet { count: points.len(), action })
    }
}

/// Sums the fixed fields of the orbits of `G` on `configs`.
fn orbit_sum<C, I, A>(u: &Universe, configs: I, act: A) -> EtaleSum
where
    C: Clone + Eq + std::hash::Hash,
    I: IntoIterator<Item = C>,
    A: Fn(u32, &C) -> C,
{
    let mut seen: HashSet<C> = HashSet::new();
    let mut out = EtaleSum::new();
    for c in configs {
        if seen.contains(&c) {
            continue;
        }
        let mut stabilizer = Vec::new();
        for g in 0..1u32 << u.rank() {
            let image = act(g, &c);
            if image == c {
                stabilizer.push(g);
            }
            seen.insert(image);
        }
        *out.entry(u.fixed_field(&stabilizer)).or_insert(0) += 1;
    }
    out
}

fn multiset_count(points: u64, n: u64) -> u64 {
    // C(points + n - 1, n), saturating
    let mut acc: u128 = 1;
    for i in 0..n {
        acc = acc * (points + i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `Sym^n` of a disjoint union `sum k_i Spec L_i` (all `k_i >= 0`),
/// decomposed into fields.
pub fn etale_sym(field: BaseField, parts: &EtaleSum, n: usize) -> Result<EtaleSum> {
    if parts.values().any(|&k| k < 0) {
        return Err(Error::InvalidArgument("Sym^n of a virtual étale algebra".into()));
    }
    let u = Universe::new(field, parts.keys())?;
    let list: Vec<(&EtaleField, i64)> = parts.iter().map(|(l, k)| (l, *k)).collect();
    let points = PointSet::new(&u, &list)?;
    if multiset_count(points.count as u64, n as u64) > MAX_CONFIGURATIONS {
        return Err(Error::Unsupported(format!(
            "Sym^{n} of a degree {} étale algebra (too many configurations)",
            points.count
        )));
    }
    let configs = Multisets::new(points.count, n);
    Ok(orbit_sum(&u, configs, |g, m: &Vec<u16>| {
        let mut image: Vec<u16> = m.iter().map(|&p| points.action[g as usize][p as usize]).collect();
        image.sort_unstable();
        image
    }))
}

/// `Spec L_a x Spec L_b`, decomposed into fields.
pub fn etale_product(a: &EtaleField, b: &EtaleField) -> Result<EtaleSum> {
    let u = Universe::new(a.field, [a, b])?;
    let pa = PointSet::new(&u, &[(a, 1)])?;
    let pb = PointSet::new(&u, &[(b, 1)])?;
    let configs = (0..pa.count).flat_map(|i| (0..pb.count).map(move |j| (i as u16, j as u16)));
    Ok(orbit_sum(&u, configs, |g, &(i, j)| {
        (pa.action[g as usize][i as usize], pb.action[g as usize][j as usize])
    }))
}

/// Non-decreasing sequences of length `n` over `0..points`.
struct Multisets {
    points: usize,
    current: Option<Vec<u16>>,
}

impl Multisets {
    fn new(points: usize, n: usize) -> Self {
        let current = if points == 0 && n > 0 { None } else { Some(vec![0; n]) };
        Multisets { points, current }
    }
}

impl Iterator for Multisets {
    type Item = Vec<u16>;

    fn next(&mut self) -> Option<Vec<u16>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let Some(top) = self.points.checked_sub(1) else {
            return Some(out);
        };
        let top = top as u16;
        let mut k = next.len();
        while k > 0 && next[k - 1] == top {
            k -= 1;
        }
        if k > 0 {
            let v = next[k - 1] + 1;
            for x in &mut next[k - 1..] {
                *x = v;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Total degree `sum k_i [L_i : k]`.
pub fn total_degree(parts: &EtaleSum) -> i64 {
    parts.iter().map(|(l, k)| l.degree() as i64 * k).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: BaseField = BaseField::Rationals;

    fn et(gens: &[i64]) -> EtaleField {
        let g: Vec<SquareClass> = gens.iter().map(|&a| Q.class_of_int(a).unwrap()).collect();
        EtaleField::from_generators(Q, &g).unwrap()
    }

    fn sum(items: &[(EtaleField, i64)]) -> EtaleSum {
        items.iter().cloned().collect()
    }

    #[test]
    fn canonical_generators() {
        assert_eq!(et(&[6, 3]).generators(), vec![SquareClass(2), SquareClass(3)]);
        assert_eq!(et(&[6, 3]), et(&[2, 3]));
        assert_eq!(et(&[6, 3]).to_string(), "Et(2,3)");
        assert_eq!(EtaleField::trivial(Q).degree(), 1);
        assert!(matches!(EtaleField::from_generators(Q, &[SquareClass(2), SquareClass(2)]), Err(Error::NotIndependent(_))));
    }

    #[test]
    fn quadratic_symmetric_powers() {
        let l = et(&[5]);
        for n in 0..8usize {
            let s = etale_sym(Q, &sum(&[(l.clone(), 1)]), n).unwrap();
            let expected = if n % 2 == 1 {
                sum(&[(l.clone(), (n as i64 + 1) / 2)])
            } else if n == 0 {
                sum(&[(EtaleField::trivial(Q), 1)])
            } else {
                sum(&[(l.clone(), n as i64 / 2), (EtaleField::trivial(Q), 1)])
            };
            assert_eq!(s, expected, "n = {n}");
        }
    }

    #[test]
    fn biquadratic_square() {
        let s = etale_sym(Q, &sum(&[(et(&[2, 3]), 1)]), 2).unwrap();
        let expected = sum(&[(et(&[2, 3]), 1), (et(&[2]), 1), (et(&[3]), 1), (et(&[6]), 1)]);
        assert_eq!(s, expected);
        assert_eq!(total_degree(&s), 10);
    }

    #[test]
    fn empty_algebra() {
        let pt = sum(&[(EtaleField::trivial(Q), 1)]);
        assert_eq!(etale_sym(Q, &EtaleSum::new(), 0).unwrap(), pt);
        assert!(etale_sym(Q, &EtaleSum::new(), 3).unwrap().is_empty());
    }

    #[test]
    fn products() {
        let l = et(&[7]);
        assert_eq!(etale_product(&l, &l).unwrap(), sum(&[(l.clone(), 2)]));
        assert_eq!(etale_product(&EtaleField::trivial(Q), &l).unwrap(), sum(&[(l.clone(), 1)]));
        assert_eq!(etale_product(&et(&[2]), &et(&[3])).unwrap(), sum(&[(et(&[2, 3]), 1)]));
    }

    #[test]
    fn trace_forms() {
        assert_eq!(
            et(&[3]).trace_form(),
            GwElement::from_int_terms(Q, [(2, 1), (6, 1)]).unwrap()
        );
    }

    #[test]
    fn multiset_enumeration() {
        assert_eq!(Multisets::new(4, 2).count(), 10);
        assert_eq!(Multisets::new(3, 0).count(), 1);
        assert_eq!(Multisets::new(0, 2).count(), 0);
        assert_eq!(multiset_count(4, 2), 10);
    }
}
