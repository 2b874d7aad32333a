//! The power structure `a_*` on `GW(k)`, McGarraghy's symmetric powers,
//! compatibility of ring maps with power structures, and the discriminant
//! exponent probe.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{BaseField, SquareClass};
use crate::gw::{is_effective, GwElement};
use crate::power::{combine_generators, gen_binomial, Binomial, Corrupted, ElemOf, PowerStructure};
use crate::ring::{GwRing, Ring};
use crate::sample::{case_rng, class_pool, random_effective, random_virtual};
use crate::series::{self, Series};

/// `t_a = <2> + <a> - <1> - <2a>`, a 2-torsion element of `GW(k)`.
pub fn torsion_term(field: BaseField, a: SquareClass) -> GwElement {
    let two = field.two();
    GwElement::from_terms(
        field,
        [(two, 1), (a, 1), (field.one(), -1), (field.mul_classes(two, a), -1)],
    )
}

/// `a_n(<a>) = <a^n> + n(n-1)/2 * t_a`.
pub fn a_generator(field: BaseField, a: SquareClass, n: i64) -> Result<GwElement> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("a_n needs n >= 0, got {n}")));
    }
    let power = if n % 2 == 0 { field.one() } else { a };
    Ok(GwElement::class(field, power).try_add(&torsion_term(field, a).scale(n * (n - 1) / 2))?)
}

/// `a_*` on `GW(k)`.
#[derive(Debug, Clone, Copy)]
pub struct AStructure {
    ring: GwRing,
}

impl AStructure {
    pub fn new(field: BaseField) -> Self {
        AStructure { ring: GwRing::new(field) }
    }

    pub fn field(&self) -> BaseField {
        self.ring.field
    }

    fn generator_series(&self, a: SquareClass, order: usize) -> Series<GwElement> {
        Series::from_coeffs(
            (0..=order as i64)
                .map(|n| a_generator(self.field(), a, n).expect("n >= 0"))
                .collect(),
        )
    }
}

fn check_field(ring: &GwRing, q: &GwElement) -> Result<()> {
    if q.field() != ring.field {
        return Err(Error::FieldMismatch(q.field().to_string(), ring.field.to_string()));
    }
    Ok(())
}

impl PowerStructure for AStructure {
    type R = GwRing;

    fn ring(&self) -> &GwRing {
        &self.ring
    }

    fn name(&self) -> String {
        format!("a_* on GW({})", self.field())
    }

    fn expand(&self, q: &GwElement, order: usize) -> Result<Series<GwElement>> {
        check_field(&self.ring, q)?;
        combine_generators(&self.ring, q.terms().map(|(c, k)| (self.generator_series(c, order), k)), order)
    }
}

/// `a_n(q)`, from the canonical diagonal representation of `q`.
pub fn a_n(q: &GwElement, n: i64) -> Result<GwElement> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("a_n needs n >= 0, got {n}")));
    }
    AStructure::new(q.field()).b(q, n as usize)
}

/// McGarraghy's non-factorial symmetric powers: `S^n(<a>) = <a^n>`.
#[derive(Debug, Clone, Copy)]
pub struct NonFactorial {
    ring: GwRing,
}

impl NonFactorial {
    pub fn new(field: BaseField) -> Self {
        NonFactorial { ring: GwRing::new(field) }
    }
}

impl PowerStructure for NonFactorial {
    type R = GwRing;

    fn ring(&self) -> &GwRing {
        &self.ring
    }

    fn name(&self) -> String {
        format!("non-factorial symmetric powers on GW({})", self.ring.field)
    }

    fn expand(&self, q: &GwElement, order: usize) -> Result<Series<GwElement>> {
        check_field(&self.ring, q)?;
        let f = self.ring.field;
        let parts = q.terms().map(|(c, k)| {
            let g = (0..=order)
                .map(|n| GwElement::class(f, if n % 2 == 0 { f.one() } else { c }))
                .collect();
            (Series::from_coeffs(g), k)
        });
        combine_generators(&self.ring, parts, order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymVariant {
    Factorial,
    NonFactorial,
}

/// McGarraghy's symmetric powers of a form.
///
/// The factorial variant sums `prod <n_i! a_i^{n_i}>` over weak compositions
/// `n_1 + ... + n_m = n` of the diagonal entries; it is only offered in
/// characteristic zero and for forms given with non-negative coefficients.
pub fn mcgarraghy_sym(q: &GwElement, n: i64, variant: SymVariant) -> Result<GwElement> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("symmetric power needs n >= 0, got {n}")));
    }
    let field = q.field();
    match variant {
        SymVariant::NonFactorial => NonFactorial::new(field).b(q, n as usize),
        SymVariant::Factorial => {
            if field.characteristic() != 0 {
                return Err(Error::Unsupported(format!(
                    "factorial symmetric powers over {field} (degenerate in positive characteristic)"
                )));
            }
            if !q.is_diagonal_effective() {
                return Err(Error::NotEffective(q.to_string()));
            }
            let entries: Vec<SquareClass> = q
                .terms()
                .flat_map(|(c, k)| std::iter::repeat_n(c, k as usize))
                .collect();
            let mut out = Vec::new();
            let mut parts = vec![0usize; entries.len()];
            weak_compositions(n as usize, &mut parts, 0, &mut |p| {
                let mut class = field.one();
                for (a, &m) in entries.iter().zip(p) {
                    let fact: i64 = (1..=m as i64).product();
                    let fc = field.class_of_int(fact).expect("factorial is nonzero");
                    class = field.mul_classes(class, fc);
                    if m % 2 == 1 {
                        class = field.mul_classes(class, *a);
                    }
                }
                out.push((class, 1));
            });
            Ok(GwElement::from_terms(field, out))
        }
    }
}

fn weak_compositions(n: usize, parts: &mut Vec<usize>, i: usize, visit: &mut impl FnMut(&[usize])) {
    if parts.is_empty() {
        if n == 0 {
            visit(parts);
        }
        return;
    }
    if i == parts.len() - 1 {
        parts[i] = n;
        visit(parts);
        return;
    }
    for k in 0..=n {
        parts[i] = k;
        weak_compositions(n - k, parts, i + 1, visit);
    }
}

/// A counterexample found by a coefficientwise check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub case: usize,
    pub input: String,
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RespectsReport {
    pub map: String,
    pub source: String,
    pub target: String,
    pub cases: usize,
    pub pass: bool,
    pub failures: Vec<Witness>,
}

/// Checks `phi(b_n(r)) = b'_n(phi(r))` for `n <= order` on every sample.
pub fn check_respects<S, T, F>(
    map: &str,
    source: &S,
    target: &T,
    phi: F,
    samples: &[ElemOf<S>],
    order: usize,
) -> Result<RespectsReport>
where
    S: PowerStructure,
    T: PowerStructure,
    F: Fn(&ElemOf<S>) -> ElemOf<T> + Sync,
{
    let tr = target.ring();
    let results: Vec<Result<Option<Witness>>> = samples
        .par_iter()
        .enumerate()
        .map(|(case, r)| {
            let lhs = source.expand(r, order)?.map(&phi);
            let rhs = target.expand(&phi(r), order)?;
            Ok(series::first_difference(tr, &lhs, &rhs).map(|n| Witness {
                case,
                input: source.ring().render(r),
                n,
                lhs: tr.render(lhs.coeff(n)),
                rhs: tr.render(rhs.coeff(n)),
            }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(w) = r? {
            failures.push(w);
        }
    }
    Ok(RespectsReport {
        map: map.to_string(),
        source: source.name(),
        target: target.name(),
        cases: samples.len(),
        pass: failures.is_empty(),
        failures,
    })
}

/// The ring maps known to [`respects_check`].
pub const RING_MAPS: [&str; 3] = ["rank", "base-change-R", "base-change-C"];

/// Image of a rational form over another field, class by class.
pub fn base_change(q: &GwElement, target: BaseField) -> Result<GwElement> {
    let mut out = Vec::new();
    for (c, k) in q.terms() {
        out.push((target.class_of_int(c.0)?, k));
    }
    Ok(GwElement::from_terms(target, out))
}

/// Tests a named ring map against `a_*` on both sides (the binomial
/// structure on `Z` for `rank`) on `cases` seeded samples from `field`.
/// With `inject_fault` the target structure gets a corrupted `b_2`.
pub fn respects_check(
    map: &str,
    field: BaseField,
    seed: u64,
    cases: usize,
    order: usize,
    inject_fault: bool,
) -> Result<RespectsReport> {
    let source_field = match map {
        "rank" => field,
        "base-change-R" | "base-change-C" => BaseField::Rationals,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown ring map '{other}' (known: {})",
                RING_MAPS.join(", ")
            )))
        }
    };
    let source = AStructure::new(source_field);
    let samples: Vec<GwElement> = (0..cases)
        .map(|i| {
            let mut rng = case_rng(seed, i);
            random_virtual(source_field, 4, 3, &mut rng)
        })
        .collect();
    macro_rules! run {
        ($target:expr, $phi:expr) => {
            if inject_fault {
                check_respects(map, &source, &Corrupted { inner: $target }, $phi, &samples, order)
            } else {
                check_respects(map, &source, &$target, $phi, &samples, order)
            }
        };
    }
    match map {
        "rank" => run!(Binomial, |q: &GwElement| q.rank()),
        _ => {
            let target_field = if map == "base-change-R" {
                BaseField::Reals
            } else {
                BaseField::QuadraticallyClosed
            };
            run!(AStructure::new(target_field), move |q: &GwElement| {
                base_change(q, target_field).expect("rational classes are units")
            })
        }
    }
}

/// Rank law: `rank a_n(q) = C(rank q + n - 1, n)`.
pub fn macdonald_rank(rank: i64, n: i64) -> i64 {
    gen_binomial(rank + n - 1, n)
}

/// Outcome of the discriminant exponent probe for one `(n, rank)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscCell {
    pub n: usize,
    pub rank: i64,
    pub samples: usize,
    /// Exponent parity consistent with every sample under the plain
    /// convention (`None` if no single exponent works).
    pub plain: Option<u8>,
    pub signed: Option<u8>,
    /// Whether some sample had nontrivial discriminant, so that the
    /// exponent is actually pinned down.
    pub determined_plain: bool,
    pub determined_signed: bool,
    pub stated: u8,
    pub candidate: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConventionVerdict {
    pub convention: String,
    pub consistent: bool,
    pub matches_stated: bool,
    pub matches_candidate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscProbeReport {
    pub field: BaseField,
    pub max_n: usize,
    pub max_rank: i64,
    pub cells: Vec<DiscCell>,
    pub verdicts: Vec<ConventionVerdict>,
}

impl DiscProbeReport {
    /// Some convention admits a single exponent function.
    pub fn identified(&self) -> bool {
        self.verdicts.iter().any(|v| v.consistent)
    }
}

/// Samples used by the probe: all effective diagonal forms of the given rank
/// on a small class pool, plus seeded virtual forms of that rank.
fn probe_samples(field: BaseField, rank: i64, seed: u64) -> Vec<GwElement> {
    let pool: Vec<SquareClass> = class_pool(field).into_iter().take(7).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; rank as usize];
    loop {
        out.push(GwElement::from_terms(field, idx.iter().map(|&i| (pool[i], 1))));
        // next non-decreasing index tuple
        let mut k = idx.len();
        while k > 0 && idx[k - 1] == pool.len() - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        let v = idx[k - 1] + 1;
        for x in &mut idx[k - 1..] {
            *x = v;
        }
    }
    for i in 0..40 {
        let mut rng = case_rng(seed ^ 0xd15c, rank as usize * 1000 + i);
        let neg = random_effective(field, 1 + i % 2, &mut rng);
        let pos = random_effective(field, rank as usize + neg.rank() as usize, &mut rng);
        out.push(pos.try_sub(&neg).expect("same field"));
    }
    out
}

/// Which parity `e` satisfies `image = base^e` for every pair, if any.
fn fit_parity(pairs: &[(SquareClass, SquareClass)], one: SquareClass) -> (Option<u8>, bool) {
    let mut fits = [true, true];
    let mut determined = false;
    for &(base, image) in pairs {
        if base != one {
            determined = true;
        }
        fits[0] &= image == one;
        fits[1] &= image == base;
    }
    let e = match fits {
        [true, false] => Some(0),
        [false, true] => Some(1),
        // undetermined cells fit both; report the smaller
        [true, true] => Some(0),
        [false, false] => None,
    };
    (e, determined)
}

/// Brute-forces the exponent `E(n, r)` (mod 2) in
/// `disc(a_n(q)) = disc(q)^E` for `1 <= n <= max_n`, `0 <= r <= max_rank`,
/// under the plain and signed discriminant conventions, and compares with
/// `C(n + r - 1, n)` and `C(n + r - 1, n - 1)`.
pub fn probe_disc(field: BaseField, max_n: usize, max_rank: i64, seed: u64) -> Result<DiscProbeReport> {
    let ps = AStructure::new(field);
    let one = field.one();
    let ranks: Vec<i64> = (0..=max_rank).collect();
    let cells: Vec<Vec<DiscCell>> = ranks
        .par_iter()
        .map(|&r| -> Result<Vec<DiscCell>> {
            let samples = probe_samples(field, r, seed);
            let expansions = samples
                .iter()
                .map(|q| ps.expand(q, max_n))
                .collect::<Result<Vec<_>>>()?;
            Ok((1..=max_n)
                .map(|n| {
                    let plain: Vec<_> = samples
                        .iter()
                        .zip(&expansions)
                        .map(|(q, e)| (q.discriminant(), e.coeff(n).discriminant()))
                        .collect();
                    let signed: Vec<_> = samples
                        .iter()
                        .zip(&expansions)
                        .map(|(q, e)| (q.signed_discriminant(), e.coeff(n).signed_discriminant()))
                        .collect();
                    let (p, dp) = fit_parity(&plain, one);
                    let (s, ds) = fit_parity(&signed, one);
                    let n = n as i64;
                    DiscCell {
                        n: n as usize,
                        rank: r,
                        samples: samples.len(),
                        plain: p,
                        signed: s,
                        determined_plain: dp,
                        determined_signed: ds,
                        stated: gen_binomial(n + r - 1, n).rem_euclid(2) as u8,
                        candidate: gen_binomial(n + r - 1, n - 1).rem_euclid(2) as u8,
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let cells: Vec<DiscCell> = cells.into_iter().flatten().collect();
    let verdict = |name: &str, get: &dyn Fn(&DiscCell) -> (Option<u8>, bool)| {
        let consistent = cells.iter().all(|c| get(c).0.is_some());
        let matches = |target: &dyn Fn(&DiscCell) -> u8| {
            consistent && cells.iter().all(|c| !get(c).1 || get(c).0 == Some(target(c)))
        };
        ConventionVerdict {
            convention: name.to_string(),
            consistent,
            matches_stated: matches(&|c| c.stated),
            matches_candidate: matches(&|c| c.candidate),
        }
    };
    let verdicts = vec![
        verdict("plain", &|c| (c.plain, c.determined_plain)),
        verdict("signed", &|c| (c.signed, c.determined_signed)),
    ];
    Ok(DiscProbeReport { field, max_n, max_rank, cells, verdicts })
}

/// Exponent parities of a probe report as a map `(n, rank) -> E`.
pub fn exponent_table(report: &DiscProbeReport, convention: &str) -> BTreeMap<(usize, i64), Option<u8>> {
    report
        .cells
        .iter()
        .map(|c| ((c.n, c.rank), if convention == "signed" { c.signed } else { c.plain }))
        .collect()
}

/// Non-effectiveness note for `a_n(q)`, if it applies.
pub fn effectiveness_note(value: &GwElement) -> Option<String> {
    (!is_effective(value)).then(|| format!("{value} is not an effective element (no bilinear form has this class)"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::gw_equal;

    const Q: BaseField = BaseField::Rationals;

    fn g(terms: &[(i64, i64)]) -> GwElement {
        GwElement::from_int_terms(Q, terms.iter().copied()).unwrap()
    }

    #[test]
    fn generator_values() {
        let a2 = a_generator(Q, SquareClass(5), 2).unwrap();
        assert_eq!(a2, g(&[(2, 1), (5, 1), (10, -1)]));
        for n in 0..8 {
            assert_eq!(a_generator(Q, SquareClass(1), n).unwrap(), GwElement::one(Q));
        }
        let a3 = a_generator(Q, SquareClass(2), 3).unwrap();
        assert!(gw_equal(&a3, &g(&[(2, 1)])).unwrap());
        assert!(matches!(a_generator(Q, SquareClass(2), -1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn torsion_terms_over_q() {
        let t5 = torsion_term(Q, SquareClass(5));
        assert!(!gw_equal(&t5, &GwElement::zero(Q)).unwrap());
        assert!(gw_equal(&t5.scale(2), &GwElement::zero(Q)).unwrap());
        assert!(gw_equal(&torsion_term(Q, SquareClass(2)), &GwElement::zero(Q)).unwrap());
        assert!(gw_equal(&torsion_term(Q, SquareClass(-1)), &GwElement::zero(Q)).unwrap());
    }

    #[test]
    fn a_n_examples() {
        let h = GwElement::hyperbolic(Q);
        assert!(gw_equal(&a_n(&h, 2).unwrap(), &g(&[(1, 2), (-1, 1)])).unwrap());
        let c = g(&[(2, 1), (10, 1)]);
        assert!(gw_equal(&a_n(&c, 3).unwrap(), &c.scale(2)).unwrap());
        for n in 1..6 {
            assert!(a_n(&GwElement::zero(Q), n).unwrap().is_formally_zero());
        }
    }

    #[test]
    fn factorial_two_terms() {
        let q = g(&[(3, 1), (7, 1)]);
        let s = mcgarraghy_sym(&q, 2, SymVariant::Factorial).unwrap();
        assert_eq!(s, g(&[(2, 2), (21, 1)]));
        assert!(matches!(
            mcgarraghy_sym(&g(&[(3, -1)]), 2, SymVariant::Factorial),
            Err(Error::NotEffective(_))
        ));
        let f3 = BaseField::finite(3).unwrap();
        assert!(matches!(
            mcgarraghy_sym(&GwElement::one(f3), 2, SymVariant::Factorial),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn nonfactorial_generator() {
        for n in 0..6 {
            let s = mcgarraghy_sym(&g(&[(6, 1)]), n, SymVariant::NonFactorial).unwrap();
            assert_eq!(s, g(&[(if n % 2 == 0 { 1 } else { 6 }, 1)]));
        }
    }

    #[test]
    fn respects_maps() {
        for map in RING_MAPS {
            let rep = respects_check(map, Q, 7, 12, 5, false).unwrap();
            assert!(rep.pass, "{map}: {:?}", rep.failures);
            let bad = respects_check(map, Q, 7, 12, 5, true).unwrap();
            assert!(!bad.pass, "{map} with fault");
        }
        assert!(matches!(respects_check("signature", Q, 0, 1, 3, false), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn weak_composition_count() {
        let mut count = 0;
        weak_compositions(4, &mut vec![0; 3], 0, &mut |_| count += 1);
        assert_eq!(count, 15);
    }
}
