//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gwpower::astructure::{a_generator, a_n, probe_disc, AStructure};
use gwpower::axioms::axiom_check;
use gwpower::etale::{etale_sym, total_degree, EtaleField, EtaleSum};
use gwpower::field::{BaseField, SquareClass};
use gwpower::goettsche::{classical_series, goettsche_series, punctual_series, real_macdonald};
use gwpower::gram;
use gwpower::gw::{gw_equal, GwElement};
use gwpower::hilbert::{hilbert_symbol, relevant_places, Place};
use gwpower::power::{Binomial, Corrupted, PowerStructure};
use gwpower::sample::{case_rng, random_effective, random_nonzero, random_virtual};
use gwpower::variety::{chi_c, verify_conjecture, VarietyClass};
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

const Q: BaseField = BaseField::Rationals;
const R: BaseField = BaseField::Reals;
const SEED: u64 = 0xacce_97;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn cls(field: BaseField, a: i64) -> SquareClass {
    field.class_of_int(a).unwrap()
}

fn form(field: BaseField, terms: &[(i64, i64)]) -> GwElement {
    GwElement::from_int_terms(field, terms.iter().copied()).unwrap()
}

/// Binomial coefficient `C(top, k)` for any integer `top`, `k >= 0`.
fn binom(top: i128, k: i128) -> i128 {
    if k < 0 {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (top - i) / (i + 1);
    }
    acc
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    for alpha in [-1i64, 2, 3, 5, -2] {
        for n in 0..=10i64 {
            let t = binom(n as i128, 2) as i64;
            let expected = form(Q, &[(alpha.pow(n as u32), 1), (2, t), (alpha, t), (1, -t), (2 * alpha, -t)]);
            let got = a_generator(Q, cls(Q, alpha), n).map_err(|e| e.to_string())?;
            ensure(got == expected, || format!("alpha={alpha} n={n}: {got} vs {expected}"))?;
            let via_expand = a_n(&GwElement::class(Q, cls(Q, alpha)), n).map_err(|e| e.to_string())?;
            ensure(via_expand == expected, || format!("a_{n}(<{alpha}>) = {via_expand}"))?;
        }
        let remark = form(Q, &[(1, 1), (2, 1), (alpha, 1), (1, -1), (2 * alpha, -1)]);
        let a2 = a_n(&GwElement::class(Q, cls(Q, alpha)), 2).map_err(|e| e.to_string())?;
        ensure(a2 == remark, || format!("a_2(<{alpha}>) = {a2}, expected {remark}"))?;
    }
    within(start, Duration::from_secs(1))
}

/// The curve closed forms, built directly from integer binomials.
fn curve_closed_form(field: BaseField, g: i64, n: i64) -> GwElement {
    let h = form(field, &[(1, 1), (-1, 1)]);
    let top = binom(2 * g as i128 - 2, n as i128);
    if n % 2 == 1 {
        assert_eq!(top % 2, 0);
        return h.scale(-(top / 2) as i64);
    }
    let m = n / 2;
    let mut sum = 0i128;
    let mut diag = GwElement::zero(field);
    for i in 0..=m {
        let c = binom(g as i128, i as i128);
        sum += c;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        diag = diag.try_add(&form(field, &[(sign, c as i64)])).unwrap();
    }
    assert_eq!((top - sum) % 2, 0);
    diag.try_add(&h.scale(((top - sum) / 2) as i64)).unwrap()
}

fn criterion_2() -> Result<String, String> {
    let start = Instant::now();
    for field in [Q, R] {
        let ps = AStructure::new(field);
        for g in 0..=5i64 {
            let chi = form(field, &[(1, 1 - g), (-1, 1 - g)]);
            let series = ps.expand(&chi, 12).map_err(|e| e.to_string())?;
            for n in 0..=12 {
                let expected = curve_closed_form(field, g, n as i64);
                let got = series.coeff(n);
                ensure(gw_equal(got, &expected).unwrap(), || {
                    format!("{field} g={g} n={n}: {got} vs {expected}")
                })?;
            }
        }
    }
    within(start, Duration::from_secs(5))
}

/// Orbits of the swap on multisets `{i copies of p, n-i copies of q}`:
/// pairs `{i, n-i}` with `i != n-i` are free orbits, `i = n/2` is fixed.
fn quadratic_orbit_counts(n: usize) -> (i64, i64) {
    let mut free = 0;
    let mut fixed = 0;
    for i in 0..=n {
        match i.cmp(&(n - i)) {
            std::cmp::Ordering::Less => free += 1,
            std::cmp::Ordering::Equal => fixed += 1,
            std::cmp::Ordering::Greater => {}
        }
    }
    (free, fixed)
}

fn criterion_3() -> Result<String, String> {
    let start = Instant::now();
    for alpha in [2i64, 3, 5, -1, -2] {
        let l = EtaleField::from_generators(Q, &[cls(Q, alpha)]).map_err(|e| e.to_string())?;
        let trace = gram::trace_form(Q, &[cls(Q, alpha)]).map_err(|e| e.to_string())?;
        let trace_expected = form(Q, &[(2, 1), (2 * alpha, 1)]);
        ensure(gw_equal(&trace, &trace_expected).unwrap(), || format!("trace form of Q(sqrt {alpha}) = {trace}"))?;
        let single: EtaleSum = [(l.clone(), 1)].into_iter().collect();
        for n in 0..=10usize {
            let orbits = etale_sym(Q, &single, n).map_err(|e| e.to_string())?;
            let (free, fixed) = quadratic_orbit_counts(n);
            let mut expected = EtaleSum::new();
            if free > 0 {
                expected.insert(l.clone(), free);
            }
            if fixed > 0 {
                expected.insert(EtaleField::trivial(Q), fixed);
            }
            ensure(orbits == expected, || format!("alpha={alpha} n={n}: orbits {orbits:?}"))?;
            let chi = chi_c(&VarietyClass::from_etale_sum(Q, &orbits)).map_err(|e| e.to_string())?;
            let an = a_n(&trace_expected, n as i64).map_err(|e| e.to_string())?;
            ensure(gw_equal(&chi, &an).unwrap(), || format!("alpha={alpha} n={n}: {chi} vs a_n = {an}"))?;
            if n % 2 == 1 {
                let exact = trace_expected.scale((n as i64 + 1) / 2);
                ensure(chi == exact, || format!("alpha={alpha} n={n}: {chi} is not {exact} term for term"))?;
            }
        }
    }
    Ok(format!("{:.2?}", start.elapsed()))
}

fn criterion_4() -> Result<String, String> {
    let gens = [cls(Q, 2), cls(Q, 3)];
    let l = EtaleField::from_generators(Q, &gens).map_err(|e| e.to_string())?;
    let single: EtaleSum = [(l, 1)].into_iter().collect();
    let orbits = etale_sym(Q, &single, 2).map_err(|e| e.to_string())?;
    let degree = total_degree(&orbits);
    ensure(degree == 10 && binom(5, 2) == 10, || format!("total degree {degree}"))?;
    // each orbit contributes the trace form of its fixed field
    let mut chi = GwElement::zero(Q);
    for (field, k) in &orbits {
        let t = gram::trace_form(Q, &field.generators()).map_err(|e| e.to_string())?;
        chi = chi.try_add(&t.scale(*k)).unwrap();
    }
    let q = form(Q, &[(1, 1), (2, 1), (3, 1), (6, 1)]);
    let a2 = a_n(&q, 2).map_err(|e| e.to_string())?;
    ensure(gw_equal(&chi, &a2).unwrap(), || format!("{chi} vs a_2 = {a2}"))?;
    let names: Vec<String> = orbits.iter().map(|(f, k)| format!("{k}*{f}")).collect();
    Ok(format!("orbits {}", names.join(" + ")))
}

fn criterion_5() -> Result<String, String> {
    let h = form(Q, &[(1, 1), (-1, 1)]);
    let series = AStructure::new(Q).expand(&h, 12).map_err(|e| e.to_string())?;
    for n in 0..=12i64 {
        let expected = if n % 2 == 0 {
            GwElement::one(Q).try_add(&h.scale(n / 2)).unwrap()
        } else {
            h.scale((n + 1) / 2)
        };
        let got = series.coeff(n as usize);
        ensure(gw_equal(got, &expected).unwrap(), || format!("n={n}: {got} vs {expected}"))?;
        let from_class = chi_c(&VarietyClass::projective(Q, n as u32)).map_err(|e| e.to_string())?;
        ensure(gw_equal(&from_class, &expected).unwrap(), || format!("chi_c(P^{n}) = {from_class}"))?;
    }
    for m in 0..=4 {
        let rep = verify_conjecture(&VarietyClass::projective(Q, m), 6).map_err(|e| e.to_string())?;
        ensure(rep.pass && rep.rows.iter().all(|r| r.equal == Some(true)), || format!("P^{m}: {:?}", rep.rows))?;
    }
    Ok(String::new())
}

fn criterion_6() -> Result<String, String> {
    for case in 0..100 {
        let mut rng = case_rng(SEED, case);
        let rank = rng.random_range(0..=6usize);
        let q = random_effective(Q, rank, &mut rng);
        check_rank_law(&q)?;
        let v = random_virtual(Q, 4, 3, &mut rng);
        check_rank_law(&v)?;
    }
    Ok("100 effective + 100 virtual".into())
}

fn check_rank_law(q: &GwElement) -> Result<(), String> {
    let series = AStructure::new(Q).expand(q, 8).map_err(|e| e.to_string())?;
    let r = q.rank() as i128;
    for n in 0..=8 {
        let expected = binom(r + n as i128 - 1, n as i128);
        let got = series.coeff(n).rank() as i128;
        ensure(got == expected, || format!("{q}: rank a_{n} = {got}, expected {expected}"))?;
    }
    Ok(())
}

/// `(1-t)^{-s} (1-t^2)^{-(r-s)/2}` by multiplying truncated series.
fn two_factor(r: i64, s: i64, order: usize) -> Vec<i128> {
    let m = ((r - s) / 2) as i128;
    let a: Vec<i128> = (0..=order).map(|i| binom(s as i128 + i as i128 - 1, i as i128)).collect();
    let mut b = vec![0i128; order + 1];
    for j in 0..=order / 2 {
        b[2 * j] = binom(m + j as i128 - 1, j as i128);
    }
    (0..=order).map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum()).collect()
}

fn criterion_7() -> Result<String, String> {
    let ps = AStructure::new(R);
    for case in 0..50 {
        let mut rng = case_rng(SEED ^ 7, case);
        let q = random_virtual(R, 2, 5, &mut rng);
        let (rank, sig) = (q.rank(), q.signature().map_err(|e| e.to_string())?);
        let series = ps.expand(&q, 12).map_err(|e| e.to_string())?;
        let rm = real_macdonald(rank, sig, 12).map_err(|e| e.to_string())?;
        let oracle = two_factor(rank, sig, 12);
        for n in 0..=12 {
            let got = series.coeff(n).signature().unwrap();
            ensure(got == rm[n] && got as i128 == oracle[n], || {
                format!("{q} n={n}: signature {got}, real_macdonald {}, oracle {}", rm[n], oracle[n])
            })?;
        }
    }
    Ok(String::new())
}

fn criterion_8() -> Result<String, String> {
    let start = Instant::now();
    let z = |rng: &mut ChaCha8Rng| rng.random_range(-2i64..=2);
    let rep = axiom_check(&Binomial, z, SEED, 500, 6).map_err(|e| e.to_string())?;
    ensure(rep.pass, || format!("binomial: {:?}", rep.failed_axioms()))?;
    let bad = axiom_check(&Corrupted { inner: Binomial }, z, SEED, 500, 6).map_err(|e| e.to_string())?;
    ensure(!bad.pass, || "corrupted binomial structure passed".into())?;
    for field in [Q, R, BaseField::finite(3).unwrap()] {
        let sampler = move |rng: &mut ChaCha8Rng| random_virtual(field, 2, 2, rng);
        let ps = AStructure::new(field);
        let rep = axiom_check(&ps, sampler, SEED, 500, 6).map_err(|e| e.to_string())?;
        ensure(rep.pass, || format!("a_* over {field}: {:?}", rep.failed_axioms()))?;
        let bad = axiom_check(&Corrupted { inner: ps }, sampler, SEED, 100, 6).map_err(|e| e.to_string())?;
        ensure(!bad.pass, || format!("corrupted a_* over {field} passed"))?;
    }
    Ok(format!("{:.2?}", start.elapsed()))
}

fn mod_pow(b: i128, mut e: i128, m: i128) -> i128 {
    let mut acc = 1;
    let mut b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn euler_criterion(u: i64, p: i64) -> i64 {
    if mod_pow(u as i128, (p as i128 - 1) / 2, p as i128) == 1 {
        1
    } else {
        -1
    }
}

fn split_p(mut a: i64, p: i64) -> (i64, i64) {
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    (v, a)
}

/// `(a,b)_p = (-1)^{v w (p-1)/2} (u/p)^w (u'/p)^v` for odd `p`.
fn odd_hilbert(a: i64, b: i64, p: i64) -> i64 {
    let (v, u) = split_p(a, p);
    let (w, u2) = split_p(b, p);
    let mut s = if (v * w * ((p - 1) / 2)) % 2 == 0 { 1 } else { -1 };
    if w % 2 == 1 {
        s *= euler_criterion(u, p);
    }
    if v % 2 == 1 {
        s *= euler_criterion(u2, p);
    }
    s
}

fn criterion_9() -> Result<String, String> {
    let mut compared = 0;
    for case in 0..200 {
        let mut rng = case_rng(SEED ^ 9, case);
        let a = random_nonzero(500, &mut rng);
        let b = random_nonzero(500, &mut rng);
        let places = relevant_places([a, b]);
        let mut product = 1i64;
        for &v in &places {
            let s = hilbert_symbol(a, b, v).map_err(|e| e.to_string())?;
            product *= s as i64;
            if let Place::Prime(p) = v {
                if p != 2 {
                    let o = odd_hilbert(a, b, p as i64);
                    ensure(s as i64 == o, || format!("({a},{b})_{p} = {s}, oracle {o}"))?;
                    compared += 1;
                }
            }
        }
        ensure(product == 1, || format!("product over {places:?} for ({a},{b}) is {product}"))?;
    }
    Ok(format!("{compared} odd-prime symbols compared"))
}

/// `prod_{m>=1} (1-t^m)^{-e}` by repeated multiplication with `(1-t^m)^{-1}`.
fn product_oracle(e: i64, order: usize) -> Vec<i128> {
    let mut f = vec![0i128; order + 1];
    f[0] = 1;
    for m in 1..=order {
        let factor: Vec<i128> = (0..=order)
            .map(|i| if i % m == 0 { binom(e as i128 + (i / m) as i128 - 1, (i / m) as i128) } else { 0 })
            .collect();
        f = (0..=order).map(|n| (0..=n).map(|i| f[i] * factor[n - i]).sum()).collect();
    }
    f
}

fn partitions(n: usize) -> i128 {
    fn count(n: usize, max: usize) -> i128 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| count(n - k, k)).sum()
    }
    count(n, n)
}

fn criterion_10() -> Result<String, String> {
    let start = Instant::now();
    for e in [3i64, 9, 24] {
        let classical = classical_series(e, 10);
        let oracle = product_oracle(e, 10);
        ensure(classical.iter().map(|&c| c as i128).eq(oracle.iter().copied()), || {
            format!("classical_series({e}) = {classical:?}, product {oracle:?}")
        })?;
        let mut rng = case_rng(SEED ^ 10, e as usize);
        let hyperbolic_part = form(Q, &[(1, e / 2), (-1, e / 2)]);
        let chis = [
            hyperbolic_part.try_add(&form(Q, &[(1, e % 2)])).unwrap(),
            random_effective(Q, e as usize, &mut rng),
        ];
        for chi in chis {
            let g = goettsche_series(&chi, 10).map_err(|e| e.to_string())?;
            for n in 0..=10 {
                let r = g.coeff(n).rank();
                ensure(r == classical[n], || format!("chi={chi} n={n}: rank {r} vs {}", classical[n]))?;
            }
        }
    }
    let p2 = chi_c(&VarietyClass::projective(Q, 2)).map_err(|e| e.to_string())?;
    let g = goettsche_series(&p2, 10).map_err(|e| e.to_string())?;
    let three = classical_series(3, 10);
    ensure((0..=10).all(|n| g.coeff(n).rank() == three[n]), || "P^2 ranks".into())?;
    let punctual = punctual_series(Q, 10);
    for m in 0..=10 {
        let r = punctual.coeff(m).rank() as i128;
        ensure(r == partitions(m), || format!("punctual t^{m}: rank {r}, p({m}) = {}", partitions(m)))?;
    }
    within(start, Duration::from_secs(5))
}

fn criterion_11() -> Result<String, String> {
    let rep = probe_disc(Q, 6, 4, SEED).map_err(|e| e.to_string())?;
    ensure(rep.identified(), || format!("no convention is consistent: {:?}", rep.verdicts))?;
    let summary: Vec<String> = rep
        .verdicts
        .iter()
        .map(|v| {
            format!(
                "{}: consistent={} matches C(n+r-1,n)={} matches C(n+r-1,n-1)={}",
                v.convention, v.consistent, v.matches_stated, v.matches_candidate
            )
        })
        .collect();
    Ok(summary.join("; "))
}

fn criterion_12() -> Result<String, String> {
    let ps = AStructure::new(Q);
    for case in 0..200 {
        let mut rng = case_rng(SEED ^ 12, case);
        let base = random_virtual(Q, 2, 2, &mut rng);
        let (a, b) = loop {
            let a = random_nonzero(12, &mut rng);
            let b = random_nonzero(12, &mut rng);
            if a + b != 0 {
                break (a, b);
            }
        };
        let lhs = base.try_add(&form(Q, &[(a, 1), (b, 1)])).unwrap();
        let rhs = base.try_add(&form(Q, &[(a + b, 1), (a * b * (a + b), 1)])).unwrap();
        ensure(gw_equal(&lhs, &rhs).unwrap(), || format!("chain relation fails for {a}, {b}"))?;
        let sl = ps.expand(&lhs, 6).map_err(|e| e.to_string())?;
        let sr = ps.expand(&rhs, 6).map_err(|e| e.to_string())?;
        for n in 0..=6 {
            ensure(gw_equal(sl.coeff(n), sr.coeff(n)).unwrap(), || {
                format!("n={n}: a_n({lhs}) = {} but a_n({rhs}) = {}", sl.coeff(n), sr.coeff(n))
            })?;
        }
    }
    Ok(String::new())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 12] = [
        ("generator formula and a_2 of one class", criterion_1),
        ("curve closed forms over Q and R", criterion_2),
        ("quadratic etale algebras", criterion_3),
        ("biquadratic Sym^2", criterion_4),
        ("projective spaces", criterion_5),
        ("rank law", criterion_6),
        ("real signature law", criterion_7),
        ("power-structure axiom suite", criterion_8),
        ("Hilbert symbol product formula", criterion_9),
        ("Goettsche and punctual series", criterion_10),
        ("discriminant exponent probe", criterion_11),
        ("representation independence", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) if detail.is_empty() => println!("[PASS] {:>2} {name}", i + 1),
            Ok(detail) => println!("[PASS] {:>2} {name} ({detail})", i + 1),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
