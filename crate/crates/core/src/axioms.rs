//! Randomized checks of the power-structure axioms and of the pre-lambda
//! axioms of the opposite structure.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::astructure::Witness;
use crate::error::Result;
use crate::power::{opposite_lambda, power_pow, ElemOf, PowerStructure};
use crate::ring::Ring;
use crate::sample::case_rng;
use crate::series::{self, Series};

/// Names of the checked properties, in report order.
pub const AXIOMS: [&str; 14] = [
    "f^0 = 1",
    "f^1 = f",
    "(fg)^r = f^r g^r",
    "f^(r+s) = f^r f^s",
    "f^(rs) = (f^r)^s",
    "(1+t)^m = 1 + mt + O(t^2)",
    "f(t^n)^m = g(t^n) for g = f^m",
    "finite generation",
    "b_0 = 1, b_1(r) = r",
    "b_n(r+s) = sum b_i(r) b_(n-i)(s)",
    "lambda_0 = 1, lambda_1(r) = r",
    "lambda_n(r+s) = sum lambda_i(r) lambda_(n-i)(s)",
    "lambda_n(0) = 0",
    "lambda_n(1) = 0 for n >= 2",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub checked: usize,
    pub failures: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub structure: String,
    pub seed: u64,
    pub cases: usize,
    pub order: usize,
    pub results: Vec<AxiomResult>,
    pub pass: bool,
}

impl AxiomReport {
    pub fn failed_axioms(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| !r.failures.is_empty())
            .map(|r| r.axiom.as_str())
            .collect()
    }
}

/// Runs `cases` seeded cases in parallel. Case `i` draws its inputs from
/// [`case_rng`]`(seed, i)`, so the report does not depend on scheduling.
/// Only the first witness per axiom is kept.
pub fn axiom_check<P, S>(ps: &P, sampler: S, seed: u64, cases: usize, order: usize) -> Result<AxiomReport>
where
    P: PowerStructure,
    S: Fn(&mut ChaCha8Rng) -> ElemOf<P> + Sync,
{
    let per_case: Vec<Vec<Option<Witness>>> = (0..cases)
        .into_par_iter()
        .map(|case| run_case(ps, &sampler, seed, case, order))
        .collect::<Result<_>>()?;
    let mut results: Vec<AxiomResult> = AXIOMS
        .iter()
        .map(|a| AxiomResult { axiom: a.to_string(), checked: cases, failures: Vec::new() })
        .collect();
    for outcome in per_case {
        for (res, w) in results.iter_mut().zip(outcome) {
            if let Some(w) = w {
                if res.failures.is_empty() {
                    res.failures.push(w);
                }
            }
        }
    }
    let pass = results.iter().all(|r| r.failures.is_empty());
    Ok(AxiomReport { structure: ps.name(), seed, cases, order, results, pass })
}

fn random_series<R: Ring, S: Fn(&mut ChaCha8Rng) -> R::Elem>(
    ring: &R,
    sampler: &S,
    rng: &mut ChaCha8Rng,
    order: usize,
) -> Series<R::Elem> {
    let mut c = vec![ring.one()];
    c.extend((1..=order).map(|_| sampler(rng)));
    Series::from_coeffs(c)
}

fn run_case<P, S>(ps: &P, sampler: &S, seed: u64, case: usize, order: usize) -> Result<Vec<Option<Witness>>>
where
    P: PowerStructure,
    S: Fn(&mut ChaCha8Rng) -> ElemOf<P>,
{
    let ring = ps.ring();
    let mut rng = case_rng(seed, case);
    let f = random_series(ring, sampler, &mut rng, order);
    let g = random_series(ring, sampler, &mut rng, order);
    let r = sampler(&mut rng);
    let s = sampler(&mut rng);
    let input = format!(
        "f = {}; g = {}; r = {}; s = {}",
        series::render(ring, &f),
        series::render(ring, &g),
        ring.render(&r),
        ring.render(&s)
    );
    let compare = |lhs: &Series<ElemOf<P>>, rhs: &Series<ElemOf<P>>| {
        series::first_difference(ring, lhs, rhs).map(|n| Witness {
            case,
            input: input.clone(),
            n,
            lhs: ring.render(lhs.coeff(n)),
            rhs: ring.render(rhs.coeff(n)),
        })
    };
    let pow = |f: &Series<ElemOf<P>>, r: &ElemOf<P>| power_pow(ps, f, r);
    let one = series::one(ring, order);
    let mut out = Vec::with_capacity(AXIOMS.len());

    out.push(compare(&pow(&f, &ring.zero())?, &one));
    out.push(compare(&pow(&f, &ring.one())?, &f));

    let fg = series::mul(ring, &f, &g);
    out.push(compare(&pow(&fg, &r)?, &series::mul(ring, &pow(&f, &r)?, &pow(&g, &r)?)));

    let fr = pow(&f, &r)?;
    let fs = pow(&f, &s)?;
    out.push(compare(&pow(&f, &ring.add(&r, &s))?, &series::mul(ring, &fr, &fs)));
    out.push(compare(&pow(&f, &ring.mul(&r, &s))?, &pow(&fr, &s)?));

    let one_plus_t = series::binomial_term(ring, &ring.one(), 1, order);
    let lin = pow(&one_plus_t, &r)?;
    let expected = series::binomial_term(ring, &r, 1, 1);
    out.push(compare(&lin.truncate(1), &expected));

    let n = 2 + case % 2;
    let sub_f = series::substitute_power(ring, &f, n, order);
    out.push(compare(&pow(&sub_f, &r)?, &series::substitute_power(ring, &fr, n, order)));

    let k = order / 2;
    out.push(compare(&pow(&f.truncate(k), &r)?, &fr.truncate(k)));

    let b_r = ps.expand(&r, order)?;
    out.push(compare(&b_r.truncate(1), &expected));
    let b_s = ps.expand(&s, order)?;
    out.push(compare(&ps.expand(&ring.add(&r, &s), order)?, &series::mul(ring, &b_r, &b_s)));

    let l_r = opposite_lambda(ps, &r, order)?;
    out.push(compare(&l_r.truncate(1), &expected));
    let l_s = opposite_lambda(ps, &s, order)?;
    out.push(compare(&opposite_lambda(ps, &ring.add(&r, &s), order)?, &series::mul(ring, &l_r, &l_s)));
    out.push(compare(&opposite_lambda(ps, &ring.zero(), order)?, &one));
    out.push(compare(&opposite_lambda(ps, &ring.one(), order)?, &one_plus_t));

    Ok(out)
}
