//! Seeded random elements used by the property runners.

use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{BaseField, SquareClass};
use crate::gw::GwElement;

/// Deterministic per-case generator: case `i` under `seed` always sees the
/// same stream, whatever thread evaluates it.
pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

/// Small square classes of `field` for sampling. Over `Q` the pool is
/// built from the primes 2, 3, 5, 7 so that products stay small.
pub fn class_pool(field: BaseField) -> Vec<SquareClass> {
    match field {
        BaseField::Rationals => [1, -1, 2, -2, 3, -3, 5, -5, 6, 7, 10, -14, 15, 21]
            .iter()
            .map(|&a| SquareClass(a))
            .collect(),
        _ => field.all_classes().expect("finite square class group"),
    }
}

pub fn random_class(field: BaseField, rng: &mut ChaCha8Rng) -> SquareClass {
    let pool = class_pool(field);
    pool[rng.random_range(0..pool.len())]
}

/// A random effective diagonal form of rank exactly `rank`.
pub fn random_effective(field: BaseField, rank: usize, rng: &mut ChaCha8Rng) -> GwElement {
    GwElement::from_terms(field, (0..rank).map(|_| (random_class(field, rng), 1)))
}

/// A random virtual form with at most `max_terms` terms and coefficients in
/// `-max_coeff..=max_coeff`.
pub fn random_virtual(field: BaseField, max_terms: usize, max_coeff: i64, rng: &mut ChaCha8Rng) -> GwElement {
    let k = rng.random_range(0..=max_terms);
    GwElement::from_terms(
        field,
        (0..k).map(|_| (random_class(field, rng), rng.random_range(-max_coeff..=max_coeff))),
    )
}

/// A random nonzero integer with `|a| <= bound`.
pub fn random_nonzero(bound: i64, rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let a = rng.random_range(-bound..=bound);
        if a != 0 {
            return a;
        }
    }
}
