//! Random admissible instances of the parametric families, for property tests.

use rand::Rng;

use super::catalogue;
use super::CongruenceCase;

pub use catalogue::{t11_cases, t12_cases, t13_cases, t14_case, t21_cases};

fn nonzero(rng: &mut impl Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// `count` random `(A, m, h)` triples, both congruences each.
pub fn random_t11(rng: &mut impl Rng, count: usize) -> Vec<CongruenceCase> {
    (0..count)
        .flat_map(|_| t11_cases(rng.gen_range(-9..=9), nonzero(rng, 6), rng.gen_range(1..=3)))
        .collect()
}

/// `count` random `(A, B, m, h)` with `A^2 - 4B != 0`.
pub fn random_t21(rng: &mut impl Rng, count: usize) -> Vec<CongruenceCase> {
    (0..count)
        .flat_map(|_| {
            let (a, b) = loop {
                let (a, b) = (rng.gen_range(-9..=9), nonzero(rng, 9));
                if a * a != 4 * b {
                    break (a, b);
                }
            };
            t21_cases(a, b, nonzero(rng, 9), rng.gen_range(1..=3))
        })
        .collect()
}

/// `count` random `(A, B, m)` triples.
pub fn random_t13(rng: &mut impl Rng, count: usize) -> Vec<CongruenceCase> {
    (0..count)
        .flat_map(|_| t13_cases(rng.gen_range(-9..=9), rng.gen_range(-9..=9), nonzero(rng, 20)))
        .collect()
}

/// `count` random `(A, B)` pairs, all four congruences each.
pub fn random_t12(rng: &mut impl Rng, count: usize) -> Vec<CongruenceCase> {
    (0..count)
        .flat_map(|_| {
            let (a, b) = (nonzero(rng, 9), nonzero(rng, 9));
            t12_cases(a, b, &format!("({a},{b})"))
        })
        .collect()
}

/// `count` random `(A, B)` pairs.
pub fn random_t14(rng: &mut impl Rng, count: usize) -> Vec<CongruenceCase> {
    (0..count)
        .map(|_| {
            let (a, b) = (nonzero(rng, 9), nonzero(rng, 9));
            t14_case(&format!("T1.4({a},{b})"), a, b)
        })
        .collect()
}
