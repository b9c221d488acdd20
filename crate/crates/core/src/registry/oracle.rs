//! Exact big-integer referee for the streaming evaluator.
//!
//! Every binomial and Lucas value is built exactly from its integer
//! recurrence; nothing here uses valuations, Lucas' theorem or fast doubling.
//! [`oracle_eval`] forms the whole sum `sum t_k num^k den^(K-k)` as one
//! integer. [`oracle_eval_batch`] shares the exact sequences across many
//! moduli: each exact value is reduced once per group of moduli (whose
//! product fits a `u64`) and the sum is then formed by Horner's rule in the
//! target modulus, which is the same integer reduced term by term.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::lucas::LucasParams;
use crate::modarith::{Modulus, PrimePower, Residue};

use super::{CongruenceCase, Kernel, ModulusKind, RegistryError, SumSpec, Weight};

fn central_exact(top: u64) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(top as usize + 1);
    let mut c = BigUint::one();
    for k in 0..=top {
        out.push(c.clone());
        c = c * (2 * (2 * k + 1)) / (k + 1);
    }
    out
}

fn catalan_exact(top: u64) -> Vec<BigUint> {
    central_exact(top)
        .into_iter()
        .enumerate()
        .map(|(k, c)| c / (k as u64 + 1))
        .collect()
}

fn six_three_exact(top: u64) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(top as usize + 1);
    let mut c = BigUint::one();
    for k in 0..=top {
        out.push(c.clone());
        let up: BigUint = (6 * k + 1..=6 * k + 6).map(BigUint::from).product();
        let down: BigUint = (3 * k + 1..=3 * k + 3).map(BigUint::from).product();
        c = c * up / (&down * &down);
    }
    out
}

fn pm1_exact(p: u64) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(p as usize);
    let mut c = BigUint::one();
    for k in 0..p {
        out.push(c.clone());
        c = c * (p - 1 - k) / (k + 1);
    }
    out
}

/// `u_0, ..., u_{len-1}` exactly.
fn lucas_u_exact(params: LucasParams, len: usize) -> Vec<BigInt> {
    let (a, b) = (BigInt::from(params.a), BigInt::from(params.b));
    let mut out = Vec::with_capacity(len);
    let (mut u0, mut u1) = (BigInt::zero(), BigInt::one());
    for _ in 0..len {
        out.push(u0.clone());
        let next = &a * &u1 - &b * &u0;
        u0 = std::mem::replace(&mut u1, next);
    }
    out
}

fn powers_exact(x: i64, len: usize) -> Vec<BigInt> {
    let base = BigInt::from(x);
    let mut out = Vec::with_capacity(len);
    let mut acc = BigInt::one();
    for _ in 0..len {
        out.push(acc.clone());
        acc *= &base;
    }
    out
}

fn exact_weight(weight: Weight, top: u64, p: u64) -> Vec<BigInt> {
    let len = top as usize + 1;
    let from_u = |params: LucasParams, v: bool| -> Vec<BigInt> {
        let u = lucas_u_exact(params, len + 1);
        if !v {
            return u[..len].to_vec();
        }
        // v_k = 2u_{k+1} - A u_k
        let a = BigInt::from(params.a);
        (0..len).map(|k| BigInt::from(2) * &u[k + 1] - &a * &u[k]).collect()
    };
    match weight {
        Weight::One => vec![BigInt::one(); len],
        Weight::U(params) => from_u(params, false),
        Weight::V(params) => from_u(params, true),
        Weight::Char3 => from_u(LucasParams::CHAR3, false),
        Weight::Lemma31 { x } => {
            let e = if ((p - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
            powers_exact(x, len)
                .into_iter()
                .zip(powers_exact(1 - x, len))
                .map(|(a, b)| a - b * e)
                .collect()
        }
    }
}

fn exact_kernel(kernel: Kernel, top: u64, p: u64) -> Vec<BigUint> {
    match kernel {
        Kernel::Central { h } => central_exact(top).into_iter().map(|c| c.pow(h)).collect(),
        Kernel::Catalan => catalan_exact(top),
        Kernel::CentralPm1 => pm1_exact(p)
            .into_iter()
            .zip(central_exact(top))
            .map(|(b, c)| b * &c * &c)
            .collect(),
        Kernel::SixThree { h } => six_three_exact(top).into_iter().map(|c| c.pow(h)).collect(),
    }
}

fn finish(s_mod: u64, spec: &SumSpec, m: Modulus, top: u64) -> Residue {
    let inv_den = m.inv(m.reduce_i64(spec.den)).expect("checked by SumSpec::check");
    m.residue(m.mul(s_mod, m.pow(inv_den, top)))
}

fn oracle_sum(spec: &SumSpec, kind: ModulusKind, pp: PrimePower) -> Result<Residue, RegistryError> {
    spec.check(kind, pp)?;
    let m = kind.comparison_modulus(pp);
    let top = spec.top(kind, pp);
    let w = exact_weight(spec.weight, top, pp.p());
    let c = exact_kernel(spec.kernel, top, pp.p());
    let (num, den) = (BigInt::from(spec.num), BigInt::from(spec.den));
    let mut s = BigInt::zero();
    let mut num_k = BigInt::one();
    for k in 0..=top as usize {
        let mut t = &w[k] * BigInt::from_biguint(Sign::Plus, c[k].clone()) * &num_k;
        if spec.k_factor {
            t *= k;
        }
        s = s * &den + t;
        num_k *= &num;
    }
    let r = s.mod_floor(&BigInt::from(m.get())).to_u64().expect("reduced");
    Ok(finish(r, spec, m, top))
}

/// The left-hand sum of `case` at `pp` computed with exact integers.
/// Intended for small moduli; cost grows quadratically in the range.
pub fn oracle_eval(case: &CongruenceCase, pp: PrimePower) -> Result<Residue, RegistryError> {
    oracle_sum(&case.sum, case.kind, pp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Seq {
    Central,
    Catalan,
    SixThree,
    LucasU(LucasParams),
    Power(i64),
}

/// Exact value as sign and base-2^32 digits.
struct Exact {
    negative: bool,
    digits: Vec<u32>,
}

impl Exact {
    fn from_big(v: &BigInt) -> Self {
        Exact {
            negative: v.is_negative(),
            digits: v.magnitude().to_u32_digits(),
        }
    }
}

fn sequences_of(spec: &SumSpec, top: u64) -> Vec<(Seq, usize)> {
    let len = top as usize + 1;
    let mut out = Vec::new();
    match spec.weight {
        Weight::One => {}
        Weight::U(params) | Weight::V(params) => out.push((Seq::LucasU(params), len + 1)),
        Weight::Char3 => out.push((Seq::LucasU(LucasParams::CHAR3), len + 1)),
        Weight::Lemma31 { x } => {
            out.push((Seq::Power(x), len));
            out.push((Seq::Power(1 - x), len));
        }
    }
    out.push((
        match spec.kernel {
            Kernel::Central { .. } => Seq::Central,
            Kernel::Catalan => Seq::Catalan,
            Kernel::SixThree { .. } => Seq::SixThree,
            Kernel::CentralPm1 => unreachable!("handled by the single-pair oracle"),
        },
        len,
    ));
    out
}

fn build_exact(seq: Seq, len: usize) -> Vec<Exact> {
    let top = len as u64 - 1;
    let unsigned = |v: Vec<BigUint>| {
        v.into_iter()
            .map(|x| Exact {
                negative: false,
                digits: x.to_u32_digits(),
            })
            .collect()
    };
    match seq {
        Seq::Central => unsigned(central_exact(top)),
        Seq::Catalan => unsigned(catalan_exact(top)),
        Seq::SixThree => unsigned(six_three_exact(top)),
        Seq::LucasU(params) => lucas_u_exact(params, len).iter().map(Exact::from_big).collect(),
        Seq::Power(x) => powers_exact(x, len).iter().map(Exact::from_big).collect(),
    }
}

/// Reduces exact values modulo `big`, a product of target moduli.
struct RadixReducer {
    big: u64,
    pow32: Vec<u64>,
}

impl RadixReducer {
    fn new(big: u64, digits: usize) -> Self {
        let mut pow32 = Vec::with_capacity(digits.max(1));
        let mut x = 1u128 % big as u128;
        for _ in 0..digits.max(1) {
            pow32.push(x as u64);
            x = (x << 32) % big as u128;
        }
        RadixReducer { big, pow32 }
    }

    fn reduce(&self, v: &Exact) -> u64 {
        debug_assert!(v.digits.len() < 1 << 30);
        let acc: u128 = v
            .digits
            .iter()
            .zip(&self.pow32)
            .map(|(&d, &w)| d as u128 * w as u128)
            .sum();
        let r = (acc % self.big as u128) as u64;
        if v.negative && r != 0 {
            self.big - r
        } else {
            r
        }
    }
}

/// Horner evaluation in `m` from residues of the exact sequences.
fn horner(spec: &SumSpec, kind: ModulusKind, pp: PrimePower, res: &HashMap<Seq, Vec<u64>>) -> Residue {
    let m = kind.comparison_modulus(pp);
    let top = spec.top(kind, pp);
    let (num, den) = (m.reduce_i64(spec.num), m.reduce_i64(spec.den));
    let kernel = match spec.kernel {
        Kernel::Central { h } => (&res[&Seq::Central], h),
        Kernel::Catalan => (&res[&Seq::Catalan], 1),
        Kernel::SixThree { h } => (&res[&Seq::SixThree], h),
        Kernel::CentralPm1 => unreachable!(),
    };
    let e = if ((pp.p() - 1) / 2).is_multiple_of(2) { 1 } else { m.get() - 1 };
    let weight = |k: usize| -> u64 {
        match spec.weight {
            Weight::One => 1 % m.get(),
            Weight::U(params) => res[&Seq::LucasU(params)][k],
            Weight::Char3 => res[&Seq::LucasU(LucasParams::CHAR3)][k],
            Weight::V(params) => {
                let u = &res[&Seq::LucasU(params)];
                m.sub(m.mul(2, u[k + 1]), m.mul(m.reduce_i64(params.a), u[k]))
            }
            Weight::Lemma31 { x } => m.sub(res[&Seq::Power(x)][k], m.mul(e, res[&Seq::Power(1 - x)][k])),
        }
    };
    let (mut s, mut num_k) = (0u64, 1 % m.get());
    for k in 0..=top as usize {
        let mut t = m.mul(weight(k), m.pow(kernel.0[k], kernel.1 as u64));
        if spec.k_factor {
            t = m.mul(t, m.reduce_u64(k as u64));
        }
        s = m.add(m.mul(s, den), m.mul(t, num_k));
        num_k = m.mul(num_k, num);
    }
    finish(s, spec, m, top)
}

/// [`oracle_eval`] for many `(case index, prime power)` pairs at once, in the
/// order given; `jobs` worker threads (0 picks a default).
pub fn oracle_eval_batch(
    cases: &[CongruenceCase],
    pairs: &[(usize, PrimePower)],
    jobs: usize,
) -> Vec<Result<Residue, RegistryError>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| batch(cases, pairs))
}

fn batch(cases: &[CongruenceCase], pairs: &[(usize, PrimePower)]) -> Vec<Result<Residue, RegistryError>> {
    let mut out: Vec<Option<Result<Residue, RegistryError>>> = vec![None; pairs.len()];
    // modulus -> pair indices, and per modulus the sequence lengths it needs
    let mut by_modulus: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut need: HashMap<u64, HashMap<Seq, usize>> = HashMap::new();
    let mut global: HashMap<Seq, usize> = HashMap::new();
    for (i, &(c, pp)) in pairs.iter().enumerate() {
        let case = &cases[c];
        if let Err(e) = case.sum.check(case.kind, pp) {
            out[i] = Some(Err(e));
            continue;
        }
        if case.sum.kernel == Kernel::CentralPm1 {
            out[i] = Some(oracle_eval(case, pp));
            continue;
        }
        let q = case.kind.comparison_modulus(pp).get();
        by_modulus.entry(q).or_default().push(i);
        for (seq, len) in sequences_of(&case.sum, case.sum.top(case.kind, pp)) {
            let n = need.entry(q).or_default().entry(seq).or_insert(0);
            *n = (*n).max(len);
            let g = global.entry(seq).or_insert(0);
            *g = (*g).max(len);
        }
    }
    let exact: HashMap<Seq, Vec<Exact>> = global
        .into_par_iter()
        .map(|(seq, len)| (seq, build_exact(seq, len)))
        .collect();

    // greedy groups of moduli whose product fits in a u64
    let mut moduli: Vec<u64> = by_modulus.keys().copied().collect();
    moduli.sort_unstable();
    let mut groups: Vec<Vec<u64>> = Vec::new();
    let mut product = 1u64;
    for q in moduli {
        match product.checked_mul(q) {
            Some(x) if !groups.is_empty() => {
                product = x;
                groups.last_mut().expect("nonempty").push(q);
            }
            _ => {
                product = q;
                groups.push(vec![q]);
            }
        }
    }

    let results: Vec<(usize, Result<Residue, RegistryError>)> = groups
        .par_iter()
        .flat_map_iter(|group| {
            let big: u64 = group.iter().product();
            let mut group_need: HashMap<Seq, usize> = HashMap::new();
            for q in group {
                for (&seq, &len) in &need[q] {
                    let n = group_need.entry(seq).or_insert(0);
                    *n = (*n).max(len);
                }
            }
            let digits = group_need
                .iter()
                .flat_map(|(seq, &len)| exact[seq][..len].iter().map(|v| v.digits.len()))
                .max()
                .unwrap_or(1);
            let reducer = RadixReducer::new(big, digits);
            let reduced: HashMap<Seq, Vec<u64>> = group_need
                .iter()
                .map(|(&seq, &len)| (seq, exact[&seq][..len].iter().map(|v| reducer.reduce(v)).collect()))
                .collect();
            let mut local = Vec::new();
            for &q in group {
                let res: HashMap<Seq, Vec<u64>> = need[&q]
                    .iter()
                    .map(|(&seq, &len)| (seq, reduced[&seq][..len].iter().map(|r| r % q).collect()))
                    .collect();
                for &i in &by_modulus[&q] {
                    let (c, pp) = pairs[i];
                    let case = &cases[c];
                    local.push((i, Ok(horner(&case.sum, case.kind, pp, &res))));
                }
            }
            local
        })
        .collect();
    for (i, r) in results {
        out[i] = Some(r);
    }
    out.into_iter().map(|r| r.expect("every pair evaluated")).collect()
}
