//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Conjecture counterexamples are findings, not harness failures; the process
//! exits non-zero only when a theorem check, the oracle, a spot value, a
//! property suite, determinism, or mutation sanity fails, or when the set of
//! conjecture counterexamples differs from the documented one.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use congruence_lab::binomial::{binom_vp, half_binom_stream};
use congruence_lab::lucas::{delta_reduction, fib_lucas_half, half_index_values, lucas_pair, FibLucasHalf, LucasParams};
use congruence_lab::modarith::{is_prime, legendre, primes_in};
use congruence_lab::quadratic::{cornacchia, sqrt_mod_p, sqrt_mod_p2};
use congruence_lab::registry::{
    eval_rhs, oracle_eval_batch, thm13_reduction_check, EvalContext, Kernel, Range, Weight,
};
use congruence_lab::series::euler_product;
use congruence_lab::sweep::{plan_pairs, run_pairs, CaseClass, SweepPlan};
use congruence_lab::{lookup, registry_catalogue, Modulus, ModulusKind, PrimePower, Status, VerificationRecord};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Counterexamples to the printed conjectures, analysed in the decisions ledger.
const DOCUMENTED_FINDINGS: &[&str] = &["Conj5.2i-ksum"];

struct Outcome {
    pass: bool,
    /// failure that is a documented finding rather than a defect
    expected: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, expected: false, detail }
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get()).max(2)
}

fn pp(p: u64, a: u32) -> PrimePower {
    PrimePower::new(p, a).unwrap()
}

/// The three sub-sweeps of the soundness criterion.
fn soundness_plans(jobs: usize) -> Vec<SweepPlan> {
    let base = SweepPlan {
        class: CaseClass::Theorems,
        jobs,
        ..SweepPlan::default()
    };
    vec![
        SweepPlan {
            kinds: Some(vec![ModulusKind::ModP]),
            prime_max: 9999,
            ..base.clone()
        },
        SweepPlan {
            kinds: Some(vec![ModulusKind::ModP2]),
            prime_max: 1999,
            ..base.clone()
        },
        SweepPlan {
            kinds: Some(vec![ModulusKind::ModPa]),
            prime_max: 99_999,
            exponents: vec![1, 2, 3],
            pp_cap: 99_999,
            ..base
        },
    ]
}

fn soundness_records(jobs: usize) -> Vec<VerificationRecord> {
    soundness_plans(jobs)
        .iter()
        .flat_map(|plan| run_pairs(&plan_pairs(plan).unwrap(), plan.jobs, false))
        .collect()
}

fn criterion1(records: &[VerificationRecord]) -> Outcome {
    let fails: Vec<_> = records.iter().filter(|r| r.status == Status::Fail).collect();
    let pass = records.iter().filter(|r| r.status == Status::Pass).count();
    let mut detail = format!("{} records, {pass} pass, {} fail", records.len(), fails.len());
    for r in fails.iter().take(5) {
        detail += &format!("; {} at {}^{}", r.case_id, r.p, r.a);
    }
    Outcome::new(fails.is_empty() && pass > 0, detail)
}

fn criterion2() -> Outcome {
    let cat = registry_catalogue();
    let mut pairs: Vec<(usize, PrimePower)> = Vec::new();
    for (i, case) in cat.iter().enumerate() {
        for p in primes_in(3, 9999) {
            let exps: &[u32] = if case.kind == ModulusKind::ModPa { &[1, 2, 3] } else { &[1] };
            for &a in exps {
                let Ok(q) = PrimePower::new(p, a) else { continue };
                if q.q() < 10_000 && case.is_applicable(q) {
                    pairs.push((i, q));
                }
            }
        }
    }
    let oracle = oracle_eval_batch(cat, &pairs, workers());
    let mut by_prime: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (j, &(_, q)) in pairs.iter().enumerate() {
        by_prime.entry(q.p()).or_default().push(j);
    }
    let mut mismatches = Vec::new();
    for (p, idx) in by_prime {
        let mut ctx = EvalContext::new(p);
        for j in idx {
            let (i, q) = pairs[j];
            let lhs = ctx.eval_lhs(&cat[i], q).map_err(|e| e.to_string());
            let ora = oracle[j].clone().map_err(|e| e.to_string());
            if lhs != ora {
                mismatches.push(format!("{} at {}^{}", cat[i].id, q.p(), q.exponent()));
            }
        }
    }
    let detail = format!(
        "{} pairs compared, {} mismatches{}",
        pairs.len(),
        mismatches.len(),
        mismatches.first().map_or(String::new(), |m| format!(" (first: {m})"))
    );
    Outcome::new(mismatches.is_empty() && !pairs.is_empty(), detail)
}

fn criterion3() -> Outcome {
    let lhs = |id: &str, p: u64| {
        let case = lookup(id).unwrap();
        let r = EvalContext::new(p).eval_lhs(case, pp(p, 1)).unwrap();
        (r.signed(), r.modulus().get())
    };
    let rv2 = lookup("RV2").unwrap();
    let checks = [
        ("T1.5-F(7) = -1 mod 7", lhs("T1.5-F", 7) == (-1, 7)),
        ("T1.5-F(11) = 0 mod 11", lhs("T1.5-F", 11) == (0, 11)),
        ("T1.5-F(13) = 1 mod 13", lhs("T1.5-F", 13) == (1, 13)),
        ("RV1(5) = 1 mod 25", lhs("RV1", 5) == (1, 25)),
        ("RV2(5) = 19 mod 25", lhs("RV2", 5) == (-6, 25)),
        ("a(5) = -6", eval_rhs(rv2, pp(5, 1)).unwrap().signed() == -6),
        ("C1.8-F4(7) = 1 mod 7", lhs("C1.8-F4", 7) == (1, 7)),
    ];
    let bad: Vec<_> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome::new(bad.is_empty(), format!("{} spot values, failing: {bad:?}", checks.len()))
}

fn criterion4() -> Outcome {
    let plan = SweepPlan {
        class: CaseClass::Conjectures,
        prime_max: 999,
        jobs: workers(),
        ..SweepPlan::default()
    };
    let records = run_pairs(&plan_pairs(&plan).unwrap(), plan.jobs, false);
    let mut found: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.status == Status::Fail) {
        found.entry(r.case_id.as_str()).or_default().push(r.p);
    }

    // every perturbed right-hand side must be caught below 100
    let mutated = SweepPlan {
        class: CaseClass::All,
        prime_max: 97,
        mutate: true,
        jobs: workers(),
        ..SweepPlan::default()
    };
    let caught: BTreeSet<String> = run_pairs(&plan_pairs(&mutated).unwrap(), mutated.jobs, true)
        .into_iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| r.case_id)
        .collect();
    let missed: Vec<_> = registry_catalogue().iter().filter(|c| !caught.contains(&c.id)).map(|c| c.id.as_str()).collect();

    let mut detail = format!("{} conjecture records; ", records.len());
    for (id, ps) in &found {
        let agree = records
            .iter()
            .filter(|r| r.case_id == *id && r.status == Status::Fail)
            .all(|r| r.diagnostics.agrees_mod_p == Some(true));
        detail += &format!(
            "counterexamples to {id} at {} of its primes (first {:?}){}; ",
            ps.len(),
            &ps[..ps.len().min(4)],
            if agree { ", both sides agree mod p" } else { "" }
        );
    }
    detail += &format!("mutation: {} of {} cases caught", caught.len(), registry_catalogue().len());
    let ids: Vec<&str> = found.keys().copied().collect();
    let documented = ids == DOCUMENTED_FINDINGS;
    Outcome {
        pass: found.is_empty() && missed.is_empty(),
        expected: documented && missed.is_empty(),
        detail: if missed.is_empty() { detail } else { format!("{detail}; undetected mutations: {missed:?}") },
    }
}

/// One seeded property suite: (name, cases checked, failures).
type Suite = (&'static str, usize, usize);
type Step = (u32, &'static str, fn() -> Outcome);

fn suite_roots(rng: &mut ChaCha8Rng) -> Suite {
    let (mut n, mut bad) = (0, 0);
    while n < 2000 {
        let p = rng.gen_range(3..100_000u64);
        if !is_prime(p) {
            continue;
        }
        let a = rng.gen_range(-1_000_000..1_000_000i64);
        if legendre(a as i128, p) != 1 {
            continue;
        }
        n += 1;
        let m1 = Modulus::new(p).unwrap();
        let m2 = Modulus::new(p * p).unwrap();
        let r1 = sqrt_mod_p(a, p).unwrap().value();
        let r2 = sqrt_mod_p2(a, p).unwrap().value();
        if m1.mul(r1, r1) != m1.reduce_i64(a) || m2.mul(r2, r2) != m2.reduce_i64(a) {
            bad += 1;
        }
    }
    ("Tonelli-Shanks / Hensel roots square back", n, bad)
}

fn suite_cornacchia() -> Suite {
    let (mut n, mut bad) = (0, 0);
    for p in primes_in(3, 999) {
        for d in 1..=7u64 {
            n += 1;
            let brute = (1..).take_while(|y| d * y * y <= p).any(|y| {
                let r = p - d * y * y;
                let x = (r as f64).sqrt().round() as u64;
                x * x == r
            });
            let ok = match cornacchia(p, d) {
                Some((x, y)) => brute && x * x + d * y * y == p && y > 0,
                None => !brute || p % d == 0,
            };
            bad += usize::from(!ok);
        }
    }
    ("Cornacchia exactness and representability", n, bad)
}

fn suite_fast_doubling(rng: &mut ChaCha8Rng) -> Suite {
    let mut bad = 0;
    let n_cases = 1500;
    for _ in 0..n_cases {
        let params = LucasParams::new(rng.gen_range(-50..=50), rng.gen_range(-50..=50));
        let m = Modulus::new(rng.gen_range(2..1_000_000)).unwrap();
        let n = rng.gen_range(0..=2000u64);
        let (a, b) = (m.reduce_i64(params.a), m.reduce_i64(params.b));
        let (mut u, mut u1, mut v, mut v1) = (0, 1 % m.get(), 2 % m.get(), a);
        for _ in 0..n {
            (u, u1) = (u1, m.sub(m.mul(a, u1), m.mul(b, u)));
            (v, v1) = (v1, m.sub(m.mul(a, v1), m.mul(b, v)));
        }
        let (fu, fv) = lucas_pair(n, params, m);
        bad += usize::from(fu.value() != u || fv.value() != v);
    }
    ("Lucas fast doubling vs recurrence (n <= 2000)", n_cases, bad)
}

fn suite_delta_reduction(rng: &mut ChaCha8Rng) -> Suite {
    let (mut n, mut bad) = (0, 0);
    while n < 1500 {
        let p = rng.gen_range(3..5000u64);
        let params = LucasParams::new(rng.gen_range(-40..=40), rng.gen_range(-40..=40));
        if !is_prime(p) || legendre(params.discriminant(), p) != 1 {
            continue;
        }
        n += 1;
        let delta = sqrt_mod_p(params.discriminant().rem_euclid(p as i128) as i64, p).unwrap().value() as i64;
        let k = rng.gen_range(0..10 * p);
        let direct = lucas_pair(k, params, Modulus::new(p).unwrap());
        bad += usize::from(delta_reduction(k, params, p, delta).ok() != Some(direct));
        // the opposite root swaps alpha and beta and the divisor, so the values do not move
        bad += usize::from(delta_reduction(k, params, p, -delta).ok() != Some(direct));
    }
    ("u_n, v_n from ((A +- delta)/2)^n", n, bad)
}

fn suite_half_binomial(rng: &mut ChaCha8Rng) -> Suite {
    let (mut n, mut bad) = (0, 0);
    for p in primes_in(3, 60) {
        for a in 1..=3u32 {
            let q = pp(p, a);
            if q.q() > 50_000 {
                continue;
            }
            let m = Modulus::new(p).unwrap();
            let inv4 = m.inv(m.reduce_i64(-4)).unwrap();
            let half: Vec<u64> = half_binom_stream(q, q.q() - 1).map(|r| r.value()).collect();
            for _ in 0..40 {
                let k = rng.gen_range(0..q.q());
                n += 1;
                let lhs = m.mul(binom_vp(2 * k, k, pp(p, 1)).value().value(), m.pow(inv4, k));
                bad += usize::from(lhs != half[k as usize]);
            }
        }
    }
    ("binom(2k,k)/(-4)^k vs binom((p^a-1)/2,k) mod p", n, bad)
}

fn suite_half_index() -> Suite {
    let (mut n, mut bad) = (0, 0);
    for p in primes_in(3, 499) {
        let m = Modulus::new(p).unwrap();
        for a in -6..=6i64 {
            for b in -6..=6i64 {
                let params = LucasParams::new(a, b);
                if legendre(b as i128, p) != 1 || legendre(params.discriminant(), p) == 0 {
                    continue;
                }
                let root = sqrt_mod_p(b.rem_euclid(p as i64), p).unwrap().value() as i64;
                let h = half_index_values(params, p, root).unwrap();
                let lo = lucas_pair((p - 1) / 2, params, m);
                let hi = lucas_pair(p.div_ceil(2), params, m);
                n += 1;
                bad += usize::from(h.u_minus != lo.0 || h.v_minus != lo.1 || h.u_plus != hi.0);
            }
        }
        if p != 5 {
            let f = fib_lucas_half(p).unwrap();
            let (i, j) = FibLucasHalf::indices(p);
            let (fi, li) = lucas_pair(i, LucasParams::FIBONACCI, m);
            let (fj, lj) = lucas_pair(j, LucasParams::FIBONACCI, m);
            n += 1;
            bad += usize::from((f.f_minus, f.f_plus, f.l_minus, f.l_plus) != (fi, fj, li, lj));
        }
    }
    ("half-index Lucas and Fibonacci closed forms (p < 500)", n, bad)
}

fn suite_valued_binomials(rng: &mut ChaCha8Rng) -> Suite {
    let mut bad = 0;
    let n_cases = 1500;
    let primes = primes_in(3, 200);
    for _ in 0..n_cases {
        let p = primes[rng.gen_range(0..primes.len())];
        let a = rng.gen_range(1..=3u32);
        let Ok(q) = PrimePower::new(p, a) else { continue };
        let k = rng.gen_range(0..=500u64);
        let nn = k + rng.gen_range(0..=500u64);
        let exact: BigUint = (0..k).fold(BigUint::from(1u32), |acc, i| acc * (nn - i) / (i + 1));
        let want = (exact % q.q()).to_u64_digits().first().copied().unwrap_or(0);
        bad += usize::from(binom_vp(nn, k, q).value().value() != want);
    }
    ("ValuedUnit binomials vs big integers (k <= 500)", n_cases, bad)
}

fn suite_thm13() -> Suite {
    // besides the registered corollaries: the F, L sums at m = 7, -8 and the P, Q
    // sums at m = -4, 12, which the same reduction determines
    let mut sets: BTreeSet<(i64, i64, i64)> =
        BTreeSet::from([(2, -1, -2), (1, -1, 7), (1, -1, -8), (2, -1, -4), (2, -1, 12)]);
    for case in registry_catalogue() {
        let corollary = ["Thm 1.3", "Cor 1.7", "Cor 1.8", "Cor 1.9", "Cor 1.10"].contains(&case.location);
        let s = &case.sum;
        if !corollary || s.kernel != (Kernel::Central { h: 1 }) || s.num != 1 || s.range != Range::Full || s.k_factor {
            continue;
        }
        let params = match s.weight {
            Weight::U(q) | Weight::V(q) => q,
            Weight::Char3 => LucasParams::CHAR3,
            _ => continue,
        };
        sets.insert((params.a, params.b, s.den));
    }
    let (mut n, mut bad) = (0, 0);
    for &(a, b, m) in &sets {
        for p in primes_in(3, 499) {
            if m.rem_euclid(p as i64) == 0 {
                continue;
            }
            n += 1;
            bad += usize::from(thm13_reduction_check(a, b, m, p) != Ok(true));
        }
    }
    ("half-index reduction cross-check (corollary parameters, p < 500)", n, bad)
}

fn suite_pentagonal() -> Suite {
    let order = 3000;
    let fast = euler_product::<i64>(1, order);
    let mut direct = vec![0i64; order + 1];
    direct[0] = 1;
    for n in 1..=order {
        for i in (n..=order).rev() {
            direct[i] -= direct[i - n];
        }
    }
    let pent: HashMap<usize, i64> = (1..100i64)
        .flat_map(|k| {
            let s = if k % 2 == 0 { 1 } else { -1 };
            [((k * (3 * k - 1) / 2) as usize, s), ((k * (3 * k + 1) / 2) as usize, s)]
        })
        .chain([(0, 1)])
        .collect();
    let bad = (0..=order)
        .filter(|&i| fast.coefficient(i) != direct[i] || direct[i] != pent.get(&i).copied().unwrap_or(0))
        .count();
    ("pentagonal support of the Euler product", order + 1, bad)
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_261_015);
    let suites = [
        suite_roots(&mut rng),
        suite_cornacchia(),
        suite_fast_doubling(&mut rng),
        suite_delta_reduction(&mut rng),
        suite_half_binomial(&mut rng),
        suite_half_index(),
        suite_valued_binomials(&mut rng),
        suite_thm13(),
        suite_pentagonal(),
    ];
    for (name, n, bad) in &suites {
        println!("    {name}: {n} cases, {bad} failures");
    }
    let pass = suites.iter().all(|&(_, n, bad)| bad == 0 && n >= 1000);
    Outcome::new(pass, format!("{} suites", suites.len()))
}

fn criterion6(parallel: &[VerificationRecord]) -> Outcome {
    let serial = soundness_records(1);
    let key = |r: &VerificationRecord| format!("{r:?}");
    let mut a: Vec<String> = parallel.iter().map(key).collect();
    let mut b: Vec<String> = serial.iter().map(key).collect();
    a.sort_unstable();
    b.sort_unstable();
    Outcome::new(a == b, format!("{} records, 1 vs {} workers", serial.len(), workers()))
}

fn report(n: u32, title: &str, start: Instant, o: &Outcome) -> bool {
    let verdict = if o.pass { "PASS" } else { "FAIL" };
    let note = if !o.pass && o.expected { " [documented finding]" } else { "" };
    println!(
        "criterion {n} {verdict}{note}: {title} ({:.1}s) - {}",
        start.elapsed().as_secs_f64(),
        o.detail
    );
    o.pass || o.expected
}

fn main() -> ExitCode {
    // honour `cargo test -- --list` and name filters gracefully
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }

    // ACCEPTANCE_CRITERIA=2,5 runs a subset
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_CRITERIA")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let wanted = |n: u32| only.as_ref().is_none_or(|o| o.contains(&n));

    let mut ok = true;
    let mut parallel = Vec::new();
    if wanted(1) || wanted(6) {
        let t = Instant::now();
        parallel = soundness_records(workers());
        if wanted(1) {
            ok &= report(1, "theorem soundness sweep", t, &criterion1(&parallel));
        }
    }
    let steps: [Step; 4] = [
        (2, "oracle equivalence, q < 10^4", criterion2),
        (3, "spot values", criterion3),
        (4, "conjecture sweep p < 1000 and mutation sanity p < 100", criterion4),
        (5, "seeded property suites", criterion5),
    ];
    for (n, title, run) in steps {
        if wanted(n) {
            let t = Instant::now();
            ok &= report(n, title, t, &run());
        }
    }
    if wanted(6) {
        let t = Instant::now();
        ok &= report(6, "determinism, 1 vs N workers", t, &criterion6(&parallel));
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
