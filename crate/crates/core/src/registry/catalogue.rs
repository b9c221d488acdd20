//! The registered congruences.
//!
//! Location strings and case ids are report data: they let a reader find each
//! congruence in its source text.

use crate::lucas::LucasParams;
use crate::modarith::{jacobi_pp, legendre, PrimePower};
use crate::quadratic::{represent, sqrt_mod_p, ReprCondition};
use crate::series::a_coeffs;

use super::{
    CongruenceCase, Diagnostics, Kernel, ModulusKind, Range, RhsInput, RhsValue, SumSpec, Weight,
};
use ModulusKind::{ModP, ModP2, ModPa};

const FIB: LucasParams = LucasParams::FIBONACCI;
const PELL: LucasParams = LucasParams::PELL;
const ST: LucasParams = LucasParams::ST;
const FIB2: LucasParams = LucasParams::FIBONACCI_EVEN;

const C1: Kernel = Kernel::Central { h: 1 };
const C2: Kernel = Kernel::Central { h: 2 };
const C3: Kernel = Kernel::Central { h: 3 };

fn leg(a: i128, p: u64) -> i64 {
    legendre(a, p) as i64
}

/// `(p/5)`, which is `(5/p)` by reciprocity.
fn sym5(p: u64) -> i64 {
    legendre(p as i128, 5) as i64
}

/// `(p/3)`
fn sym3(p: u64) -> i64 {
    legendre(p as i128, 3) as i64
}

fn jpp(a: i128, pp: PrimePower) -> i64 {
    jacobi_pp(a, pp).expect("p is odd") as i64
}

fn neg_one_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The smaller square root of `a` mod `p`, when it exists and is nonzero.
fn nonzero_root(a: i128, p: u64) -> Option<i64> {
    let r = a.rem_euclid(p as i128) as i64;
    if r == 0 {
        return None;
    }
    sqrt_mod_p(r, p).ok().map(|s| s.value() as i64)
}

fn p_in(n: u64, rs: &'static [u64]) -> impl Fn(PrimePower) -> Result<(), String> + Send + Sync {
    move |pp| {
        if rs.contains(&(pp.p() % n)) {
            Ok(())
        } else {
            Err(format!("p mod {n} not in {rs:?}"))
        }
    }
}

fn q_in(n: u64, rs: &'static [u64]) -> impl Fn(PrimePower) -> Result<(), String> + Send + Sync {
    move |pp| {
        if rs.contains(&(pp.q() % n)) {
            Ok(())
        } else {
            Err(format!("p^a mod {n} not in {rs:?}"))
        }
    }
}

fn both(
    f: impl Fn(PrimePower) -> Result<(), String> + Send + Sync,
    g: impl Fn(PrimePower) -> Result<(), String> + Send + Sync,
) -> impl Fn(PrimePower) -> Result<(), String> + Send + Sync {
    move |pp| f(pp).and_then(|_| g(pp))
}

/// Right-hand side depending on `p` only, as `num/den`.
fn by_p(f: impl Fn(u64) -> (i64, i64) + Send + Sync) -> impl Fn(&RhsInput) -> Result<RhsValue, String> + Send + Sync {
    move |inp| {
        let (num, den) = f(inp.p());
        Ok(RhsValue::plain(inp.frac(num, den)?))
    }
}

/// Value looked up from the class of `p` mod 30, classes given up to sign.
fn table30(rows: &'static [(u64, i64)]) -> impl Fn(&RhsInput) -> Result<RhsValue, String> + Send + Sync {
    move |inp| {
        let r = inp.p() % 30;
        rows.iter()
            .find(|(c, _)| *c == r || 30 - *c == r)
            .map(|&(_, v)| RhsValue::plain(inp.int(v)))
            .ok_or_else(|| format!("p = {r} mod 30 is not covered"))
    }
}

fn with_xy(value: crate::Residue, x: i64, y: i64) -> RhsValue {
    RhsValue {
        value,
        diag: Diagnostics {
            x: Some(x),
            y: Some(y),
            ..Diagnostics::default()
        },
    }
}

fn repr(p: u64, d: u64, conditions: &[ReprCondition]) -> Result<(i64, i64), String> {
    match represent(p, d, conditions) {
        None => Err(format!("{p} is not of the form x^2 + {d}y^2")),
        Some(Err(e)) => Err(e.to_string()),
        Some(Ok(r)) => Ok((r.x, r.y)),
    }
}

/// `p = x^2 + 3y^2` with `y ≡ 1 (mod 4)`.
fn rep3y(p: u64) -> Result<(i64, i64), String> {
    repr(p, 3, &[ReprCondition::YMod4Eq1])
}

/// `p = x^2 + 3y^2` with `x ≡ 1 (mod 3)`.
fn rep3x(p: u64) -> Result<(i64, i64), String> {
    repr(p, 3, &[ReprCondition::XMod3Eq1])
}

/// `p = x^2 + 2y^2` with `x ≡ 1, 3 (mod 8)`, and also `y ≡ 1, 3 (mod 8)` when `p ≡ 3 (mod 8)`.
fn rep2(p: u64) -> Result<(i64, i64), String> {
    if p % 8 == 3 {
        repr(p, 2, &[ReprCondition::XMod8In13, ReprCondition::YMod8In13])
    } else {
        repr(p, 2, &[ReprCondition::XMod8In13])
    }
}

/// `u_k` or `v_k` of the given family.
fn uv(params: LucasParams, v: bool) -> Weight {
    if v {
        Weight::V(params)
    } else {
        Weight::U(params)
    }
}

/// Zero congruences modulo p at `(A, m)`, weights `u_k(A, m^2)` and `v_k(A, m^2)`.
pub fn t11_cases(a: i64, m: i64, h: u32) -> Vec<CongruenceCase> {
    let params = LucasParams::new(a, m * m);
    let den = m * (-4i64).pow(h);
    [false, true]
        .into_iter()
        .map(|v| {
            let id = format!("T1.1-{}({a},{m},{h})", if v { "v" } else { "u" });
            CongruenceCase::new(id, "Thm 1.1", ModPa, SumSpec::new(uv(params, v), Kernel::Central { h }, 1, den))
                .guard(move |pp| {
                    let p = pp.p();
                    let delta = nonzero_root(params.discriminant(), p)
                        .ok_or("A^2 - 4m^2 is not a nonzero square mod p")?;
                    let s = jpp((a + delta) as i128, pp);
                    let t = jpp(2 * m as i128, pp);
                    match (v, s * t) {
                        (false, 1) | (true, -1) => Ok(()),
                        _ => Err(format!("((A+delta)/p^a) = {s}, (2m/p^a) = {t}")),
                    }
                })
                .rhs("0", move |inp| {
                    let delta = nonzero_root(params.discriminant(), inp.p()).ok_or("no delta")?;
                    Ok(RhsValue {
                        value: inp.int(0),
                        diag: Diagnostics {
                            delta: Some(delta),
                            ..Diagnostics::default()
                        },
                    })
                })
        })
        .collect()
}

/// The four reflection congruences at `(A, B, m, h)`; the right-hand side is
/// a multiple of the reflected sum with weights `m^k/B^k`.
pub fn t21_cases(a: i64, b: i64, m: i64, h: u32) -> Vec<CongruenceCase> {
    let params = LucasParams::new(a, b);
    let scale = (-4i64).pow(h);
    let lhs = |v: bool| SumSpec::new(uv(params, v), Kernel::Central { h }, 1, m * scale);
    let reflected = |v: bool| SumSpec::new(uv(params, v), Kernel::Central { h }, m, b * scale);
    // (id suffix, lhs is v, reflected sum is v, needs (B/p^a))
    let shapes = [("u+", false, false, 1), ("v+", true, true, 1), ("u-", false, true, -1), ("v-", true, false, -1)];
    shapes
        .into_iter()
        .map(|(tag, lv, rv, b_sym)| {
            let formula = match tag {
                "u+" => "-(2m(A+delta)/p^a) * sum m^k u_k/B^k ...",
                "v+" => "(2m(A+delta)/p^a) * sum m^k v_k/B^k ...",
                "u-" => "(1/delta)(2m(A+delta)/p^a) * sum m^k v_k/B^k ...",
                _ => "-delta(2m(A+delta)/p^a) * sum m^k u_k/B^k ...",
            };
            CongruenceCase::new(format!("T2.1-{tag}({a},{b},{m},{h})"), "Thm 2.1", ModPa, lhs(lv))
                .aux(reflected(rv))
                .sign_sensitive()
                .guard(move |pp| {
                    nonzero_root(params.discriminant(), pp.p()).ok_or("Delta is not a nonzero square mod p")?;
                    let s = jpp(b as i128, pp);
                    if s == b_sym {
                        Ok(())
                    } else {
                        Err(format!("(B/p^a) = {s}"))
                    }
                })
                .rhs(formula, move |inp| {
                    let p = inp.p();
                    let delta = inp.sign * nonzero_root(params.discriminant(), p).ok_or("no delta")?;
                    let f = jpp(2 * m as i128 * (a + delta) as i128, inp.pp);
                    let aux = inp.aux.ok_or("missing reflected sum")?;
                    let value = match tag {
                        "u+" => aux * -f,
                        "v+" => aux * f,
                        "u-" => aux * inp.frac(f, delta)?,
                        _ => aux * (-delta * f),
                    };
                    Ok(RhsValue {
                        value,
                        diag: Diagnostics {
                            delta: Some(delta),
                            ..Diagnostics::default()
                        },
                    })
                })
        })
        .collect()
}

/// Supercongruences and the mod p zero congruences at `(A, B)`.
pub fn t12_cases(a: i64, b: i64, suffix: &str) -> Vec<CongruenceCase> {
    let params = LucasParams::new(a, b);
    let disc = params.discriminant();
    let base = move |pp: PrimePower| -> Result<(), String> {
        let p = pp.p() as i128;
        if (a as i128 * b as i128 * disc) % p == 0 {
            Err("p divides A*B*Delta".into())
        } else {
            Ok(())
        }
    };
    let mut out = Vec::new();
    for (v, r) in [(false, 1u64), (true, 3)] {
        let tag = if v { "v" } else { "u" };
        out.push(
            CongruenceCase::new(format!("T1.2i-{tag}{suffix}"), "Thm 1.2(i)", ModP2, SumSpec::new(uv(params, v), C2, 1, 16 * a))
                .guard(move |pp| {
                    base(pp)?;
                    if pp.p() % 4 == r {
                        Ok(())
                    } else {
                        Err(format!("p mod 4 != {r}"))
                    }
                }),
        );
    }
    for (v, s) in [(false, 1i64), (true, -1)] {
        let tag = if v { "v" } else { "u" };
        out.push(
            CongruenceCase::new(format!("T1.2ii-{tag}{suffix}"), "Thm 1.2(ii)", ModP, SumSpec::new(uv(params, v), C2, a, 16 * b))
                .guard(move |pp| {
                    base(pp)?;
                    let p = pp.p();
                    if leg(disc, p) != 1 {
                        return Err("(Delta/p) != 1".into());
                    }
                    if leg(-(b as i128), p) != s {
                        return Err(format!("(-B/p) != {s}"));
                    }
                    Ok(())
                }),
        );
    }
    out
}

/// Both congruences of the mod p family with denominator `m^k` and a single
/// central binomial; `d^2 ≡ m^2 - 4Am + 16B`, checked under both signs of `d`.
pub fn t13_cases(a: i64, b: i64, m: i64) -> Vec<CongruenceCase> {
    let params = LucasParams::new(a, b);
    let disc = params.discriminant();
    let dd = m as i128 * m as i128 - 4 * a as i128 * m as i128 + 16 * b as i128;
    [false, true]
        .into_iter()
        .map(|v| {
            let tag = if v { "v" } else { "u" };
            let formula = if v {
                "2s if (Delta/p)=1, (4A-2m)/d * s otherwise; s = (2m/p)((m-d-2A)/p)"
            } else {
                "0 if (Delta/p)=1, -4/d * s otherwise; s = (2m/p)((m-d-2A)/p)"
            };
            CongruenceCase::new(format!("T1.3-{tag}({a},{b},{m})"), "Thm 1.3", ModP, SumSpec::new(uv(params, v), C1, 1, m))
                .sign_sensitive()
                .guard(move |pp| {
                    let p = pp.p();
                    if disc.rem_euclid(p as i128) == 0 {
                        return Err("p divides Delta".into());
                    }
                    nonzero_root(dd, p).ok_or("m^2 - 4Am + 16B is not a nonzero square mod p")?;
                    Ok(())
                })
                .rhs(formula, move |inp| {
                    let p = inp.p();
                    let d = inp.sign * nonzero_root(dd, p).ok_or("no d")?;
                    let s = leg(2 * m as i128, p) * leg((m - d - 2 * a) as i128, p);
                    let value = match (leg(disc, p), v) {
                        (1, false) => inp.int(0),
                        (1, true) => inp.int(2 * s),
                        (_, false) => inp.frac(-4 * s, d)?,
                        (_, true) => inp.frac((4 * a - 2 * m) * s, d)?,
                    };
                    Ok(RhsValue {
                        value,
                        diag: Diagnostics {
                            d: Some(d),
                            ..Diagnostics::default()
                        },
                    })
                })
        })
        .collect()
}

/// `sum A^k v_k/(4B)^k binom(2k,k) ≡ 2(-B/p) (mod p^2)` when `(Delta/p) = 1`.
pub fn t14_case(id: &str, a: i64, b: i64) -> CongruenceCase {
    let params = LucasParams::new(a, b);
    CongruenceCase::new(id, "Thm 1.4", ModP2, SumSpec::new(Weight::V(params), C1, a, 4 * b))
        .guard(move |pp| {
            let p = pp.p();
            if (a as i128 * b as i128) % p as i128 == 0 {
                return Err("p divides A*B".into());
            }
            if leg(params.discriminant(), p) != 1 {
                return Err("(Delta/p) != 1".into());
            }
            Ok(())
        })
        .rhs("2(-B/p)", move |inp| Ok(RhsValue::plain(inp.int(2 * leg(-(b as i128), inp.p())))))
}

fn rodriguez_villegas() -> Vec<CongruenceCase> {
    vec![
        CongruenceCase::new("RV1", "Section 1", ModP2, SumSpec::new(Weight::One, C2, 1, 16))
            .rhs("(-1)^((p-1)/2)", |inp| {
                Ok(RhsValue::plain(inp.int(neg_one_pow(((inp.p() - 1) / 2) as i64))))
            }),
        CongruenceCase::new("RV2", "Section 1", ModP2, SumSpec::new(Weight::One, C3, 1, 64))
            .rhs("a(p), q prod (1-q^{4n})^6 = sum a(n) q^n", |inp| {
                Ok(RhsValue::plain(inp.int(eta_coefficient(inp.p()))))
            }),
    ]
}

/// `a(n)`, from a cache that grows by doubling.
fn eta_coefficient(n: u64) -> i64 {
    use std::sync::Mutex;
    static CACHE: Mutex<Vec<i64>> = Mutex::new(Vec::new());
    let mut cache = CACHE.lock().expect("cache lock");
    if cache.len() < n as usize {
        let len = (n as usize).max(2 * cache.len()).max(64);
        *cache = a_coeffs(len);
    }
    cache[n as usize - 1]
}

fn corollary_1_1() -> Vec<CongruenceCase> {
    let char3 = |h: u32, den: i64| SumSpec::new(Weight::Char3, Kernel::Central { h }, 1, den);
    let mut out = Vec::new();
    for (i, (h, den)) in [(1, -4), (2, 16), (3, -64)].into_iter().enumerate() {
        out.push(CongruenceCase::new(format!("C1.1-{}", i + 1), "Cor 1.1", ModPa, char3(h, den)).guard(p_in(3, &[1])));
    }
    for (i, (h, den)) in [(1, 4), (2, -16), (3, 64)].into_iter().enumerate() {
        out.push(
            CongruenceCase::new(format!("C1.1-{}", i + 4), "Cor 1.1", ModPa, char3(h, den))
                .guard(both(p_in(3, &[1]), q_in(12, &[1]))),
        );
    }
    let third = |h: u32, num: i64, den: i64| {
        SumSpec::new(Weight::One, Kernel::SixThree { h }, num, den).with_range(Range::Third)
    };
    out.push(
        CongruenceCase::new("C1.1-7", "Cor 1.1", ModPa, third(1, 1, 64)).guard(both(p_in(3, &[1]), q_in(12, &[7]))),
    );
    out.push(
        CongruenceCase::new("C1.1-8", "Cor 1.1", ModPa, third(2, -1, 4096))
            .guard(both(p_in(3, &[1]), q_in(12, &[7]))),
    );
    out
}

fn corollary_1_2() -> Vec<CongruenceCase> {
    let mut out = Vec::new();
    let rows: [(Weight, i64, u32, &'static [u64]); 9] = [
        (Weight::U(FIB2), -4, 1, &[]),
        (Weight::U(FIB2), 16, 2, &[]),
        (Weight::U(FIB2), -64, 3, &[]),
        (Weight::U(FIB2), 4, 1, &[1, 9]),
        (Weight::U(FIB2), -16, 2, &[1, 9]),
        (Weight::U(FIB2), 64, 3, &[1, 9]),
        (Weight::V(FIB2), 4, 1, &[11, 19]),
        (Weight::V(FIB2), -16, 2, &[11, 19]),
        (Weight::V(FIB2), 64, 3, &[11, 19]),
    ];
    for (i, (w, den, h, classes)) in rows.into_iter().enumerate() {
        let case = CongruenceCase::new(format!("C1.2-{}", i + 1), "Cor 1.2", ModPa, SumSpec::new(w, Kernel::Central { h }, 1, den));
        out.push(if classes.is_empty() {
            case.guard(p_in(5, &[1, 4]))
        } else {
            case.guard(both(p_in(5, &[1, 4]), q_in(20, classes)))
        });
    }
    out
}

fn corollaries_1_3_to_1_6() -> Vec<CongruenceCase> {
    vec![
        CongruenceCase::new("C1.3", "Cor 1.3", ModP2, SumSpec::new(Weight::Char3, C2, 1, -16)).guard(p_in(4, &[1])),
        CongruenceCase::new("C1.4i", "Cor 1.4(i)", ModP, SumSpec::new(Weight::U(FIB), C2, 1, -16))
            .min_prime(7)
            .guard(p_in(5, &[1, 4])),
        CongruenceCase::new("C1.4ii-F", "Cor 1.4(ii)", ModP2, SumSpec::new(Weight::U(FIB2), C2, 1, 48))
            .min_prime(7)
            .guard(p_in(4, &[1])),
        CongruenceCase::new("C1.4ii-L", "Cor 1.4(ii)", ModP2, SumSpec::new(Weight::V(FIB2), C2, 1, 48))
            .min_prime(7)
            .guard(p_in(4, &[3])),
        CongruenceCase::new("C1.4iii-F", "Cor 1.4(iii)", ModP, SumSpec::new(Weight::U(FIB2), C2, 3, 16))
            .min_prime(7)
            .guard(p_in(20, &[1, 9])),
        CongruenceCase::new("C1.4iii-L", "Cor 1.4(iii)", ModP, SumSpec::new(Weight::V(FIB2), C2, 3, 16))
            .min_prime(7)
            .guard(p_in(20, &[11, 19])),
        CongruenceCase::new("C1.5-P32", "Cor 1.5", ModP2, SumSpec::new(Weight::U(PELL), C2, 1, 32)).guard(p_in(4, &[1])),
        CongruenceCase::new("C1.5-Q32", "Cor 1.5", ModP2, SumSpec::new(Weight::V(PELL), C2, 1, 32)).guard(p_in(4, &[3])),
        CongruenceCase::new("C1.5-P-8", "Cor 1.5", ModP, SumSpec::new(Weight::U(PELL), C2, 1, -8)).guard(p_in(8, &[1, 7])),
        CongruenceCase::new("C1.6-S64", "Cor 1.6", ModP2, SumSpec::new(Weight::U(ST), C2, 1, 64))
            .min_prime(5)
            .guard(p_in(4, &[1])),
        CongruenceCase::new("C1.6-T64", "Cor 1.6", ModP2, SumSpec::new(Weight::V(ST), C2, 1, 64))
            .min_prime(5)
            .guard(p_in(4, &[3])),
        CongruenceCase::new("C1.6-S4", "Cor 1.6", ModP, SumSpec::new(Weight::U(ST), C2, 1, 4))
            .min_prime(5)
            .guard(p_in(12, &[1])),
        CongruenceCase::new("C1.6-T4", "Cor 1.6", ModP, SumSpec::new(Weight::V(ST), C2, 1, 4))
            .min_prime(5)
            .guard(p_in(12, &[11])),
    ]
}

fn corollaries_1_7_to_1_10() -> Vec<CongruenceCase> {
    let c1 = |w: Weight, den: i64| SumSpec::new(w, C1, 1, den);
    vec![
        CongruenceCase::new("C1.7", "Cor 1.7", ModP, c1(Weight::Char3, -4))
            .rhs("((-1/p) - (3/p))/2", by_p(|p| (leg(-1, p) - leg(3, p), 2))),
        CongruenceCase::new("C1.8-F4", "Cor 1.8", ModP, c1(Weight::U(FIB), -4))
            .rhs("(1 - (p/5))/2", by_p(|p| (1 - sym5(p), 2))),
        CongruenceCase::new("C1.8-L4", "Cor 1.8", ModP, c1(Weight::V(FIB), -4))
            .rhs("(5(p/5) - 1)/2", by_p(|p| (5 * sym5(p) - 1, 2))),
        CongruenceCase::new("C1.8-F8", "Cor 1.8", ModP, c1(Weight::U(FIB), 8))
            .rhs("(2/p)((p/5) - 1)/2", by_p(|p| (leg(2, p) * (sym5(p) - 1), 2))),
        CongruenceCase::new("C1.8-L8", "Cor 1.8", ModP, c1(Weight::V(FIB), 8))
            .rhs("(2/p)(5(p/5) - 1)/2", by_p(|p| (leg(2, p) * (5 * sym5(p) - 1), 2))),
        CongruenceCase::new("C1.9-P2", "Cor 1.9", ModP, c1(Weight::U(PELL), -2))
            .rhs("1 - (2/p)", by_p(|p| (1 - leg(2, p), 1))),
        CongruenceCase::new("C1.9-Q2", "Cor 1.9", ModP, c1(Weight::V(PELL), -2))
            .rhs("4(2/p) - 2", by_p(|p| (4 * leg(2, p) - 2, 1))),
        CongruenceCase::new("C1.9-P10", "Cor 1.9", ModP, c1(Weight::U(PELL), 10))
            .guard(|pp| if pp.p() == 5 { Err("p = 5".into()) } else { Ok(()) })
            .rhs("(p/5)((2/p) - 1)", by_p(|p| (sym5(p) * (leg(2, p) - 1), 1))),
        CongruenceCase::new("C1.9-Q10", "Cor 1.9", ModP, c1(Weight::V(PELL), 10))
            .guard(|pp| if pp.p() == 5 { Err("p = 5".into()) } else { Ok(()) })
            .rhs("(p/5)(4(2/p) - 2)", by_p(|p| (sym5(p) * (4 * leg(2, p) - 2), 1))),
        CongruenceCase::new("C1.10-S1", "Cor 1.10", ModP, c1(Weight::U(ST), 1))
            .min_prime(5)
            .rhs("2((p/3) - (-1/p))", by_p(|p| (2 * (sym3(p) - leg(-1, p)), 1))),
        CongruenceCase::new("C1.10-T1", "Cor 1.10", ModP, c1(Weight::V(ST), 1))
            .min_prime(5)
            .rhs("8(-1/p) - 6(p/3)", by_p(|p| (8 * leg(-1, p) - 6 * sym3(p), 1))),
        CongruenceCase::new("C1.10-S16", "Cor 1.10", ModP, c1(Weight::U(ST), 16))
            .min_prime(5)
            .rhs("((6/p) - (2/p))/2", by_p(|p| (leg(6, p) - leg(2, p), 2))),
        CongruenceCase::new("C1.10-T16", "Cor 1.10", ModP, c1(Weight::V(ST), 16))
            .min_prime(5)
            .rhs("3(6/p) - (2/p)", by_p(|p| (3 * leg(6, p) - leg(2, p), 1))),
        CongruenceCase::new("C1.10-S15", "Cor 1.10", ModP, c1(Weight::U(ST), 15))
            .min_prime(7)
            .rhs("2(p/5)((3/p) - 1)", by_p(|p| (2 * sym5(p) * (leg(3, p) - 1), 1))),
        CongruenceCase::new("C1.10-T15", "Cor 1.10", ModP, c1(Weight::V(ST), 15))
            .min_prime(7)
            .deviation("printed as 2(p/5)(8(3/p) - 6); the general mod p formula at (A,B,m) = (4,1,15) gives (p/5)(8(3/p) - 6), which is registered")
            .rhs("(p/5)(8(3/p) - 6)", by_p(|p| (sym5(p) * (8 * leg(3, p) - 6), 1))),
    ]
}

fn theorems_1_4_and_1_5() -> Vec<CongruenceCase> {
    vec![
        t14_case("T1.4", 3, 2),
        t14_case("T1.4-F", 1, -1),
        CongruenceCase::new("T1.5-F", "Thm 1.5", ModP, SumSpec::new(Weight::U(FIB), C1, 1, 12))
            .min_prime(7)
            .rhs(
                "0 if p = ±1 (mod 5); 1 if p = ±13, -1 if p = ±7 (mod 30)",
                table30(&[(1, 0), (11, 0), (13, 1), (7, -1)]),
            ),
        CongruenceCase::new("T1.5-L", "Thm 1.5", ModP, SumSpec::new(Weight::V(FIB), C1, 1, 12))
            .min_prime(7)
            .rhs(
                "-1 if p = ±7; 1 if p = ±13; 2 if p = ±1; -2 if p = ±11 (mod 30)",
                table30(&[(7, -1), (13, 1), (1, 2), (11, -2)]),
            ),
    ]
}

fn extras() -> Vec<CongruenceCase> {
    let loc = "Section 1, after Thm 1.5";
    vec![
        CongruenceCase::new("E-F3", loc, ModP, SumSpec::new(Weight::U(FIB), C1, 1, -3))
            .min_prime(7)
            .deviation("printed as (p/5) - 1, which fails for p = ±13 (mod 30); registered the values 0, -2, 2 for p = ±1 (mod 5), ±7, ±13 (mod 30)")
            .rhs("0 if p = ±1 (mod 5); -2 if p = ±7, 2 if p = ±13 (mod 30)", table30(&[(1, 0), (11, 0), (7, -2), (13, 2)])),
        CongruenceCase::new("E-L3", loc, ModP, SumSpec::new(Weight::V(FIB), C1, 1, -3))
            .min_prime(7)
            .rhs("2 if p = ±1; -2 if p = ±11; 4 if p = ±7; -4 if p = ±13 (mod 30)", table30(&[(1, 2), (11, -2), (7, 4), (13, -4)])),
        CongruenceCase::new("E-CP2", loc, ModP, SumSpec::new(Weight::U(PELL), Kernel::Catalan, 1, -2))
            .min_prime(7)
            .rhs("2(2/p) - 2", by_p(|p| (2 * leg(2, p) - 2, 1))),
        CongruenceCase::new("E-CS1", loc, ModP, SumSpec::new(Weight::U(ST), Kernel::Catalan, 1, 1).with_range(Range::Half))
            .min_prime(7)
            .rhs("((p/3) - 1)/2", by_p(|p| (sym3(p) - 1, 2))),
        CongruenceCase::new("E-CF4", loc, ModP, SumSpec::new(Weight::U(FIB), Kernel::Catalan, 1, -4).with_range(Range::Half))
            .min_prime(7)
            .rhs("2(p/5) - 2", by_p(|p| (2 * sym5(p) - 2, 1))),
        CongruenceCase::new("E-CF12", loc, ModP, SumSpec::new(Weight::U(FIB), Kernel::Catalan, 1, 12).with_range(Range::Half))
            .min_prime(7)
            .rhs("0 if p = ±1; 4 if p = ±7; 8 if p = ±13; 12 if p = ±11 (mod 30)", table30(&[(1, 0), (7, 4), (13, 8), (11, 12)])),
    ]
}

fn lemma_3_1() -> Vec<CongruenceCase> {
    [2, 3, 5]
        .into_iter()
        .map(|x| CongruenceCase::new(format!("L3.1-x{x}"), "Lemma 3.1", ModP2, SumSpec::new(Weight::Lemma31 { x }, C2, 1, 16)))
        .collect()
}

/// Closed form in `(x, y)` and `p`, evaluated in the comparison modulus.
type ReprRhs = fn(&RhsInput, i64, i64) -> Result<crate::Residue, String>;

/// `p` as a signed integer.
fn pi(inp: &RhsInput) -> i64 {
    inp.p() as i64
}

fn conj(id: &'static str, location: &'static str, kind: ModulusKind, sum: SumSpec) -> CongruenceCase {
    CongruenceCase::new(id, location, kind, sum).conjecture()
}

fn with_repr(
    rep: fn(u64) -> Result<(i64, i64), String>,
    f: ReprRhs,
) -> impl Fn(&RhsInput) -> Result<RhsValue, String> + Send + Sync {
    move |inp| {
        let (x, y) = rep(inp.p())?;
        Ok(with_xy(f(inp, x, y)?, x, y))
    }
}

fn conjectures() -> Vec<CongruenceCase> {
    let char3 = SumSpec::new(Weight::Char3, C2, 1, -16);
    let p_8 = SumSpec::new(Weight::U(PELL), C2, 1, -8);
    let p32 = SumSpec::new(Weight::U(PELL), C2, 1, 32);
    let q_8 = SumSpec::new(Weight::V(PELL), C2, 1, -8);
    let q32 = SumSpec::new(Weight::V(PELL), C2, 1, 32);
    let s4 = SumSpec::new(Weight::U(ST), C2, 1, 4);
    let s64 = SumSpec::new(Weight::U(ST), C2, 1, 64);
    let t4 = SumSpec::new(Weight::V(ST), C2, 1, 4);
    let t64 = SumSpec::new(Weight::V(ST), C2, 1, 64);
    let (c51, c52i, c52ii, c53i, c53ii) = ("Conj 5.1", "Conj 5.2(i)", "Conj 5.2(ii)", "Conj 5.3(i)", "Conj 5.3(ii)");
    let (c54i, c54ii, c55i, c55ii) = ("Conj 5.4(i)", "Conj 5.4(ii)", "Conj 5.5(i)", "Conj 5.5(ii)");
    let (c56, c57, c58i, c58ii, c58iii) = ("Conj 5.6", "Conj 5.7", "Conj 5.8(i)", "Conj 5.8(ii)", "Conj 5.8(iii)");
    vec![
        conj("Conj5.1-a", c51, ModP2, char3)
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("(-1)^((p-3)/4)(4y - p/(3y)), p = x^2+3y^2, y = 1 (mod 4)", with_repr(rep3y, |inp, _, y| {
                Ok((inp.int(4 * y) - inp.frac(pi(inp), 3 * y)?) * neg_one_pow((pi(inp) - 3) / 4))
            })),
        conj("Conj5.1-b", c51, ModP2, char3.with_k())
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("(-1)^((p+1)/4) y", with_repr(rep3y, |inp, _, y| Ok(inp.int(neg_one_pow((pi(inp) + 1) / 4) * y)))),
        conj("Conj5.1-c", c51, ModP, char3).min_prime(5).guard(p_in(12, &[11])),
        conj("Conj5.1-d", c51, ModP2, SumSpec::new(Weight::Char3, Kernel::CentralPm1, 1, 16))
            .min_prime(5)
            .guard(p_in(12, &[1])),
        conj("Conj5.2i-sum", c52i, ModP2, p_8)
            .guard(p_in(8, &[1, 3]))
            .rhs("0 if p = 1 (mod 8); (-1)^((p-3)/8)(p/(2x) - 2x) if p = 3 (mod 8)", with_repr(rep2, |inp, x, _| {
                if pi(inp) % 8 == 1 {
                    return Ok(inp.int(0));
                }
                Ok((inp.frac(pi(inp), 2 * x)? - inp.int(2 * x)) * neg_one_pow((pi(inp) - 3) / 8))
            })),
        conj("Conj5.2i-ksum", c52i, ModP2, p_8.with_k())
            .guard(p_in(8, &[1, 3]))
            .rhs("(-1)^((x+1)/2)/2 (x + p/(2x))", with_repr(rep2, |inp, x, _| {
                let s = neg_one_pow((x + 1) / 2);
                Ok((inp.int(x) + inp.frac(pi(inp), 2 * x)?) * inp.frac(s, 2)?)
            })),
        conj("Conj5.2ii-a", c52ii, ModP, p_8).guard(p_in(8, &[5])),
        conj("Conj5.2ii-b", c52ii, ModP2, SumSpec::new(Weight::U(PELL), Kernel::CentralPm1, 1, 8)).guard(p_in(8, &[7])),
        conj("Conj5.3i-a", c53i, ModP2, p32)
            .guard(p_in(8, &[3]))
            .deviation("the side condition is printed as y = 1, 3 (mod p); read as y = 1, 3 (mod 8)")
            .rhs("(-1)^((y-1)/2)(2y - p/(4y)), y = 1, 3 (mod 8)", with_repr(rep2, |inp, _, y| {
                Ok((inp.int(2 * y) - inp.frac(pi(inp), 4 * y)?) * neg_one_pow((y - 1) / 2))
            })),
        conj("Conj5.3i-b", c53i, ModP, p32).guard(p_in(8, &[7])),
        conj("Conj5.3ii", c53ii, ModP2, p32.with_k())
            .guard(p_in(8, &[1, 3]))
            .rhs("(-1)^((p-1)/8)(p/(4x) - x/2) if p = 1; (-1)^((y+1)/2) y if p = 3 (mod 8)", with_repr(rep2, |inp, x, y| {
                if pi(inp) % 8 == 1 {
                    Ok((inp.frac(pi(inp), 4 * x)? - inp.frac(x, 2)?) * neg_one_pow((pi(inp) - 1) / 8))
                } else {
                    Ok(inp.int(neg_one_pow((y + 1) / 2) * y))
                }
            })),
        conj("Conj5.4i-sum", c54i, ModP2, q_8)
            .guard(p_in(8, &[1, 3]))
            .rhs("(-1)^((x-1)/2)(4x - p/x)", with_repr(rep2, |inp, x, _| {
                Ok((inp.int(4 * x) - inp.frac(pi(inp), x)?) * neg_one_pow((x - 1) / 2))
            })),
        conj("Conj5.4i-ksum", c54i, ModP2, q_8.with_k())
            .guard(p_in(8, &[1, 3]))
            .rhs("0 if p = 1 (mod 8); (-1)^((p-3)/8) 2(x + p/x) if p = 3 (mod 8)", with_repr(rep2, |inp, x, _| {
                if pi(inp) % 8 == 1 {
                    return Ok(inp.int(0));
                }
                Ok((inp.int(x) + inp.frac(pi(inp), x)?) * (2 * neg_one_pow((pi(inp) - 3) / 8)))
            })),
        conj("Conj5.4ii", c54ii, ModP, q_8).guard(p_in(8, &[5, 7])),
        conj("Conj5.5i-a", c55i, ModP2, q32)
            .guard(p_in(8, &[1]))
            .rhs("(-1)^((p-1)/8)(4x - p/x)", with_repr(rep2, |inp, x, _| {
                Ok((inp.int(4 * x) - inp.frac(pi(inp), x)?) * neg_one_pow((pi(inp) - 1) / 8))
            })),
        conj("Conj5.5i-b", c55i, ModP, q32).guard(p_in(8, &[5])),
        conj("Conj5.5ii", c55ii, ModP2, q32.with_k())
            .guard(p_in(8, &[1, 3]))
            .rhs("(-1)^((p-1)/8)(p/x - 2x) if p = 1; (-1)^((y+1)/2) 2y if p = 3 (mod 8)", with_repr(rep2, |inp, x, y| {
                if pi(inp) % 8 == 1 {
                    Ok((inp.frac(pi(inp), x)? - inp.int(2 * x)) * neg_one_pow((pi(inp) - 1) / 8))
                } else {
                    Ok(inp.int(neg_one_pow((y + 1) / 2) * 2 * y))
                }
            })),
        conj("Conj5.6-a", c56, ModP2, s4)
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("(-1)^((p+1)/4)(4y - p/(3y))", with_repr(rep3y, |inp, _, y| {
                Ok((inp.int(4 * y) - inp.frac(pi(inp), 3 * y)?) * neg_one_pow((pi(inp) + 1) / 4))
            })),
        conj("Conj5.6-b", c56, ModP2, s4.with_k())
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("(-1)^((p-3)/4)(6y - 7p/(3y))", with_repr(rep3y, |inp, _, y| {
                Ok((inp.int(6 * y) - inp.frac(7 * pi(inp), 3 * y)?) * neg_one_pow((pi(inp) - 3) / 4))
            })),
        conj("Conj5.6-c", c56, ModP2, s4).min_prime(5).guard(p_in(12, &[1])),
        conj("Conj5.6-d", c56, ModP, s4).min_prime(5).guard(p_in(3, &[2])),
        conj("Conj5.7-a", c57, ModP2, s64)
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("2y - p/(6y)", with_repr(rep3y, |inp, _, y| Ok(inp.int(2 * y) - inp.frac(pi(inp), 6 * y)?))),
        conj("Conj5.7-b", c57, ModP2, s64.with_k())
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("y", with_repr(rep3y, |inp, _, y| Ok(inp.int(y)))),
        conj("Conj5.7-c", c57, ModP, s64).min_prime(5).guard(p_in(12, &[11])),
        conj("Conj5.8i-a", c58i, ModP2, t4)
            .min_prime(5)
            .guard(p_in(12, &[1]))
            .rhs("(-1)^((p-1)/4+(x-1)/2)(4x - p/x), x = 1 (mod 3)", with_repr(rep3x, |inp, x, _| {
                Ok((inp.int(4 * x) - inp.frac(pi(inp), x)?) * neg_one_pow((pi(inp) - 1) / 4 + (x - 1) / 2))
            })),
        conj("Conj5.8i-b", c58i, ModP2, t64)
            .min_prime(5)
            .guard(p_in(12, &[1]))
            .rhs("(-1)^((x-1)/2)(4x - p/x)", with_repr(rep3x, |inp, x, _| {
                Ok((inp.int(4 * x) - inp.frac(pi(inp), x)?) * neg_one_pow((x - 1) / 2))
            })),
        conj("Conj5.8i-c", c58i, ModP2, t4.with_k())
            .min_prime(5)
            .guard(p_in(12, &[1]))
            .rhs("(-1)^((p-1)/4+(x+1)/2)(4x - 2p/x)", with_repr(rep3x, |inp, x, _| {
                Ok((inp.int(4 * x) - inp.frac(2 * pi(inp), x)?) * neg_one_pow((pi(inp) - 1) / 4 + (x + 1) / 2))
            })),
        conj("Conj5.8i-d", c58i, ModP2, t64.with_k())
            .min_prime(5)
            .guard(p_in(12, &[1]))
            .rhs("(-1)^((x-1)/2)(2x - p/x)", with_repr(rep3x, |inp, x, _| {
                Ok((inp.int(2 * x) - inp.frac(pi(inp), x)?) * neg_one_pow((x - 1) / 2))
            })),
        conj("Conj5.8ii-a", c58ii, ModP2, t4)
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("(-1)^((p-3)/4)(12y - p/y)", with_repr(rep3y, |inp, _, y| {
                Ok((inp.int(12 * y) - inp.frac(pi(inp), y)?) * neg_one_pow((pi(inp) - 3) / 4))
            })),
        conj("Conj5.8ii-b", c58ii, ModP2, t4.with_k())
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("(-1)^((p+1)/4)(20y - 8p/y)", with_repr(rep3y, |inp, _, y| {
                Ok((inp.int(20 * y) - inp.frac(8 * pi(inp), y)?) * neg_one_pow((pi(inp) + 1) / 4))
            })),
        conj("Conj5.8ii-c", c58ii, ModP2, t64.with_k())
            .min_prime(5)
            .guard(p_in(12, &[7]))
            .rhs("4y", with_repr(rep3y, |inp, _, y| Ok(inp.int(4 * y)))),
        conj("Conj5.8iii-a", c58iii, ModP, t4).min_prime(5).guard(p_in(12, &[5])),
        conj("Conj5.8iii-b", c58iii, ModP, t64).min_prime(5).guard(p_in(12, &[5])),
        conj("Conj5.8iii-c", c58iii, ModP2, SumSpec::new(Weight::V(ST), Kernel::CentralPm1, 1, -4))
            .min_prime(5)
            .guard(p_in(12, &[11])),
    ]
}

pub(super) fn build() -> Vec<CongruenceCase> {
    let mut out = rodriguez_villegas();
    for (a, m) in [(-1, 1), (-1, -1), (3, 1), (3, -1)] {
        for h in 1..=3 {
            // For m = 1, (A+delta)/2 is a square (a cube root of unity, or the
            // golden ratio squared), so the v branch never applies.
            out.extend(t11_cases(a, m, h).into_iter().filter(|c| m == -1 || c.id.starts_with("T1.1-u")));
        }
    }
    out.extend(t21_cases(1, -1, 3, 2));
    out.extend(corollary_1_1());
    out.extend(corollary_1_2());
    out.extend(t12_cases(7, 1, ""));
    out.extend(corollaries_1_3_to_1_6());
    out.extend(t13_cases(1, -1, 12));
    out.extend(t13_cases(3, -1, 7));
    out.extend(corollaries_1_7_to_1_10());
    out.extend(theorems_1_4_and_1_5());
    out.extend(extras());
    out.extend(lemma_3_1());
    out.extend(conjectures());
    out
}
