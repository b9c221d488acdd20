//! Identities used to cross-check the evaluator along an independent route.

use crate::lucas::{half_index_values, lucas_pair, LucasParams};
use crate::modarith::{legendre, Modulus, PrimePower, Residue};
use crate::quadratic::sqrt_mod_p;

use super::{EvalContext, Kernel, ModulusKind, RegistryError, SumSpec, Weight};

fn prime_power(p: u64) -> Result<PrimePower, RegistryError> {
    PrimePower::prime(p).map_err(|e| RegistryError::Inapplicable(e.to_string()))
}

/// `sum binom(2k,k)^2/16^k (x^k - (-1)^((p-1)/2)(1-x)^k) mod p^2`, expected to vanish.
pub fn lemma31_family(p: u64, x: i64) -> Result<Residue, RegistryError> {
    let pp = prime_power(p)?;
    let spec = SumSpec::new(Weight::Lemma31 { x }, Kernel::Central { h: 2 }, 1, 16);
    EvalContext::new(p).eval_sum(&spec, ModulusKind::ModP2, pp)
}

/// Recomputes `sum u_k/m^k binom(2k,k)` and `sum v_k/m^k binom(2k,k)` mod p from
/// `(m/p) * sum ≡ -4 u_n(A', B')` and `(m/p) * sum ≡ v_n(A', B')`, where
/// `n = (p-1)/2`, `A' = 2m - 4A`, `B' = m^2 - 4Am + 16B`, and compares with the
/// streaming evaluator. `u_n`, `v_n` come from the half-index closed forms when
/// `B'` is a nonzero square mod p and from fast doubling otherwise.
pub fn thm13_reduction_check(a: i64, b: i64, m: i64, p: u64) -> Result<bool, RegistryError> {
    let pp = prime_power(p)?;
    if m.rem_euclid(p as i64) == 0 {
        return Err(RegistryError::Inapplicable(format!("{p} divides m = {m}")));
    }
    let params = LucasParams::new(a, b);
    let mut ctx = EvalContext::new(p);
    let lhs_u = ctx.eval_sum(&SumSpec::new(Weight::U(params), Kernel::Central { h: 1 }, 1, m), ModulusKind::ModP, pp)?;
    let lhs_v = ctx.eval_sum(&SumSpec::new(Weight::V(params), Kernel::Central { h: 1 }, 1, m), ModulusKind::ModP, pp)?;

    let reduced = LucasParams::new(2 * m - 4 * a, m * m - 4 * a * m + 16 * b);
    let q = Modulus::new(p).expect("odd prime");
    let n = (p - 1) / 2;
    let closed = if legendre(reduced.b as i128, p) == 1 && legendre(reduced.discriminant(), p) != 0 {
        let root = sqrt_mod_p(reduced.b.rem_euclid(p as i64), p).expect("square");
        half_index_values(reduced, p, root.value() as i64)
            .ok()
            .map(|h| (h.u_minus, h.v_minus))
    } else {
        None
    };
    let (u_n, v_n) = closed.unwrap_or_else(|| lucas_pair(n, reduced, q));
    let s = legendre(m as i128, p) as i64;
    Ok(lhs_u * s == u_n * -4 && lhs_v * s == v_n)
}
