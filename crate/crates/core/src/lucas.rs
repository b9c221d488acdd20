//! Lucas sequences `u_n(A, B)`, `v_n(A, B)` modulo an arbitrary modulus and
//! closed forms for selected indices modulo a prime.

use thiserror::Error;

use crate::modarith::{legendre, Modulus, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LucasError {
    #[error("delta {delta} does not satisfy delta^2 = {discriminant} (mod {p})")]
    BadDelta { delta: i64, discriminant: i128, p: u64 },
    #[error("{p} divides delta; u_n cannot be recovered from delta*u_n")]
    DeltaDividesP { p: u64 },
    #[error("closed form not applicable: {0}")]
    Inapplicable(String),
}

/// The parameter pair `(A, B)` of `x_{n+1} = A x_n - B x_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LucasParams {
    pub a: i64,
    pub b: i64,
}

impl LucasParams {
    pub const fn new(a: i64, b: i64) -> Self {
        LucasParams { a, b }
    }

    /// Fibonacci `F_n` and Lucas numbers `L_n`.
    pub const FIBONACCI: LucasParams = LucasParams::new(1, -1);
    /// Pell numbers `P_n` and their companion `Q_n`.
    pub const PELL: LucasParams = LucasParams::new(2, -1);
    /// `S_n = u_n(4, 1)` and `T_n = v_n(4, 1)`.
    pub const ST: LucasParams = LucasParams::new(4, 1);
    /// `u_k(3, 1) = F_{2k}`, `v_k(3, 1) = L_{2k}`.
    pub const FIBONACCI_EVEN: LucasParams = LucasParams::new(3, 1);
    /// `u_k(-1, 1)` is the character `(k/3)`.
    pub const CHAR3: LucasParams = LucasParams::new(-1, 1);

    /// `A^2 - 4B`, exact.
    pub fn discriminant(self) -> i128 {
        self.a as i128 * self.a as i128 - 4 * self.b as i128
    }
}

/// `(u_n, v_n) mod q` by fast doubling on the pair `(u_n, u_{n+1})`.
pub fn lucas_pair(n: u64, params: LucasParams, q: Modulus) -> (Residue, Residue) {
    let a = q.reduce_i64(params.a);
    let b = q.reduce_i64(params.b);
    let (mut u0, mut u1) = (0u64, 1 % q.get());
    for bit in (0..64 - n.leading_zeros()).rev() {
        // u_{2k} = u_k (2 u_{k+1} - A u_k), u_{2k+1} = u_{k+1}^2 - B u_k^2
        let v = q.sub(q.mul(2, u1), q.mul(a, u0));
        let even = q.mul(u0, v);
        let odd = q.sub(q.mul(u1, u1), q.mul(b, q.mul(u0, u0)));
        if (n >> bit) & 1 == 1 {
            u0 = odd;
            u1 = q.sub(q.mul(a, odd), q.mul(b, even));
        } else {
            u0 = even;
            u1 = odd;
        }
    }
    let v = q.sub(q.mul(2, u1), q.mul(a, u0));
    (q.residue(u0), q.residue(v))
}

/// Yields `(u_k, v_k) mod q` for `k = 0, 1, 2, ...` with constant work per step.
#[derive(Debug, Clone)]
pub struct LucasStream {
    q: Modulus,
    a: u64,
    b: u64,
    u: (u64, u64),
    v: (u64, u64),
}

pub fn lucas_stream(params: LucasParams, q: Modulus) -> LucasStream {
    let a = q.reduce_i64(params.a);
    LucasStream {
        q,
        a,
        b: q.reduce_i64(params.b),
        u: (0, 1 % q.get()),
        v: (2 % q.get(), a),
    }
}

impl LucasStream {
    /// Advances and returns the raw `(u_k, v_k)` values.
    #[inline]
    pub fn next_raw(&mut self) -> (u64, u64) {
        let q = self.q;
        let out = (self.u.0, self.v.0);
        let un = q.sub(q.mul(self.a, self.u.1), q.mul(self.b, self.u.0));
        let vn = q.sub(q.mul(self.a, self.v.1), q.mul(self.b, self.v.0));
        self.u = (self.u.1, un);
        self.v = (self.v.1, vn);
        out
    }
}

impl Iterator for LucasStream {
    type Item = (Residue, Residue);

    fn next(&mut self) -> Option<Self::Item> {
        let (u, v) = self.next_raw();
        Some((self.q.residue(u), self.q.residue(v)))
    }
}

fn prime_modulus(p: u64) -> Result<Modulus, LucasError> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(LucasError::Inapplicable(format!("{p} is not an odd prime")));
    }
    Modulus::new(p).map_err(|e| LucasError::Inapplicable(e.to_string()))
}

/// `(u_n, v_n) mod p` from `((A±δ)/2)^n`, where `δ^2 ≡ A^2 - 4B (mod p)`.
pub fn delta_reduction(
    n: u64,
    params: LucasParams,
    p: u64,
    delta: i64,
) -> Result<(Residue, Residue), LucasError> {
    let m = prime_modulus(p)?;
    let disc = params.discriminant();
    let d = m.reduce_i64(delta);
    if m.mul(d, d) != m.reduce_i128(disc) {
        return Err(LucasError::BadDelta {
            delta,
            discriminant: disc,
            p,
        });
    }
    if d == 0 {
        return Err(LucasError::DeltaDividesP { p });
    }
    let half = m.inv(2).expect("p odd");
    let a = m.reduce_i64(params.a);
    let alpha = m.mul(m.add(a, d), half);
    let beta = m.mul(m.sub(a, d), half);
    let (an, bn) = (m.pow(alpha, n), m.pow(beta, n));
    let u = m.mul(m.sub(an, bn), m.inv(d).expect("d is a unit"));
    Ok((m.residue(u), m.residue(m.add(an, bn))))
}

/// The three values `u_{(p-1)/2}`, `u_{(p+1)/2}` and `v_{(p-1)/2}` modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfIndexValues {
    pub u_minus: Residue,
    pub u_plus: Residue,
    pub v_minus: Residue,
}

/// Closed forms for the half-index values when `B ≡ b^2 (mod p)` is a nonzero square.
pub fn half_index_values(
    params: LucasParams,
    p: u64,
    b: i64,
) -> Result<HalfIndexValues, LucasError> {
    let m = prime_modulus(p)?;
    if legendre(params.b as i128, p) != 1 {
        return Err(LucasError::Inapplicable(format!(
            "B = {} is not a nonzero square mod {p}",
            params.b
        )));
    }
    if m.mul(m.reduce_i64(b), m.reduce_i64(b)) != m.reduce_i64(params.b) {
        return Err(LucasError::Inapplicable(format!("{b}^2 != B (mod {p})")));
    }
    let disc = legendre(params.discriminant(), p);
    let sym = legendre(params.a as i128 - 2 * b as i128, p) as i64;
    let inv_b = m.from_i64(b).inv().expect("b is a unit");
    let (u_minus, u_plus, v_minus) = match disc {
        1 => (m.zero(), m.from_i64(sym), m.from_i64(2 * sym)),
        -1 => (
            inv_b * sym,
            m.zero(),
            -(m.from_i64(params.a) * inv_b * sym),
        ),
        _ => {
            return Err(LucasError::Inapplicable(format!(
                "{p} divides the discriminant"
            )))
        }
    };
    Ok(HalfIndexValues {
        u_minus,
        u_plus,
        v_minus,
    })
}

/// `F` and `L` at the indices `(p ∓ (p/5))/2`, modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FibLucasHalf {
    pub f_minus: Residue,
    pub f_plus: Residue,
    pub l_minus: Residue,
    pub l_plus: Residue,
}

impl FibLucasHalf {
    /// The indices `((p - (p/5))/2, (p + (p/5))/2)` these values belong to.
    pub fn indices(p: u64) -> (u64, u64) {
        let j = legendre(p as i128, 5) as i64;
        (((p as i64 - j) / 2) as u64, ((p as i64 + j) / 2) as u64)
    }
}

pub fn fib_lucas_half(p: u64) -> Result<FibLucasHalf, LucasError> {
    if p == 5 {
        return Err(LucasError::Inapplicable("p = 5".into()));
    }
    let m = prime_modulus(p)?;
    let sign: i64 = if ((p + 5) / 10).is_multiple_of(2) { 1 } else { -1 };
    let j = legendre(5, p) as i64;
    let five = |e: u64| m.residue(m.pow(5, e));
    let sj = m.from_i64(sign * j);
    Ok(if p % 4 == 1 {
        let f = five((p - 1) / 4);
        FibLucasHalf {
            f_minus: m.zero(),
            f_plus: sj * f,
            l_minus: sj * f * 2,
            l_plus: f * sign,
        }
    } else {
        let f = five((p - 3) / 4);
        FibLucasHalf {
            f_minus: sj * f * 2,
            // L_lo = 0 forces F_hi = sign * 5^((p-3)/4), without the (5/p) factor
            f_plus: f * sign,
            l_minus: m.zero(),
            l_plus: sj * five((p + 1) / 4),
        }
    })
}

/// `(k/3)`: 0, 1, -1 for `k ≡ 0, 1, 2 (mod 3)`.
pub fn char3(k: u64) -> i8 {
    match k % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}
