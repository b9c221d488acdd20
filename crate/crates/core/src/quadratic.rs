//! Square roots modulo `p` and `p^2`, and representations of primes by
//! `x^2 + 2y^2` and `x^2 + 3y^2` with sign normalization.

use std::fmt;

use thiserror::Error;

use crate::modarith::{legendre, Modulus, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{a} is a quadratic non-residue modulo {p}")]
    NonResidue { a: i64, p: u64 },
    #[error("{a} is divisible by {p}; no unit square root")]
    NotUnit { a: i64, p: u64 },
    #[error("{x}^2 + {d}*{y}^2 != {p}")]
    NotARepresentation { p: u64, d: u64, x: i64, y: i64 },
    #[error("no sign choice of ({x}, {y}) satisfies {condition}")]
    Unsatisfiable {
        x: i64,
        y: i64,
        condition: ReprCondition,
    },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

/// Sign-normalization conditions on a representation `p = x^2 + D y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReprCondition {
    /// x ≡ 1, 3 (mod 8)
    XMod8In13,
    /// x ≡ 1 (mod 3)
    XMod3Eq1,
    /// y ≡ 1 (mod 4)
    YMod4Eq1,
    /// y ≡ 1, 3 (mod 8)
    YMod8In13,
}

impl ReprCondition {
    pub fn holds(self, x: i64, y: i64) -> bool {
        match self {
            ReprCondition::XMod8In13 => matches!(x.rem_euclid(8), 1 | 3),
            ReprCondition::XMod3Eq1 => x.rem_euclid(3) == 1,
            ReprCondition::YMod4Eq1 => y.rem_euclid(4) == 1,
            ReprCondition::YMod8In13 => matches!(y.rem_euclid(8), 1 | 3),
        }
    }

    fn on_x(self) -> bool {
        matches!(self, ReprCondition::XMod8In13 | ReprCondition::XMod3Eq1)
    }

    pub fn tag(self) -> &'static str {
        match self {
            ReprCondition::XMod8In13 => "x1,3mod8",
            ReprCondition::XMod3Eq1 => "x1mod3",
            ReprCondition::YMod4Eq1 => "y1mod4",
            ReprCondition::YMod8In13 => "y1,3mod8",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [
            ReprCondition::XMod8In13,
            ReprCondition::XMod3Eq1,
            ReprCondition::YMod4Eq1,
            ReprCondition::YMod8In13,
        ]
        .into_iter()
        .find(|c| c.tag() == tag)
    }
}

impl fmt::Display for ReprCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `p = x^2 + d*y^2` after sign normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRepr {
    pub p: u64,
    pub d: u64,
    pub x: i64,
    pub y: i64,
    pub conditions: Vec<ReprCondition>,
}

fn check_odd_prime(p: u64) -> Result<Modulus, QuadError> {
    if p < 3 || !crate::modarith::is_prime(p) {
        return Err(QuadError::NotOddPrime(p));
    }
    Modulus::new(p).map_err(|_| QuadError::NotOddPrime(p))
}

fn canonical(r: u64, q: u64) -> u64 {
    r.min(q - r)
}

/// Tonelli–Shanks; returns the smaller of the two roots, or 0 for `a ≡ 0`.
pub fn sqrt_mod_p(a: i64, p: u64) -> Result<Residue, QuadError> {
    let m = check_odd_prime(p)?;
    let n = m.reduce_i64(a);
    if n == 0 {
        return Ok(m.zero());
    }
    if legendre(n as i128, p) != 1 {
        return Err(QuadError::NonResidue { a, p });
    }
    let root = if p % 4 == 3 {
        m.pow(n, (p + 1) / 4)
    } else {
        let s = (p - 1).trailing_zeros();
        let odd = (p - 1) >> s;
        let z = (2..p)
            .find(|&z| legendre(z as i128, p) == -1)
            .expect("non-residue exists");
        let mut c = m.pow(z, odd);
        let mut x = m.pow(n, odd.div_ceil(2));
        let mut t = m.pow(n, odd);
        let mut e = s;
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = m.mul(t2, t2);
                i += 1;
            }
            let b = m.pow(c, 1 << (e - i - 1));
            x = m.mul(x, b);
            c = m.mul(b, b);
            t = m.mul(t, c);
            e = i;
        }
        x
    };
    debug_assert_eq!(m.mul(root, root), n);
    Ok(m.residue(canonical(root, p)))
}

/// Hensel-lifted square root modulo `p^2`, canonical (smaller) choice.
pub fn sqrt_mod_p2(a: i64, p: u64) -> Result<Residue, QuadError> {
    let r = sqrt_mod_p(a, p)?.value();
    if r == 0 {
        return Err(QuadError::NotUnit { a, p });
    }
    let q = p.checked_mul(p).ok_or(QuadError::NotOddPrime(p))?;
    let m2 = Modulus::new(q).map_err(|_| QuadError::NotOddPrime(p))?;
    let f = m2.sub(m2.mul(r, r), m2.reduce_i64(a));
    let inv = m2.inv(m2.mul(2, r)).expect("2r is a unit mod p^2");
    let lifted = m2.sub(r, m2.mul(f, inv));
    debug_assert_eq!(m2.mul(lifted, lifted), m2.reduce_i64(a));
    Ok(m2.residue(canonical(lifted, q)))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Positive solution of `x^2 + d*y^2 = p` by Cornacchia's descent, if any.
pub fn cornacchia(p: u64, d: u64) -> Option<(u64, u64)> {
    if p < 3 || d == 0 || p.is_multiple_of(d) || !crate::modarith::is_prime(p) {
        return None;
    }
    let root = sqrt_mod_p(-(d as i64), p).ok()?.value();
    let (mut a, mut b) = (p, p - root);
    let limit = isqrt(p);
    while b > limit {
        (a, b) = (b, a % b);
    }
    let rest = p - b * b;
    if !rest.is_multiple_of(d) {
        return None;
    }
    let y2 = rest / d;
    let y = isqrt(y2);
    (y * y == y2 && y > 0).then_some((b, y))
}

/// Flips the signs of `x` and `y` independently so that every condition holds.
pub fn normalize_repr(
    p: u64,
    d: u64,
    x: i64,
    y: i64,
    conditions: &[ReprCondition],
) -> Result<QuadRepr, QuadError> {
    let value = x as i128 * x as i128 + d as i128 * y as i128 * y as i128;
    if value != p as i128 {
        return Err(QuadError::NotARepresentation { p, d, x, y });
    }
    let pick = |v: i64, on_x: bool| -> Result<i64, QuadError> {
        let relevant: Vec<_> = conditions.iter().filter(|c| c.on_x() == on_x).collect();
        let ok = |cand: i64| {
            relevant.iter().all(|c| {
                if on_x {
                    c.holds(cand, 0)
                } else {
                    c.holds(0, cand)
                }
            })
        };
        if ok(v.abs()) {
            Ok(v.abs())
        } else if ok(-v.abs()) {
            Ok(-v.abs())
        } else {
            Err(QuadError::Unsatisfiable {
                x,
                y,
                condition: *relevant[0],
            })
        }
    };
    Ok(QuadRepr {
        p,
        d,
        x: pick(x, true)?,
        y: pick(y, false)?,
        conditions: conditions.to_vec(),
    })
}

/// Cornacchia followed by normalization; `None` when `p` is not represented.
pub fn represent(p: u64, d: u64, conditions: &[ReprCondition]) -> Option<Result<QuadRepr, QuadError>> {
    let (x, y) = cornacchia(p, d)?;
    Some(normalize_repr(p, d, x as i64, y as i64, conditions))
}
