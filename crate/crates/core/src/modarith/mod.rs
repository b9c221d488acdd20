//! Fixed-width modular arithmetic, Jacobi symbols and prime generation.
//!
//! Every modulus is capped at [`MAX_MODULUS`] so that products fit in a
//! 128-bit intermediate. Moduli below 2^32 take a Barrett fast path; the
//! representation is always the plain residue in `[0, q)`.

mod jacobi;
mod primes;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use thiserror::Error;

pub use jacobi::{jacobi, jacobi_pp, legendre};
pub use primes::{is_prime, primes_in, PrimePower};

/// Largest supported modulus (2^40).
pub const MAX_MODULUS: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    EvenModulus(u64),
    #[error("modulus {0} outside supported range [2, 2^40]")]
    ModulusOutOfRange(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
}

/// A modulus together with its precomputed reduction constant.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    q: u64,
    // floor((2^64 - 1) / q) when q < 2^32, otherwise 0 (u128 path).
    barrett: u64,
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({})", self.q)
    }
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self, ArithError> {
        if !(2..=MAX_MODULUS).contains(&q) {
            return Err(ArithError::ModulusOutOfRange(q));
        }
        let barrett = if q < (1 << 32) { u64::MAX / q } else { 0 };
        Ok(Modulus { q, barrett })
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.q
    }

    /// Reduces a product-sized value (`x < q^2`).
    #[inline]
    fn reduce_wide(self, x: u128) -> u64 {
        if self.barrett != 0 {
            let x = x as u64;
            let quot = ((x as u128 * self.barrett as u128) >> 64) as u64;
            let mut r = x - quot * self.q;
            while r >= self.q {
                r -= self.q;
            }
            r
        } else {
            (x % self.q as u128) as u64
        }
    }

    #[inline]
    pub fn reduce_u64(self, x: u64) -> u64 {
        x % self.q
    }

    #[inline]
    pub fn reduce_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, x: i128) -> u64 {
        x.rem_euclid(self.q as i128) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce_wide(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64, ArithError> {
        let a = a % self.q;
        let (mut r0, mut r1) = (self.q as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        if r0 != 1 {
            return Err(ArithError::NotInvertible {
                value: a,
                modulus: self.q,
            });
        }
        Ok(t0.rem_euclid(self.q as i128) as u64)
    }

    pub fn residue(self, value: u64) -> Residue {
        Residue {
            value: value % self.q,
            modulus: self,
        }
    }

    pub fn from_i64(self, value: i64) -> Residue {
        Residue {
            value: self.reduce_i64(value),
            modulus: self,
        }
    }

    pub fn zero(self) -> Residue {
        self.residue(0)
    }

    pub fn one(self) -> Residue {
        self.residue(1)
    }
}

/// An integer reduced modulo an explicit modulus; always canonical in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.q)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Residue {
    pub fn new(value: i64, q: u64) -> Result<Self, ArithError> {
        Ok(Modulus::new(q)?.from_i64(value))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    /// The representative in `(-q/2, q/2]`, handy for printing small signed values.
    pub fn signed(self) -> i64 {
        let q = self.modulus.q;
        if self.value > q / 2 {
            self.value as i64 - q as i64
        } else {
            self.value as i64
        }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Residue {
        Residue {
            value: self.modulus.pow(self.value, exp),
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Result<Residue, ArithError> {
        Ok(Residue {
            value: self.modulus.inv(self.value)?,
            modulus: self.modulus,
        })
    }

    /// Reinterprets the value modulo a divisor of the current modulus.
    pub fn reduce_to(self, m: Modulus) -> Residue {
        debug_assert_eq!(self.modulus.q % m.q, 0);
        m.residue(self.value)
    }
}

/// `base^exp mod q`.
pub fn mod_pow(base: Residue, exp: u64) -> Residue {
    base.pow(exp)
}

/// Multiplicative inverse modulo `q`.
pub fn mod_inv(a: Residue) -> Result<Residue, ArithError> {
    a.inv()
}

impl Add for Residue {
    type Output = Residue;
    #[inline]
    fn add(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Residue {
            value: self.modulus.add(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    #[inline]
    fn sub(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Residue {
            value: self.modulus.sub(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    #[inline]
    fn mul(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Residue {
            value: self.modulus.mul(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl Mul<i64> for Residue {
    type Output = Residue;
    fn mul(self, rhs: i64) -> Residue {
        self * self.modulus.from_i64(rhs)
    }
}

impl Add<i64> for Residue {
    type Output = Residue;
    fn add(self, rhs: i64) -> Residue {
        self + self.modulus.from_i64(rhs)
    }
}

impl Sub<i64> for Residue {
    type Output = Residue;
    fn sub(self, rhs: i64) -> Residue {
        self - self.modulus.from_i64(rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Residue) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Residue) {
        *self = *self * rhs;
    }
}
