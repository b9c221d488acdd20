//! Truncated power series with exact integer coefficients, and the
//! coefficients `a(n)` of `q * prod_{n>=1} (1 - q^{4n})^6`.

use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

/// A power series truncated after `q^order`; coefficients beyond the order are never read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries<T> {
    coefficients: Vec<T>,
}

impl<T> QSeries<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    pub fn from_coefficients(mut coefficients: Vec<T>, order: usize) -> Self {
        coefficients.resize(order + 1, T::zero());
        QSeries { coefficients }
    }

    pub fn one(order: usize) -> Self {
        Self::from_coefficients(vec![T::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> T {
        self.coefficients.get(n).cloned().unwrap_or_else(T::zero)
    }

    /// Truncated Cauchy product; both operands must share the order.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let n = self.coefficients.len();
        let mut out = vec![T::zero(); n];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        QSeries { coefficients: out }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(e >= 1, "series_pow needs a positive exponent");
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.expect("e >= 1")
    }
}

pub fn series_mul<T>(s: &QSeries<T>, t: &QSeries<T>) -> QSeries<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    s.mul(t)
}

pub fn series_pow<T>(s: &QSeries<T>, e: u32) -> QSeries<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    s.pow(e)
}

/// `prod_{n>=1} (1 - q^{step*n})` up to `q^order`, from the pentagonal number theorem.
pub fn euler_product<T>(step: usize, order: usize) -> QSeries<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    assert!(step >= 1);
    let mut coefficients = vec![T::zero(); order + 1];
    coefficients[0] = T::one();
    // generalized pentagonal numbers k(3k-1)/2 for k = ±1, ±2, ... with sign (-1)^k
    for k in 1usize.. {
        let first = k * (3 * k - 1) / 2 * step;
        if first > order {
            break;
        }
        let sign = if k % 2 == 1 { -T::one() } else { T::one() };
        coefficients[first] = sign.clone();
        let second = k * (3 * k + 1) / 2 * step;
        if second <= order {
            coefficients[second] = sign;
        }
    }
    QSeries { coefficients }
}

/// `a(1..=n)` where `sum a(n) q^n = q prod (1 - q^{4n})^6`, as exact `i64`s.
pub fn a_coeffs(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    let product = euler_product::<i128>(4, n - 1).pow(6);
    product
        .coefficients()
        .iter()
        .map(|&c| i64::try_from(c).expect("coefficient fits in i64"))
        .collect()
}
