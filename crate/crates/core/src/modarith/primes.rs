use std::fmt;

use super::{ArithError, Modulus, MAX_MODULUS};

const SIMPLE_SIEVE_LIMIT: u64 = 1 << 20;
const SEGMENT: u64 = 1 << 16;

/// An odd prime `p`, an exponent `a >= 1`, and `q = p^a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u64,
    a: u32,
    q: u64,
}

impl fmt::Debug for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.a)
        }
    }
}

impl PrimePower {
    pub fn new(p: u64, a: u32) -> Result<Self, ArithError> {
        if p < 3 || !is_prime(p) {
            return Err(ArithError::NotOddPrime(p));
        }
        let q = (1..a)
            .try_fold(p, |acc, _| acc.checked_mul(p))
            .filter(|&q| a >= 1 && q <= MAX_MODULUS)
            .ok_or(ArithError::ModulusOutOfRange(p))?;
        Ok(PrimePower { p, a, q })
    }

    pub fn prime(p: u64) -> Result<Self, ArithError> {
        Self::new(p, 1)
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn exponent(self) -> u32 {
        self.a
    }

    pub fn q(self) -> u64 {
        self.q
    }

    /// `(p^a - 1) / 2`.
    pub fn half(self) -> u64 {
        (self.q - 1) / 2
    }

    pub fn modulus(self) -> Modulus {
        Modulus::new(self.q).expect("validated at construction")
    }

    /// The same prime raised to a different exponent.
    pub fn with_exponent(self, a: u32) -> Result<Self, ArithError> {
        Self::new(self.p, a)
    }
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, n);
        }
        b = mul_mod(b, b, n);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve primes as witnesses cover all of u64.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn simple_sieve(limit: u64) -> Vec<bool> {
    let n = limit as usize + 1;
    let mut composite = vec![false; n];
    composite[0] = true;
    if n > 1 {
        composite[1] = true;
    }
    let mut i = 2;
    while i * i < n {
        if !composite[i] {
            for j in (i * i..n).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    composite
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    if hi < SIMPLE_SIEVE_LIMIT {
        let composite = simple_sieve(hi);
        return (lo.max(2)..=hi)
            .filter(|&n| !composite[n as usize])
            .collect();
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let small: Vec<u64> = {
        let c = simple_sieve(root);
        (2..=root).filter(|&n| !c[n as usize]).collect()
    };
    let mut out = Vec::new();
    let mut start = lo.max(2);
    while start <= hi {
        let end = hi.min(start.saturating_add(SEGMENT - 1));
        let mut composite = vec![false; (end - start + 1) as usize];
        for &sp in &small {
            if sp * sp > end {
                break;
            }
            let first = (start.div_ceil(sp) * sp).max(sp * sp);
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += sp;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn examples() {
        assert_eq!(primes_in(2, 12), vec![2, 3, 5, 7, 11]);
        assert!(primes_in(14, 16).is_empty());
        assert_eq!(primes_in(9973, 9973), vec![9973]);
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(!is_prime(121));
        assert!(!is_prime(0));
    }

    #[test]
    fn sieve_matches_trial_division() {
        let ps = primes_in(0, 5000);
        let expected: Vec<u64> = (0..=5000).filter(|&n| trial(n)).collect();
        assert_eq!(ps, expected);
    }

    #[test]
    fn segmented_sieve_matches_miller_rabin() {
        let lo = SIMPLE_SIEVE_LIMIT - 3000;
        let hi = SIMPLE_SIEVE_LIMIT + 200_000;
        let ps = primes_in(lo, hi);
        let expected: Vec<u64> = (lo..=hi).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, expected);
    }

    #[test]
    fn miller_rabin_hard_cases() {
        // strong pseudoprimes to small bases and a large prime
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_559));
    }

    #[test]
    fn prime_power_construction() {
        let pp = PrimePower::new(7, 3).unwrap();
        assert_eq!(pp.q(), 343);
        assert_eq!(pp.half(), 171);
        assert!(PrimePower::new(9, 1).is_err());
        assert!(PrimePower::new(2, 1).is_err());
        assert!(PrimePower::new(1_000_003, 3).is_err());
    }
}
