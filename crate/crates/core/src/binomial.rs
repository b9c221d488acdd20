//! Binomial coefficients modulo `p^a`.
//!
//! Values are carried as [`ValuedUnit`]s, `p^e * u` with `u` a unit mod `p^a`,
//! so that recurrences dividing by multiples of `p` stay exact.

use std::fmt;

use crate::modarith::{Modulus, PrimePower, Residue};

/// `p^valuation * unit`, with `unit` a unit modulo `p^a`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct ValuedUnit {
    pub valuation: u32,
    pub unit: Residue,
    pp: PrimePower,
}

impl fmt::Debug for ValuedUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}*{}", self.pp.p(), self.valuation, self.unit)
    }
}

impl ValuedUnit {
    pub fn one(pp: PrimePower) -> Self {
        ValuedUnit {
            valuation: 0,
            unit: pp.modulus().one(),
            pp,
        }
    }

    /// Splits a positive integer into its `p`-adic valuation and unit part.
    pub fn from_integer(n: u64, pp: PrimePower) -> Self {
        assert!(n > 0, "zero has no unit part");
        let (valuation, rest) = strip(n, pp.p());
        ValuedUnit {
            valuation,
            unit: pp.modulus().residue(rest),
            pp,
        }
    }

    pub fn prime_power(self) -> PrimePower {
        self.pp
    }

    /// The integer `p^e * u` reduced modulo `p^a`.
    pub fn value(self) -> Residue {
        let m = self.pp.modulus();
        if self.valuation >= self.pp.exponent() {
            return m.zero();
        }
        self.unit * m.residue(self.pp.p().pow(self.valuation))
    }

    pub fn pow(self, h: u32) -> Self {
        ValuedUnit {
            valuation: self.valuation * h,
            unit: self.unit.pow(h as u64),
            pp: self.pp,
        }
    }

    /// Division; `None` if the quotient would have negative valuation.
    pub fn checked_div(self, rhs: Self) -> Option<Self> {
        Some(ValuedUnit {
            valuation: self.valuation.checked_sub(rhs.valuation)?,
            unit: self.unit * rhs.unit.inv().expect("units are invertible"),
            pp: self.pp,
        })
    }
}

impl std::ops::Mul for ValuedUnit {
    type Output = ValuedUnit;
    fn mul(self, rhs: ValuedUnit) -> ValuedUnit {
        ValuedUnit {
            valuation: self.valuation + rhs.valuation,
            unit: self.unit * rhs.unit,
            pp: self.pp,
        }
    }
}

#[inline]
fn strip(mut n: u64, p: u64) -> (u32, u64) {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    (e, n)
}

/// Raw stepping state shared by the central-binomial and Catalan streams.
#[derive(Debug, Clone)]
struct ValuedState {
    p: u64,
    m: Modulus,
    valuation: u32,
    unit: u64,
    // inverse of the unit part of n, for n = 1..=max_divisor
    inv_units: Vec<u64>,
}

impl ValuedState {
    fn new(pp: PrimePower, max_divisor: u64) -> Self {
        let m = pp.modulus();
        let p = pp.p();
        let n = max_divisor as usize;
        // batch inversion: one modular inverse for the whole table
        let mut prefix = vec![1u64; n + 1];
        for i in 1..=n {
            prefix[i] = m.mul(prefix[i - 1], m.reduce_u64(strip(i as u64, p).1));
        }
        let mut inv_units = vec![1u64; n + 1];
        let mut acc = m.inv(prefix[n]).expect("unit parts are invertible");
        for i in (1..=n).rev() {
            inv_units[i] = m.mul(acc, prefix[i - 1]);
            acc = m.mul(acc, m.reduce_u64(strip(i as u64, p).1));
        }
        ValuedState {
            p,
            m,
            valuation: 0,
            unit: 1,
            inv_units,
        }
    }

    #[inline]
    fn times(&mut self, n: u64) {
        let (e, u) = strip(n, self.p);
        self.valuation += e;
        self.unit = self.m.mul(self.unit, self.m.reduce_u64(u));
    }

    #[inline]
    fn divide(&mut self, n: u64) {
        let (e, u) = strip(n, self.p);
        debug_assert!(u > 0);
        self.valuation -= e;
        self.unit = self.m.mul(self.unit, self.inv_units[n as usize]);
    }

    fn emit(&self, pp: PrimePower) -> ValuedUnit {
        ValuedUnit {
            valuation: self.valuation,
            unit: self.m.residue(self.unit),
            pp,
        }
    }
}

/// `binom(2k, k)` for `k = 0..=kmax`, via `binom(2k+2, k+1) = binom(2k, k) * 2(2k+1)/(k+1)`.
#[derive(Debug, Clone)]
pub struct CentralBinomStream {
    pp: PrimePower,
    state: ValuedState,
    k: u64,
    kmax: u64,
}

pub fn central_binom_stream(pp: PrimePower, kmax: u64) -> CentralBinomStream {
    CentralBinomStream {
        pp,
        state: ValuedState::new(pp, kmax + 1),
        k: 0,
        kmax,
    }
}

impl Iterator for CentralBinomStream {
    type Item = ValuedUnit;

    fn next(&mut self) -> Option<ValuedUnit> {
        if self.k > self.kmax {
            return None;
        }
        let out = self.state.emit(self.pp);
        let k = self.k;
        self.state.times(2 * (2 * k + 1));
        self.state.divide(k + 1);
        self.k += 1;
        Some(out)
    }
}

/// Catalan numbers `C_k = binom(2k, k)/(k+1)` for `k = 0..=kmax`.
#[derive(Debug, Clone)]
pub struct CatalanStream {
    pp: PrimePower,
    state: ValuedState,
    k: u64,
    kmax: u64,
}

pub fn catalan_stream(pp: PrimePower, kmax: u64) -> CatalanStream {
    CatalanStream {
        pp,
        state: ValuedState::new(pp, kmax + 2),
        k: 0,
        kmax,
    }
}

impl Iterator for CatalanStream {
    type Item = ValuedUnit;

    fn next(&mut self) -> Option<ValuedUnit> {
        if self.k > self.kmax {
            return None;
        }
        let out = self.state.emit(self.pp);
        let k = self.k;
        self.state.times(2 * (2 * k + 1));
        self.state.divide(k + 2);
        self.k += 1;
        Some(out)
    }
}

/// Prefix products of the integers in `[1, p^a)` prime to `p`, modulo `p^a`.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    pp: PrimePower,
    prefix: Vec<u64>,
}

impl FactorialTable {
    pub fn new(pp: PrimePower) -> Self {
        let m = pp.modulus();
        let q = pp.q();
        let mut prefix = Vec::with_capacity(q as usize);
        let mut acc = 1 % q;
        prefix.push(acc);
        for i in 1..q {
            if i % pp.p() != 0 {
                acc = m.mul(acc, i);
            }
            prefix.push(acc);
        }
        FactorialTable { pp, prefix }
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    /// `n! = p^e * u` using `n! = p^(n/p) * (n/p)! * prod_{i<=n, p∤i} i`.
    pub fn factorial(&self, n: u64) -> ValuedUnit {
        let m = self.pp.modulus();
        let (p, q) = (self.pp.p(), self.pp.q());
        let full = self.prefix[(q - 1) as usize];
        let mut valuation = 0u32;
        let mut unit = 1 % q;
        let mut n = n;
        while n > 0 {
            let block = m.mul(m.pow(full, n / q), self.prefix[(n % q) as usize]);
            unit = m.mul(unit, block);
            n /= p;
            valuation += n as u32;
        }
        ValuedUnit {
            valuation,
            unit: m.residue(unit),
            pp: self.pp,
        }
    }

    pub fn binom(&self, n: u64, k: u64) -> ValuedUnit {
        assert!(k <= n, "binom({n}, {k}) with k > n");
        let den = self.factorial(k) * self.factorial(n - k);
        self.factorial(n)
            .checked_div(den)
            .expect("binomial valuations are non-negative")
    }
}

/// `n!` as `p^e * u` modulo `p^a`.
pub fn factorial_vp(n: u64, pp: PrimePower) -> ValuedUnit {
    FactorialTable::new(pp).factorial(n)
}

/// `binom(n, k)` as `p^e * u` modulo `p^a`.
pub fn binom_vp(n: u64, k: u64, pp: PrimePower) -> ValuedUnit {
    FactorialTable::new(pp).binom(n, k)
}

/// Factorials and inverse factorials modulo `p`, for Lucas' theorem.
#[derive(Debug, Clone)]
pub struct LucasBinomial {
    m: Modulus,
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl LucasBinomial {
    pub fn new(p: u64) -> Self {
        let m = Modulus::new(p).expect("prime modulus");
        let mut fact = vec![1u64; p as usize];
        for i in 1..p as usize {
            fact[i] = m.mul(fact[i - 1], i as u64);
        }
        let mut inv_fact = vec![1u64; p as usize];
        inv_fact[p as usize - 1] = m.inv(fact[p as usize - 1]).expect("(p-1)! is a unit");
        for i in (1..p as usize).rev() {
            inv_fact[i - 1] = m.mul(inv_fact[i], i as u64);
        }
        LucasBinomial {
            m,
            p,
            fact,
            inv_fact,
        }
    }

    #[inline]
    pub fn binom_raw(&self, mut n: u64, mut k: u64) -> u64 {
        let m = self.m;
        let mut acc = 1u64;
        while k > 0 || n > 0 {
            let (nd, kd) = ((n % self.p) as usize, (k % self.p) as usize);
            if kd > nd {
                return 0;
            }
            acc = m.mul(acc, m.mul(self.fact[nd], m.mul(self.inv_fact[kd], self.inv_fact[nd - kd])));
            n /= self.p;
            k /= self.p;
        }
        acc
    }

    pub fn binom(&self, n: u64, k: u64) -> Residue {
        if k > n {
            return self.m.zero();
        }
        self.m.residue(self.binom_raw(n, k))
    }
}

/// `binom(n, k) mod p` by Lucas' theorem.
pub fn binom_mod_p_lucas(n: u64, k: u64, p: u64) -> Residue {
    LucasBinomial::new(p).binom(n, k)
}

/// `binom((p^a - 1)/2, k) mod p` for `k = 0..=kmax`.
pub fn half_binom_stream(pp: PrimePower, kmax: u64) -> impl Iterator<Item = Residue> {
    let table = LucasBinomial::new(pp.p());
    let n = pp.half();
    (0..=kmax).map(move |k| table.binom(n, k))
}

/// `binom(p - 1, k) mod p^a` for `k = 0..=p-1`.
pub fn binom_pm1_stream(pp: PrimePower) -> impl Iterator<Item = Residue> {
    let m = pp.modulus();
    let p = pp.p();
    let mut current = m.one();
    (0..p).map(move |k| {
        let out = current;
        if k + 1 < p {
            let step = m.residue(p - 1 - k) * m.residue(k + 1).inv().expect("k+1 < p");
            current *= step;
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;

    fn pp(p: u64, a: u32) -> PrimePower {
        PrimePower::new(p, a).unwrap()
    }

    fn exact_binom(n: u64, k: u64) -> BigUint {
        let mut acc = BigUint::from(1u32);
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    fn exact_mod(v: &BigUint, q: u64) -> u64 {
        (v % q).to_u64().unwrap()
    }

    #[test]
    fn central_examples() {
        let small: Vec<u64> = central_binom_stream(pp(1_000_003, 1), 4)
            .map(|v| v.value().value())
            .collect();
        assert_eq!(small, vec![1, 2, 6, 20, 70]);
        let c = central_binom_stream(pp(5, 2), 4).last().unwrap();
        assert_eq!((c.valuation, c.value().value()), (1, 20));
        let c = central_binom_stream(pp(7, 2), 5).last().unwrap();
        assert_eq!((c.valuation, c.unit.value()), (1, 36));
    }

    #[test]
    fn central_matches_big_integers() {
        for p in [5, 7, 11, 13] {
            for a in 1..=3 {
                let pp = pp(p, a);
                let mut exact = BigUint::from(1u32);
                for (k, got) in central_binom_stream(pp, 500).enumerate() {
                    let k = k as u64;
                    assert_eq!(got.value().value(), exact_mod(&exact, pp.q()), "k={k} {pp:?}");
                    exact = exact * (2 * (2 * k + 1)) / (k + 1);
                }
            }
        }
    }

    #[test]
    fn factorial_examples() {
        let f = factorial_vp(0, pp(5, 2));
        assert_eq!((f.valuation, f.unit.value()), (0, 1));
        let f = factorial_vp(5, pp(5, 2));
        assert_eq!((f.valuation, f.unit.value()), (1, 24));
        let f = factorial_vp(10, pp(5, 2));
        assert_eq!((f.valuation, f.unit.value()), (2, 2));
    }

    #[test]
    fn binom_vp_examples() {
        let b = binom_vp(6, 3, pp(5, 2));
        assert_eq!((b.valuation, b.unit.value()), (1, 4));
        let b = binom_vp(17, 0, pp(5, 2));
        assert_eq!((b.valuation, b.unit.value()), (0, 1));
        let b = binom_vp(10, 5, pp(7, 2));
        assert_eq!((b.valuation, b.unit.value()), (1, 36));
    }

    #[test]
    fn binom_vp_matches_big_integers() {
        for (p, a) in [(3, 3), (5, 2), (7, 2), (11, 1), (13, 2)] {
            let t = FactorialTable::new(pp(p, a));
            for n in (0..300).step_by(7) {
                for k in 0..=n {
                    assert_eq!(t.binom(n, k).value().value(), exact_mod(&exact_binom(n, k), t.pp.q()));
                }
            }
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(binom_mod_p_lucas(6, 3, 5).value(), 0);
        assert_eq!(binom_mod_p_lucas(6, 2, 7).value(), 1);
        assert_eq!(binom_mod_p_lucas(12345, 0, 13).value(), 1);
        assert_eq!(binom_mod_p_lucas(3, 4, 7).value(), 0);
    }

    #[test]
    fn valuation_agrees_with_lucas_theorem() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for p in [3u64, 5, 7, 11, 101] {
            let lucas = LucasBinomial::new(p);
            let t = FactorialTable::new(pp(p, 2));
            for _ in 0..1000 {
                let n = rng.gen_range(0..10_000);
                let k = rng.gen_range(0..=n);
                let vu = t.binom(n, k);
                let l = lucas.binom(n, k).value();
                if vu.valuation == 0 {
                    assert_eq!(vu.unit.value() % p, l);
                } else {
                    assert_eq!(l, 0);
                }
            }
        }
    }

    #[test]
    fn half_binomial_congruence() {
        for pp in [pp(7, 1), pp(3, 2), pp(5, 2), pp(3, 3), pp(7, 2), pp(11, 2), pp(7, 3)] {
            let m = Modulus::new(pp.p()).unwrap();
            let inv4 = m.from_i64(-4).inv().unwrap();
            let central = central_binom_stream(pp.with_exponent(1).unwrap(), pp.q() - 1);
            for (k, (half, c)) in half_binom_stream(pp, pp.q() - 1).zip(central).enumerate() {
                assert_eq!(half, c.value() * inv4.pow(k as u64), "{pp:?} k={k}");
            }
        }
        let v: Vec<u64> = half_binom_stream(pp(7, 1), 4).map(|r| r.value()).collect();
        assert_eq!(v, vec![1, 3, 3, 1, 0]);
    }

    #[test]
    fn catalan_examples_and_recurrence() {
        let v: Vec<u64> = catalan_stream(pp(1_000_003, 1), 5)
            .map(|c| c.value().value())
            .collect();
        assert_eq!(v, vec![1, 1, 2, 5, 14, 42]);
        let c5 = catalan_stream(pp(7, 2), 5).last().unwrap();
        assert_eq!((c5.valuation, c5.value().value()), (1, 42));
        let c3 = catalan_stream(pp(5, 2), 3).last().unwrap();
        assert_eq!((c3.valuation, c3.unit.value()), (1, 1));
        for p in [5u64, 7, 11, 13, 97] {
            let pp = pp(p, 2);
            let cs: Vec<ValuedUnit> = catalan_stream(pp, p - 1).collect();
            for k in 0..(p - 2) as usize {
                let lhs = ValuedUnit::from_integer(k as u64 + 2, pp) * cs[k + 1];
                let rhs = ValuedUnit::from_integer(4 * k as u64 + 2, pp) * cs[k];
                assert_eq!(lhs, rhs, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn binom_pm1_examples() {
        let v: Vec<u64> = binom_pm1_stream(pp(5, 2)).map(|r| r.value()).collect();
        assert_eq!(v, vec![1, 4, 6, 4, 1]);
        let p = 13;
        for (k, r) in binom_pm1_stream(pp(p, 2)).enumerate() {
            assert_eq!(r.value(), exact_mod(&exact_binom(p - 1, k as u64), p * p));
            let sign = if k % 2 == 0 { 1 } else { p - 1 };
            assert_eq!(r.value() % p, sign);
        }
    }
}
