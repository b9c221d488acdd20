//! Streaming evaluation of the left-hand sums.
//!
//! All cases at one prime share an [`EvalContext`]: kernel vectors, kernels
//! scaled by `(num/den)^k`, and Lucas sequences are built once per
//! (modulus, range) and reused. Kernels are stored sparsely since
//! `binom(2k, k)` vanishes mod p for half of the range.

use std::collections::HashMap;
use std::rc::Rc;

use crate::binomial::{binom_pm1_stream, binom_vp, catalan_stream, central_binom_stream, LucasBinomial};
use crate::lucas::{lucas_stream, LucasParams};
use crate::modarith::{Modulus, PrimePower, Residue};

use super::{CongruenceCase, Kernel, ModulusKind, RegistryError, SumSpec, Weight};

type Sparse = Rc<Vec<(usize, u64)>>;
/// `(u_k, v_k)` for `k = 0..=top`.
type UV = Rc<(Vec<u64>, Vec<u64>)>;

/// Per-prime evaluation caches.
pub struct EvalContext {
    p: u64,
    lucas: Option<LucasBinomial>,
    kernels: HashMap<(Kernel, u64, u64), Sparse>,
    scaled: HashMap<(Kernel, u64, u64, i64, i64, bool), Sparse>,
    sequences: HashMap<(LucasParams, u64, u64), UV>,
    lemma31: HashMap<(i64, u64, u64), Rc<Vec<u64>>>,
}

impl EvalContext {
    pub fn new(p: u64) -> Self {
        EvalContext {
            p,
            lucas: None,
            kernels: HashMap::new(),
            scaled: HashMap::new(),
            sequences: HashMap::new(),
            lemma31: HashMap::new(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn eval_lhs(&mut self, case: &CongruenceCase, pp: PrimePower) -> Result<Residue, RegistryError> {
        self.eval_sum(&case.sum, case.kind, pp)
    }

    /// One sum of the given kind at `pp`, reduced in the comparison modulus.
    pub fn eval_sum(&mut self, spec: &SumSpec, kind: ModulusKind, pp: PrimePower) -> Result<Residue, RegistryError> {
        assert_eq!(pp.p(), self.p, "context built for another prime");
        spec.check(kind, pp)?;
        let m = kind.comparison_modulus(pp);
        let top = spec.top(kind, pp);
        let terms = self.scaled(spec, m, top);
        let mut acc: u128 = 0;
        match spec.weight {
            Weight::One => {
                for &(_, t) in terms.iter() {
                    acc += t as u128;
                }
            }
            Weight::U(_) | Weight::V(_) | Weight::Char3 => {
                let (params, use_v) = match spec.weight {
                    Weight::U(params) => (params, false),
                    Weight::V(params) => (params, true),
                    _ => (LucasParams::CHAR3, false),
                };
                let seq = self.sequence(params, m, top);
                let w = if use_v { &seq.1 } else { &seq.0 };
                for &(k, t) in terms.iter() {
                    acc += t as u128 * w[k] as u128;
                }
            }
            Weight::Lemma31 { x } => {
                let w = self.lemma31_weight(x, m, top);
                for &(k, t) in terms.iter() {
                    acc += t as u128 * w[k] as u128;
                }
            }
        }
        Ok(m.residue((acc % m.get() as u128) as u64))
    }

    fn lucas_binomial(&mut self) -> &LucasBinomial {
        let p = self.p;
        self.lucas.get_or_insert_with(|| LucasBinomial::new(p))
    }

    /// Kernel values mod `m` for `k = 0..=top`, zeros dropped.
    fn kernel(&mut self, kernel: Kernel, m: Modulus, top: u64) -> Sparse {
        let key = (kernel, m.get(), top);
        if let Some(v) = self.kernels.get(&key) {
            return v.clone();
        }
        let p = self.p;
        let mod_p = m.get() == p;
        let pp = PrimePower::new(p, if mod_p { 1 } else { 2 }).expect("odd prime");
        let dense: Vec<u64> = match kernel {
            Kernel::Central { h } => {
                let base: Vec<u64> = if mod_p {
                    let lb = self.lucas_binomial();
                    (0..=top).map(|k| lb.binom_raw(2 * k, k)).collect()
                } else {
                    central_binom_stream(pp, top).map(|c| c.value().value()).collect()
                };
                base.into_iter().map(|c| m.pow(c, h as u64)).collect()
            }
            Kernel::Catalan => catalan_stream(pp, top).map(|c| c.value().value()).collect(),
            Kernel::CentralPm1 => binom_pm1_stream(pp)
                .zip(central_binom_stream(pp, top))
                .take(top as usize + 1)
                .map(|(b, c)| {
                    let c = c.value().value();
                    m.mul(b.value(), m.mul(c, c))
                })
                .collect(),
            Kernel::SixThree { h } => {
                let base: Vec<u64> = if mod_p {
                    let lb = self.lucas_binomial();
                    (0..=top).map(|k| lb.binom_raw(6 * k, 3 * k)).collect()
                } else {
                    (0..=top).map(|k| binom_vp(6 * k, 3 * k, pp).value().value()).collect()
                };
                base.into_iter().map(|c| m.pow(c, h as u64)).collect()
            }
        };
        let sparse: Sparse = Rc::new(dense.into_iter().enumerate().filter(|&(_, v)| v != 0).collect());
        self.kernels.insert(key, sparse.clone());
        sparse
    }

    /// Kernel times `(num/den)^k`, and times `k` when asked.
    fn scaled(&mut self, spec: &SumSpec, m: Modulus, top: u64) -> Sparse {
        let key = (spec.kernel, m.get(), top, spec.num, spec.den, spec.k_factor);
        if let Some(v) = self.scaled.get(&key) {
            return v.clone();
        }
        let kernel = self.kernel(spec.kernel, m, top);
        let ratio = m.mul(
            m.reduce_i64(spec.num),
            m.inv(m.reduce_i64(spec.den)).expect("checked by SumSpec::check"),
        );
        let mut out = Vec::with_capacity(kernel.len());
        let (mut power, mut k) = (1 % m.get(), 0usize);
        for &(idx, val) in kernel.iter() {
            while k < idx {
                power = m.mul(power, ratio);
                k += 1;
            }
            let mut t = m.mul(val, power);
            if spec.k_factor {
                t = m.mul(t, m.reduce_u64(idx as u64));
            }
            if t != 0 {
                out.push((idx, t));
            }
        }
        let out = Rc::new(out);
        self.scaled.insert(key, out.clone());
        out
    }

    fn sequence(&mut self, params: LucasParams, m: Modulus, top: u64) -> UV {
        let key = (params, m.get(), top);
        if let Some(v) = self.sequences.get(&key) {
            return v.clone();
        }
        let mut stream = lucas_stream(params, m);
        let (u, v): (Vec<u64>, Vec<u64>) = (0..=top).map(|_| stream.next_raw()).unzip();
        let out = Rc::new((u, v));
        self.sequences.insert(key, out.clone());
        out
    }

    fn lemma31_weight(&mut self, x: i64, m: Modulus, top: u64) -> Rc<Vec<u64>> {
        let key = (x, m.get(), top);
        if let Some(v) = self.lemma31.get(&key) {
            return v.clone();
        }
        let sign = if ((self.p - 1) / 2).is_multiple_of(2) { 1 } else { m.get() - 1 };
        let (a, b) = (m.reduce_i64(x), m.reduce_i64(1 - x));
        let (mut pa, mut pb) = (1 % m.get(), 1 % m.get());
        let mut out = Vec::with_capacity(top as usize + 1);
        for _ in 0..=top {
            out.push(m.sub(pa, m.mul(sign, pb)));
            pa = m.mul(pa, a);
            pb = m.mul(pb, b);
        }
        let out = Rc::new(out);
        self.lemma31.insert(key, out.clone());
        out
    }
}

/// The left-hand sum of `case` at `pp`, with a fresh context.
pub fn eval_lhs(case: &CongruenceCase, pp: PrimePower) -> Result<Residue, RegistryError> {
    EvalContext::new(pp.p()).eval_lhs(case, pp)
}
