//! Sweep orchestration: enumerate applicable (case, prime power) pairs and
//! verify them in parallel, one prime per task.

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::modarith::{primes_in, PrimePower};
use crate::registry::{catalogue_index, registry_catalogue, CongruenceCase, EvalContext, ModulusKind, Status, VerificationRecord};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SweepError {
    #[error("prime range [{lo}, {hi}] must satisfy hi >= lo >= 3")]
    BadRange { lo: u64, hi: u64 },
    #[error("exponents must be a non-empty subset of {{1, 2, 3}}, got {0:?}")]
    BadExponents(Vec<u32>),
    #[error("prime-power cap {cap} is below the prime maximum {hi}")]
    CapTooSmall { cap: u64, hi: u64 },
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
    #[error("worker count must be at least 1")]
    NoWorkers,
}

/// Which part of the catalogue a plan draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseClass {
    Theorems,
    Conjectures,
    All,
}

impl CaseClass {
    fn admits(self, case: &CongruenceCase) -> bool {
        match self {
            CaseClass::Theorems => !case.conjecture,
            CaseClass::Conjectures => case.conjecture,
            CaseClass::All => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepPlan {
    /// explicit case ids; `None` selects every case of `class`
    pub ids: Option<Vec<String>>,
    pub class: CaseClass,
    /// restrict to these modulus kinds
    pub kinds: Option<Vec<ModulusKind>>,
    pub prime_min: u64,
    pub prime_max: u64,
    pub exponents: Vec<u32>,
    /// largest `p^a` visited for `a > 1`
    pub pp_cap: u64,
    pub jobs: usize,
    /// add 1 to every right-hand side
    pub mutate: bool,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            ids: None,
            class: CaseClass::Theorems,
            kinds: None,
            prime_min: 3,
            prime_max: 1000,
            exponents: vec![1],
            pp_cap: 1000,
            jobs: 1,
            mutate: false,
        }
    }
}

impl SweepPlan {
    pub fn validate(&self) -> Result<(), SweepError> {
        let (lo, hi) = (self.prime_min, self.prime_max);
        if lo < 3 || hi < lo {
            return Err(SweepError::BadRange { lo, hi });
        }
        if self.exponents.is_empty() || self.exponents.iter().any(|a| !(1..=3).contains(a)) {
            return Err(SweepError::BadExponents(self.exponents.clone()));
        }
        if self.exponents.iter().any(|&a| a > 1) && self.pp_cap < hi {
            return Err(SweepError::CapTooSmall { cap: self.pp_cap, hi });
        }
        if self.jobs == 0 {
            return Err(SweepError::NoWorkers);
        }
        if let Some(ids) = &self.ids {
            if let Some(bad) = ids.iter().find(|id| catalogue_index(id).is_none()) {
                return Err(SweepError::UnknownCase(bad.clone()));
            }
        }
        Ok(())
    }

    fn selected(&self) -> Vec<usize> {
        registry_catalogue()
            .iter()
            .enumerate()
            .filter(|(_, c)| match &self.ids {
                Some(ids) => ids.contains(&c.id),
                None => self.class.admits(c),
            })
            .filter(|(_, c)| self.kinds.as_ref().is_none_or(|k| k.contains(&c.kind)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// One planned verification, by catalogue index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlannedPair {
    pub case: usize,
    pub pp: PrimePower,
}

impl PlannedPair {
    pub fn case(&self) -> &'static CongruenceCase {
        &registry_catalogue()[self.case]
    }
}

/// All applicable pairs, ordered by catalogue position, then `p`, then `a`.
/// Only prime-power cases expand over exponents above 1.
pub fn plan_pairs(plan: &SweepPlan) -> Result<Vec<PlannedPair>, SweepError> {
    plan.validate()?;
    let primes = primes_in(plan.prime_min, plan.prime_max);
    let mut exps = plan.exponents.clone();
    exps.sort_unstable();
    exps.dedup();
    let cat = registry_catalogue();
    let mut out = Vec::new();
    for i in plan.selected() {
        let case = &cat[i];
        for &p in &primes {
            for &a in &exps {
                if a > 1 && (case.kind != ModulusKind::ModPa || p.checked_pow(a).is_none_or(|q| q > plan.pp_cap)) {
                    continue;
                }
                let pp = PrimePower::new(p, a).expect("odd prime in range");
                if case.is_applicable(pp) {
                    out.push(PlannedPair { case: i, pp });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSummary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
    pub wall_seconds: f64,
}

impl SweepSummary {
    pub fn tally(records: &[VerificationRecord], wall_seconds: f64) -> Self {
        let count = |s| records.iter().filter(|r| r.status == s).count();
        SweepSummary {
            total: records.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            inapplicable: count(Status::Inapplicable),
            wall_seconds,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub records: Vec<VerificationRecord>,
    pub summary: SweepSummary,
}

/// Verifies every planned pair; record order matches [`plan_pairs`].
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult, SweepError> {
    let start = Instant::now();
    let pairs = plan_pairs(plan)?;
    let records = run_pairs(&pairs, plan.jobs, plan.mutate);
    let summary = SweepSummary::tally(&records, start.elapsed().as_secs_f64());
    Ok(SweepResult { records, summary })
}

/// Verifies `pairs` grouped by prime, each prime sharing one [`EvalContext`].
pub fn run_pairs(pairs: &[PlannedPair], jobs: usize, mutate: bool) -> Vec<VerificationRecord> {
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by_key(|&i| (pairs[i].pp.p(), i));
    let groups: Vec<&[usize]> = order.chunk_by(|&x, &y| pairs[x].pp.p() == pairs[y].pp.p()).collect();

    let work = || {
        groups
            .par_iter()
            .rev() // large primes first for better balance
            .flat_map_iter(|group| {
                let mut ctx = EvalContext::new(pairs[group[0]].pp.p());
                group
                    .iter()
                    .map(|&i| (i, ctx.verify(pairs[i].case(), pairs[i].pp, mutate)))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let mut done = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
        .install(work);
    done.sort_unstable_by_key(|&(i, _)| i);
    done.into_iter().map(|(_, r)| r).collect()
}
