//! Parallel criteria scan.

use rayon::prelude::*;
use twoprim_core::arith::{odd_prime_powers, PrimePowerCtx};
use twoprim_core::criteria::{classify, CriterionVerdict};
use twoprim_core::Stage;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    pub lo: u64,
    pub hi: u64,
    pub total: usize,
    pub basic_failures: usize,
    pub max_basic_failure: Option<u64>,
    pub sieve_passes: usize,
    pub eliminated_by_prime_count: usize,
    pub exceptions: Vec<u64>,
}

/// Verdicts for every odd prime power in `[lo, hi]`, ascending in `q` regardless
/// of thread count.
pub fn scan(lo: u64, hi: u64) -> Vec<CriterionVerdict> {
    odd_prime_powers(lo, hi)
        .into_par_iter()
        .map(|(_, p, k)| classify(&PrimePowerCtx::from_parts(p, k).expect("odd prime power")))
        .collect()
}

pub fn summarize(lo: u64, hi: u64, verdicts: &[CriterionVerdict]) -> ScanSummary {
    let failing = verdicts.iter().filter(|v| v.stage != Stage::BasicPass);
    ScanSummary {
        lo,
        hi,
        total: verdicts.len(),
        basic_failures: failing.clone().count(),
        max_basic_failure: failing.map(|v| v.q).max(),
        sieve_passes: verdicts.iter().filter(|v| v.stage == Stage::SievePass).count(),
        eliminated_by_prime_count: verdicts.iter().filter(|v| v.stage == Stage::EliminatedByPrimeCount).count(),
        exceptions: verdicts.iter().filter(|v| v.stage == Stage::Exception).map(|v| v.q).collect(),
    }
}
