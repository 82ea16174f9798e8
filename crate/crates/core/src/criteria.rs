//! Sufficient conditions for every line of `F_{q^2}/F_q` to contain a
//! 2-primitive element, and the interval scan built on them.
//!
//! Inequalities involving `√q` are evaluated in `f64`. A condition only counts
//! as holding when its margin exceeds [`GUARD_BAND`] relative to the larger
//! side; near-ties are demoted, which can only send a `q` to exhaustive
//! verification.

use alloc::vec::Vec;

use crate::arith::{self, Factorization, PrimePowerCtx};
use crate::Error;

/// Relative margin a condition must clear to count as holding.
pub const GUARD_BAND: f64 = 1e-9;

/// Upper bound on `c_{R,8}` over all `R`.
pub const D_BOUND: f64 = 4514.7;

/// Scan ceiling left after the large-`t(q)` cases are settled: `(2·2^9)^2`.
pub const SCAN_CEILING: u64 = 1_048_576;

/// Outcome of evaluating one inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCheck {
    pub holds: bool,
    /// Left side minus right side.
    pub margin: f64,
}

fn compare(lhs: f64, rhs: f64) -> ConditionCheck {
    let margin = lhs - rhs;
    ConditionCheck { holds: margin > GUARD_BAND * lhs.abs().max(rhs.abs()), margin }
}

/// Product of the primes of `r` (given through `fact`) that divide `q + 1`.
fn part_dividing(fact: &Factorization, q_plus_1: u64) -> u64 {
    fact.primes().filter(|&p| q_plus_1 % p == 0).product()
}

/// Basic condition for `R | R′` with `R1` the product of the primes of `R`
/// dividing `q + 1`:
///
/// - `q ≡ 1 (mod 4)`: `q + 1 > 4(W(R)√q − W(R1)(√q − 1)/2)`
/// - `q ≡ 3 (mod 4)`: `q + 1 > 4(W(R)√q − W(R1)(√q − 1))`
pub fn basic_condition(ctx: &PrimePowerCtx, r: u64, r1: u64) -> Result<ConditionCheck, Error> {
    if ctx.q % 2 == 0 {
        return Err(Error::NotOddPrimePower(ctx.q));
    }
    let r_fact = ctx.rprime_factorization().restrict(r)?;
    if part_dividing(&r_fact, ctx.q + 1) != r1 {
        return Err(Error::Invalid("R1 must be the product of the primes of R dividing q+1"));
    }
    let w_r = arith::num_squarefree_divisors(&r_fact) as f64;
    let w_r1 = (1u64 << r_fact.primes().filter(|&p| (ctx.q + 1) % p == 0).count()) as f64;
    let sq = libm::sqrt(ctx.q as f64);
    let lhs = (ctx.q + 1) as f64;
    let rhs = if ctx.is_one_mod_four() {
        4.0 * (w_r * sq - w_r1 * (sq - 1.0) / 2.0)
    } else {
        4.0 * (w_r * sq - w_r1 * (sq - 1.0))
    };
    Ok(compare(lhs, rhs))
}

/// [`basic_condition`] with `R = R′`.
pub fn basic_condition_full(ctx: &PrimePowerCtx) -> ConditionCheck {
    let r1 = part_dividing(&ctx.rprime_factorization(), ctx.q + 1);
    basic_condition(ctx, ctx.rprime, r1).expect("R' divides itself")
}

/// A split `R′ = kk · p_1 ⋯ p_s` into a kernel and sieving primes.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveDecomposition {
    /// The kernel `k`.
    pub kk: u64,
    /// Part of `kk` dividing `q + 1`.
    pub k1: u64,
    /// Sieving primes in the order they were added.
    pub sieve_primes: Vec<u64>,
    pub s: usize,
    /// Number of sieving primes dividing `q + 1`.
    pub r: usize,
    /// `1 − Σ 1/p_i` (1 when there are no sieving primes).
    pub epsilon: f64,
    /// `1 − Σ 1/p_i` over the sieving primes dividing `q + 1`.
    pub epsilon_prime: f64,
}

impl SieveDecomposition {
    /// Decomposition of `R′` with the given distinct sieving primes.
    pub fn new(ctx: &PrimePowerCtx, sieve_primes: &[u64]) -> Result<Self, Error> {
        let mut kk = ctx.rprime;
        for (i, &p) in sieve_primes.iter().enumerate() {
            if sieve_primes[..i].contains(&p) || !arith::is_prime(p) || kk % p != 0 {
                return Err(Error::Invalid("sieving primes must be distinct primes of R'"));
            }
            kk /= p;
        }
        let q1 = ctx.q + 1;
        let k1 = part_dividing(&ctx.rprime_factorization().restrict(kk)?, q1);
        let r = sieve_primes.iter().filter(|&&p| q1 % p == 0).count();
        let epsilon = 1.0 - sieve_primes.iter().map(|&p| 1.0 / p as f64).sum::<f64>();
        let epsilon_prime = 1.0 - sieve_primes.iter().filter(|&&p| q1 % p == 0).map(|&p| 1.0 / p as f64).sum::<f64>();
        Ok(SieveDecomposition {
            kk,
            k1,
            sieve_primes: sieve_primes.to_vec(),
            s: sieve_primes.len(),
            r,
            epsilon,
            epsilon_prime,
        })
    }

    /// `ε > 0`, decided exactly: `Σ_i Π_{j≠i} p_j < Π_j p_j`.
    pub fn epsilon_positive(&self) -> bool {
        reciprocal_sum_below_one(&self.sieve_primes)
    }
}

fn reciprocal_sum_below_one(primes: &[u64]) -> bool {
    let prod: u128 = primes.iter().map(|&p| p as u128).product();
    let sum: u128 = primes.iter().map(|&p| prod / p as u128).sum();
    sum < prod
}

/// Sieving condition for a decomposition with `ε > 0`:
///
/// `q + 1 > 4[W(k)((s−1)/ε + 2)√q − W(k1)((r−1+ε′)/ε + 1)·B]`
///
/// with `B = (√q − 1)/2` for `q ≡ 1 (mod 4)` and `B = √q − 1` otherwise.
pub fn sieve_condition(ctx: &PrimePowerCtx, dec: &SieveDecomposition) -> Result<ConditionCheck, Error> {
    if !dec.epsilon_positive() || dec.epsilon <= 0.0 {
        return Err(Error::NonPositiveEpsilon);
    }
    let rp = ctx.rprime_factorization();
    let w_k = arith::num_squarefree_divisors(&rp.restrict(dec.kk)?) as f64;
    let w_k1 = arith::num_squarefree_divisors(&rp.restrict(dec.k1)?) as f64;
    let (s, r, eps, eps_p) = (dec.s as f64, dec.r as f64, dec.epsilon, dec.epsilon_prime);
    let sq = libm::sqrt(ctx.q as f64);
    let tail = if ctx.is_one_mod_four() { (sq - 1.0) / 2.0 } else { sq - 1.0 };
    let rhs = 4.0 * (w_k * ((s - 1.0) / eps + 2.0) * sq - w_k1 * ((r - 1.0 + eps_p) / eps + 1.0) * tail);
    Ok(compare((ctx.q + 1) as f64, rhs))
}

/// The greedy sieving sequence: starting from `kk = R′`, repeatedly move the
/// largest remaining prime into the sieving set while `ε` stays positive. For
/// `R′ = 1` the single empty decomposition is returned.
pub fn greedy_decompose(ctx: &PrimePowerCtx) -> Vec<SieveDecomposition> {
    let rp = ctx.rprime_factorization();
    if rp.omega() == 0 {
        return alloc::vec![SieveDecomposition::new(ctx, &[]).expect("empty decomposition")];
    }
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    for p in rp.primes().rev() {
        chosen.push(p);
        if !reciprocal_sum_below_one(&chosen) {
            break;
        }
        out.push(SieveDecomposition::new(ctx, &chosen).expect("primes of R'"));
    }
    out
}

/// Which test settled a prime power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    BasicPass,
    SievePass,
    /// Neither condition holds; needs exhaustive verification.
    Exception,
    /// Neither condition holds numerically but `t(q)` is at or above
    /// [`prime_count_cutoff`].
    EliminatedByPrimeCount,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::BasicPass => "basic-pass",
            Stage::SievePass => "sieve-pass",
            Stage::Exception => "exception",
            Stage::EliminatedByPrimeCount => "eliminated-by-prime-count",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionVerdict {
    pub q: u64,
    pub stage: Stage,
    /// The first passing decomposition for [`Stage::SievePass`].
    pub decomposition: Option<SieveDecomposition>,
    /// Margin of the deciding inequality; for failures, the largest margin
    /// reached by any tried inequality.
    pub margin: f64,
}

/// Classify one prime power: basic condition on `R′`, then each greedy
/// decomposition in order.
pub fn classify(ctx: &PrimePowerCtx) -> CriterionVerdict {
    let basic = basic_condition_full(ctx);
    if basic.holds {
        return CriterionVerdict { q: ctx.q, stage: Stage::BasicPass, decomposition: None, margin: basic.margin };
    }
    let mut best = basic.margin;
    for dec in greedy_decompose(ctx) {
        let check = sieve_condition(ctx, &dec).expect("greedy decompositions have positive epsilon");
        if check.holds {
            return CriterionVerdict {
                q: ctx.q,
                stage: Stage::SievePass,
                decomposition: Some(dec),
                margin: check.margin,
            };
        }
        best = best.max(check.margin);
    }
    let stage = if ctx.t_q as u32 >= prime_count_cutoff() { Stage::EliminatedByPrimeCount } else { Stage::Exception };
    CriterionVerdict { q: ctx.q, stage, decomposition: None, margin: best }
}

/// Verdicts for every odd prime power in `[lo, hi]`, ascending.
pub fn scan_interval(lo: u64, hi: u64) -> Vec<CriterionVerdict> {
    arith::odd_prime_powers(lo, hi)
        .into_iter()
        .map(|(_, p, k)| classify(&PrimePowerCtx::from_parts(p, k).expect("odd prime power")))
        .collect()
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut bound = 64u64;
    loop {
        let ps = arith::primes_up_to(bound);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        bound *= 2;
    }
}

/// Intermediate values of [`algorithm1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Algorithm1Trace {
    pub s: u32,
    pub epsilon1: f64,
    pub q1: f64,
    /// Most distinct primes an integer `≤ q1² − 1` can have.
    pub c: u32,
    pub settled: bool,
}

/// Whether every `q` with `t1 ≤ t(q) ≤ t2` satisfies the sieving condition.
pub fn algorithm1(t1: u32, t2: u32) -> bool {
    algorithm1_trace(t1, t2).settled
}

pub fn algorithm1_trace(t1: u32, t2: u32) -> Algorithm1Trace {
    assert!(2 <= t1 && t1 <= t2, "algorithm1 requires 2 <= t1 <= t2");
    let primes = first_primes(64);
    let nth = |i: u32| primes[i as usize - 1] as f64;

    // Greedy ε over p(t1), p(t1 − 1), …; the index never drops below 1.
    let mut s = 0u32;
    let mut eps = 1.0f64;
    while s < t1 && eps - 1.0 / nth(t1 - s) > 0.0 {
        s += 1;
        eps -= 1.0 / nth(t1 - s + 1);
    }

    let base = 2.0 * libm::exp2((t2 - s) as f64) * ((s as f64 - 1.0) / eps + 2.0);
    let q1 = base * base;
    let limit = q1 * q1 - 1.0;

    let mut c = 1u32;
    let mut primorial = 2.0f64 * 3.0;
    while primorial <= limit {
        c += 1;
        primorial *= primes[c as usize] as f64;
    }
    Algorithm1Trace { s, epsilon1: eps, q1, c, settled: c <= t1 }
}

/// Quantities behind the large-`t(q)` cut-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffReport {
    /// `q0 = (2 · 4514.7)^4`; every `q ≥ q0` satisfies `√q ≥ 2W(q² − 1)`.
    pub q0: f64,
    pub cutoff: u32,
    /// Product of the first `cutoff − 1` primes.
    pub primorial_below: u128,
    /// Product of the first `cutoff` primes.
    pub primorial_at: u128,
    /// Smallest `q` for which `q² − 1` can have `cutoff` distinct primes.
    pub min_q_at_cutoff: u64,
}

pub fn cutoff_report() -> CutoffReport {
    const CUTOFF: u32 = 14;
    let q0 = libm::pow(2.0 * D_BOUND, 4.0);
    let primes = first_primes(CUTOFF as usize);
    let primorial_at: u128 = primes.iter().map(|&p| p as u128).product();
    let primorial_below = primorial_at / primes[CUTOFF as usize - 1] as u128;
    let min_q_at_cutoff = arith::isqrt(primorial_at as u64 + 1)
        + if arith::isqrt(primorial_at as u64 + 1).pow(2) == primorial_at as u64 + 1 { 0 } else { 1 };
    CutoffReport { q0, cutoff: CUTOFF, primorial_below, primorial_at, min_q_at_cutoff }
}

/// Distinct-prime count from which `t(q)` needs no further treatment.
pub fn prime_count_cutoff() -> u32 {
    let report = cutoff_report();
    let q0_sq_m1 = report.q0 * report.q0 - 1.0;
    debug_assert!((report.primorial_below as f64) <= q0_sq_m1);
    debug_assert!((report.primorial_at as f64) <= q0_sq_m1);
    report.cutoff
}
