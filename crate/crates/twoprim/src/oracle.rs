//! Character-sum oracle suite for one small field.

use std::collections::BTreeSet;

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twoprim_core::arith::{factorize, PrimePowerCtx};
use twoprim_core::charoracle::{CharacterTable, ComplexVal, ORACLE_CAP};
use twoprim_core::{Error, FieldElem, QuadExtField};

/// Environment variable capping the bytes a discrete-log table may use.
pub const DLOG_MAX_BYTES_ENV: &str = "TWOPRIM_DLOG_MAX_BYTES";

/// Fields with `q` at most this are checked at every element and class;
/// larger ones on a fixed sample.
const EXHAUSTIVE_MAX_Q: u64 = 13;
const SAMPLE_ELEMENTS: usize = 256;
const SAMPLE_CLASSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    pub families: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { seed: 0x5eed, families: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: &'static str,
    pub cases: u64,
    /// Largest deviation seen; for boolean checks, the number of failures.
    pub worst: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

/// Translate sums `B` aggregated over the characters of one order.
#[derive(Debug, Clone, PartialEq)]
pub struct BSumRow {
    pub order: u64,
    pub divides_q_plus_1: bool,
    pub characters: u64,
    pub min_abs: f64,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub q: u64,
    pub checks: Vec<OracleCheck>,
    pub b_sums: Vec<BSumRow>,
}

impl OracleOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(OracleCheck::passed)
    }
}

fn dlog_budget() -> anyhow::Result<Option<u64>> {
    match std::env::var(DLOG_MAX_BYTES_ENV) {
        Ok(v) => Ok(Some(v.trim().parse().with_context(|| format!("{DLOG_MAX_BYTES_ENV}={v} is not a byte count"))?)),
        Err(_) => Ok(None),
    }
}

pub fn run_suite(q: u64, cfg: &OracleConfig) -> anyhow::Result<OracleOutcome> {
    if q > ORACLE_CAP {
        return Err(Error::OracleCap { q, cap: ORACLE_CAP }.into());
    }
    let ctx = PrimePowerCtx::new(q)?;
    let need = CharacterTable::footprint(q);
    if let Some(budget) = dlog_budget()? {
        if need > budget {
            bail!("discrete-log table for q = {q} needs {need} bytes, above {DLOG_MAX_BYTES_ENV}={budget}");
        }
    }
    let fld = QuadExtField::new(ctx)?;
    let table = CharacterTable::new(&fld)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ q);
    let classes = class_representatives(&fld, &mut rng);
    let elements = element_sample(&fld, &mut rng);

    let (translate, b_sums) = translate_sums(&table, &classes)?;
    let checks = vec![
        translate,
        indicator_check(&table, &elements)?,
        line_identity(&table, &classes)?,
        y_bound(&table, &classes)?,
        sieve_families(&table, &mut rng, cfg.families)?,
    ];
    Ok(OracleOutcome { q, checks, b_sums })
}

/// One `θ` per translate class, all of them for small `q`.
fn class_representatives(fld: &QuadExtField, rng: &mut ChaCha8Rng) -> Vec<FieldElem> {
    let tr = fld.translate_indexer();
    let mut seen = BTreeSet::new();
    let mut reps: Vec<FieldElem> = (0..fld.size())
        .map(|i| fld.unpack(i))
        .filter(|u| {
            let idx = tr.index(u);
            idx != 0 && seen.insert(idx)
        })
        .collect();
    if fld.q() > EXHAUSTIVE_MAX_Q {
        reps = sample(&reps, SAMPLE_CLASSES, rng);
    }
    reps
}

fn element_sample(fld: &QuadExtField, rng: &mut ChaCha8Rng) -> Vec<FieldElem> {
    let all: Vec<FieldElem> = (1..fld.size()).map(|i| fld.unpack(i)).collect();
    if fld.q() > EXHAUSTIVE_MAX_Q {
        sample(&all, SAMPLE_ELEMENTS, rng)
    } else {
        all
    }
}

fn sample(items: &[FieldElem], count: usize, rng: &mut ChaCha8Rng) -> Vec<FieldElem> {
    let mut picked: Vec<usize> = rand::seq::index::sample(rng, items.len(), count.min(items.len())).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| items[i]).collect()
}

fn translate_sums(table: &CharacterTable, classes: &[FieldElem]) -> anyhow::Result<(OracleCheck, Vec<BSumRow>)> {
    let fld = table.field();
    let q = fld.q();
    let sqrt_q = (q as f64).sqrt();
    let mut check = OracleCheck { name: "translate-sum", cases: 0, worst: 0.0, tolerance: 1e-6 };
    let mut rows = Vec::new();
    for d in factorize(fld.order()).divisors().into_iter().filter(|&d| d > 1) {
        let divides = (q + 1) % d == 0;
        let chis = table.characters_of_order(d)?;
        let mut row = BSumRow {
            order: d,
            divides_q_plus_1: divides,
            characters: chis.len() as u64,
            min_abs: f64::INFINITY,
            max_abs: 0.0,
        };
        for &chi in &chis {
            for theta in classes {
                let b = table.translate_sum_b(chi, theta)?;
                let dev = if divides { (b - ComplexVal::new(-1.0, 0.0)).abs() } else { (b.abs() - sqrt_q).abs() };
                check.cases += 1;
                check.worst = check.worst.max(dev);
                row.min_abs = row.min_abs.min(b.abs());
                row.max_abs = row.max_abs.max(b.abs());
            }
        }
        rows.push(row);
    }
    Ok((check, rows))
}

/// `Ω_m`, `w_k` and both forms of `Γ_R` against their exact predicates.
fn indicator_check(table: &CharacterTable, elements: &[FieldElem]) -> anyhow::Result<OracleCheck> {
    let fld = table.field();
    let mut check = OracleCheck { name: "indicators", cases: 0, worst: 0.0, tolerance: 1e-6 };
    let ms = factorize(fld.order()).squarefree_divisors();
    let rs = fld.ctx().rprime_factorization().divisors();
    let as_f = |b: bool| if b { 1.0 } else { 0.0 };
    for x in elements {
        let mut devs = Vec::new();
        for &m in &ms {
            devs.push((table.omega_m(x, m)? - as_f(table.is_m_free(x, m)?)).abs());
        }
        for k in [2u64, 4] {
            devs.push((table.w_k_indicator(x, k)? - as_f(table.is_kth_power(x, k)?)).abs());
        }
        for &r in &rs {
            let exact = as_f(table.gamma_r_exact(x, r)?);
            devs.push((table.gamma_r(x, r)? - exact).abs());
            devs.push((table.gamma_r_expanded(x, r)? - exact).abs());
        }
        check.cases += devs.len() as u64;
        check.worst = devs.into_iter().fold(check.worst, f64::max);
    }
    Ok(check)
}

/// Direct and character-sum values of `N_R(θ, α)`.
fn line_identity(table: &CharacterTable, classes: &[FieldElem]) -> anyhow::Result<OracleCheck> {
    let fld = table.field();
    let mut check = OracleCheck { name: "line-count-identity", cases: 0, worst: 0.0, tolerance: 1e-3 };
    let rs = fld.ctx().rprime_factorization().divisors();
    for alpha in [fld.one(), fld.primitive()] {
        for theta in classes {
            for &r in &rs {
                let n = table.count_n_r(theta, &alpha, r)?;
                check.cases += 1;
                check.worst = check.worst.max((n.direct as f64 - n.via_formula).abs());
            }
        }
    }
    Ok(check)
}

/// `|Y(χ)| ≤ 4√q` for the nontrivial characters entering the line sum;
/// `worst` is the largest excess over the bound, floored at zero.
fn y_bound(table: &CharacterTable, classes: &[FieldElem]) -> anyhow::Result<OracleCheck> {
    let fld = table.field();
    let mut check = OracleCheck { name: "y-bound", cases: 0, worst: 0.0, tolerance: 1e-9 };
    let bound = 4.0 * (fld.q() as f64).sqrt();
    let orders: Vec<u64> = fld.ctx().rprime_factorization().divisors().into_iter().filter(|&d| d > 1).collect();
    for alpha in [fld.one(), fld.primitive()] {
        for theta in classes {
            for &d in &orders {
                for chi in table.characters_of_order(d)? {
                    check.cases += 1;
                    check.worst = check.worst.max(table.y_sum(chi, theta, &alpha)?.abs() - bound);
                }
            }
        }
    }
    Ok(check)
}

/// A random family `r_1..r_s` with pairwise gcd `r0` and lcm `m`, built from
/// the given distinct primes.
pub fn random_family(rng: &mut impl Rng, primes: &[u64]) -> (u64, u64, Vec<u64>) {
    if primes.is_empty() {
        return (1, 1, vec![1]);
    }
    let mut shuffled = primes.to_vec();
    for i in (1..shuffled.len()).rev() {
        shuffled.swap(i, rng.gen_range(0..=i));
    }
    let r0_len = rng.gen_range(0..shuffled.len());
    let r0: u64 = shuffled[..r0_len].iter().product();
    let rest = &shuffled[r0_len..];
    let s = rng.gen_range(1..=rest.len());
    let mut rs = vec![r0; s];
    for (i, &p) in rest.iter().enumerate() {
        let slot = if i < s { i } else { rng.gen_range(0..s) };
        rs[slot] *= p;
    }
    let m = rs.iter().fold(r0, |acc, &r| acc * (r / r0));
    (m, r0, rs)
}

fn sieve_families(table: &CharacterTable, rng: &mut ChaCha8Rng, families: usize) -> anyhow::Result<OracleCheck> {
    let fld = table.field();
    let primes: Vec<u64> = fld.ctx().rprime_factorization().primes().collect();
    let mut check = OracleCheck { name: "sieve-inequality", cases: 0, worst: 0.0, tolerance: 0.0 };
    for _ in 0..families {
        let (m, r0, rs) = random_family(rng, &primes);
        let theta = loop {
            let u = fld.unpack(rng.gen_range(1..fld.size()));
            if !fld.in_subfield(&u) {
                break u;
            }
        };
        let alpha = fld.unpack(rng.gen_range(1..fld.size()));
        check.cases += 1;
        if !table.check_sieve_inequality(&theta, &alpha, m, r0, &rs)? {
            check.worst += 1.0;
        }
    }
    Ok(check)
}

/// Validity of a divisor family for `q`, exposed for callers building their own.
pub fn family_is_valid(ctx: &PrimePowerCtx, m: u64, r0: u64, rs: &[u64]) -> bool {
    twoprim_core::charoracle::validate_family(ctx.rprime, m, r0, rs).is_ok()
}
