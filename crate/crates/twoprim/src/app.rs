//! Command execution behind the `twoprim` binary.

use std::time::Duration;

use anyhow::{bail, Context};
use twoprim_core::arith::{odd_prime_powers, PrimePowerCtx};
use twoprim_core::criteria::{self, CriterionVerdict};
use twoprim_core::{PropertyKind, PropertyReport, QuadExtField};

use crate::drivers::{self, Route};
use crate::known;
use crate::oracle::{self, OracleConfig};
use crate::report::{join, Report, ReportRow};
use crate::scan;

/// Verifier selection on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Paper,
    Fast,
    /// Run both routes and require identical verdicts and witnesses.
    Both,
}

impl Mode {
    fn routes(self) -> &'static [Route] {
        match self {
            Mode::Paper => &[Route::Paper],
            Mode::Fast => &[Route::Fast],
            Mode::Both => &[Route::Fast, Route::Paper],
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Mode::Paper => "paper",
            Mode::Fast => "fast",
            Mode::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Scan { lo: u64, hi: u64 },
    Algorithm1 { pairs: Vec<(u32, u32)> },
    Verify { property: PropertyKind, qs: Vec<u64>, mode: Mode },
    Oracle { qs: Vec<u64>, config: OracleConfig },
    ReproduceAll { line_max_q: u64, mode: Mode },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Compare against the published results and fail on disagreement.
    pub expect_paper: bool,
    /// Fill the `elapsed_ms` column; off by default so output is reproducible.
    pub timings: bool,
    /// Per-`q` progress lines on standard error.
    pub progress: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    /// Human-readable reasons the run should exit nonzero.
    pub problems: Vec<String>,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

/// `lo:hi` with `3 ≤ lo ≤ hi < 2^32`.
pub fn parse_range(text: &str) -> anyhow::Result<(u64, u64)> {
    let (lo, hi) = text.split_once(':').with_context(|| format!("range {text:?} is not of the form lo:hi"))?;
    let lo: u64 = lo.trim().parse().with_context(|| format!("bad range start {lo:?}"))?;
    let hi: u64 = hi.trim().parse().with_context(|| format!("bad range end {hi:?}"))?;
    if lo < 3 || hi >= 1 << 32 || lo > hi {
        bail!("range {lo}:{hi} must satisfy 3 <= lo <= hi < 2^32");
    }
    Ok((lo, hi))
}

/// Keyword naming the scan's exception list in `--q-list`.
pub const SCAN_EXCEPTIONS_KEYWORD: &str = "scan-exceptions";

/// Comma-separated `q` values, or [`SCAN_EXCEPTIONS_KEYWORD`]. Values are
/// validated by the command that consumes them.
pub fn parse_q_list(text: &str) -> anyhow::Result<Vec<u64>> {
    if text.trim() == SCAN_EXCEPTIONS_KEYWORD {
        return Ok(known::SCAN_EXCEPTIONS.to_vec());
    }
    let mut qs = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        qs.push(part.parse().with_context(|| format!("{part:?} is not an integer"))?);
    }
    if qs.is_empty() {
        bail!("empty q list");
    }
    Ok(qs)
}

pub fn validate_q(q: u64) -> anyhow::Result<PrimePowerCtx> {
    PrimePowerCtx::new(q).with_context(|| format!("invalid q = {q}"))
}

pub fn qs_in_range(lo: u64, hi: u64) -> Vec<u64> {
    odd_prime_powers(lo, hi).into_iter().map(|(q, _, _)| q).collect()
}

pub fn execute(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut out = Outcome { report: Report::default(), problems: Vec::new() };
    match &cfg.command {
        Command::Scan { lo, hi } => run_scan(cfg, *lo, *hi, &mut out),
        Command::Algorithm1 { pairs } => run_algorithm1(cfg, pairs, &mut out),
        Command::Verify { property, qs, mode } => drop(run_verify(cfg, *property, qs, *mode, &mut out)?),
        Command::Oracle { qs, config } => run_oracle(cfg, qs, config, &mut out)?,
        Command::ReproduceAll { line_max_q, mode } => run_reproduce_all(cfg, *line_max_q, *mode, &mut out)?,
    }
    Ok(out)
}

fn elapsed_ms(cfg: &RunConfig, d: Duration) -> Option<f64> {
    cfg.timings.then(|| (d.as_secs_f64() * 1e6).round() / 1e3)
}

fn progress(cfg: &RunConfig, line: impl FnOnce() -> String) {
    if cfg.progress {
        eprintln!("{}", line());
    }
}

fn scan_row(v: &CriterionVerdict) -> ReportRow {
    let ctx = PrimePowerCtx::new(v.q).expect("scanned q is a prime power");
    ReportRow::for_q(&ctx, "scan", v.stage.as_str(), format!("{:.6e}", v.margin))
}

fn run_scan(cfg: &RunConfig, lo: u64, hi: u64, out: &mut Outcome) {
    progress(cfg, || format!("scan {lo}:{hi}"));
    let verdicts = scan::scan(lo, hi);
    let s = scan::summarize(lo, hi, &verdicts);
    let report = &mut out.report;
    report.rows.extend(verdicts.iter().map(scan_row));
    report.note("range", format!("{lo}:{hi}"));
    report.note("odd_prime_powers", s.total);
    report.note("basic_failures", s.basic_failures);
    report.note("max_basic_failure", s.max_basic_failure.map_or("-".to_string(), |q| q.to_string()));
    report.note("sieve_passes", s.sieve_passes);
    report.note("eliminated_by_prime_count", s.eliminated_by_prime_count);
    report.note("exception_count", s.exceptions.len());
    report.note("exceptions", join(&s.exceptions));
    progress(cfg, || format!("scan done: {} prime powers, {} exceptions", s.total, s.exceptions.len()));

    if cfg.expect_paper {
        let examined: Vec<u64> = verdicts.iter().map(|v| v.q).collect();
        let want = known::expected_within(&known::SCAN_EXCEPTIONS, &examined);
        if s.exceptions != want {
            out.problems.push(format!("scan exceptions {} differ from expected {}", join(&s.exceptions), join(&want)));
        }
        if (lo, hi) == known::SCAN_RANGE {
            let counts = (s.total, s.basic_failures, s.max_basic_failure);
            let want = (known::SCAN_TOTAL, known::SCAN_BASIC_FAILURES, Some(known::SCAN_MAX_BASIC_FAILURE));
            if counts != want {
                out.problems.push(format!("scan counts {counts:?} differ from expected {want:?}"));
            }
        }
    }
}

fn run_algorithm1(cfg: &RunConfig, pairs: &[(u32, u32)], out: &mut Outcome) {
    for &(t1, t2) in pairs {
        let tr = criteria::algorithm1_trace(t1, t2);
        progress(cfg, || format!("algorithm1({t1}, {t2}) = {}", tr.settled));
        out.report.rows.push(ReportRow::general(
            "algorithm1",
            tr.settled.to_string(),
            format!("t1={t1};t2={t2};s={};epsilon1={:.6};q1={:.6e};c={}", tr.s, tr.epsilon1, tr.q1, tr.c),
        ));
        if cfg.expect_paper && known::ALGORITHM1_CLAIMS.contains(&(t1, t2)) && !tr.settled {
            out.problems.push(format!("algorithm1({t1}, {t2}) returned false"));
        }
    }
}

fn verify_command(property: PropertyKind) -> &'static str {
    match property {
        PropertyKind::Translate => "verify-translate",
        PropertyKind::Line => "verify-line",
    }
}

fn expected_exceptions(property: PropertyKind) -> &'static [u64] {
    match property {
        PropertyKind::Translate => &known::TRANSLATE_EXCEPTIONS,
        PropertyKind::Line => &known::LINE_EXCEPTIONS,
    }
}

/// Verdicts for each `q`; returns the `q` without the property.
fn run_verify(
    cfg: &RunConfig,
    property: PropertyKind,
    qs: &[u64],
    mode: Mode,
    out: &mut Outcome,
) -> anyhow::Result<Vec<u64>> {
    let command = verify_command(property);
    let mut failing = Vec::new();
    for &q in qs {
        let ctx = validate_q(q)?;
        let fld = QuadExtField::new(ctx.clone())?;
        let reports: Vec<(Route, PropertyReport)> =
            mode.routes().iter().map(|&route| (route, drivers::verify(&fld, property, route))).collect();
        for (route, r) in &reports {
            let detail = match &r.witness {
                Some(w) => w.to_string(),
                None => format!("classes={}", r.classes_covered),
            };
            let verdict = if r.holds { "holds" } else { "fails" };
            progress(cfg, || {
                format!("{command} q={q} [{}] {verdict} in {:.3}s", route.as_str(), r.elapsed.as_secs_f64())
            });
            out.report.rows.push(ReportRow {
                elapsed_ms: elapsed_ms(cfg, r.elapsed),
                ..ReportRow::for_q(&ctx, &format!("{command}/{}", route.as_str()), verdict, detail)
            });
        }
        if let [(_, a), (_, b)] = reports.as_slice() {
            if (a.holds, a.witness) != (b.holds, b.witness) {
                out.problems.push(format!("{command} q={q}: fast and paper verifiers disagree"));
            }
        }
        if !reports[0].1.holds {
            failing.push(q);
        }
    }
    let report = &mut out.report;
    let prefix = command.trim_start_matches("verify-");
    report.note(&format!("{prefix}_mode"), mode.as_str());
    report.note(&format!("{prefix}_examined"), qs.len());
    report.note(&format!("{prefix}_exceptions"), join(&failing));
    if cfg.expect_paper {
        let want = known::expected_within(expected_exceptions(property), qs);
        let consistent = failing == want;
        report.note(&format!("{prefix}_expected_exceptions"), join(&want));
        if !consistent {
            out.problems.push(format!("{command} exceptions {} differ from expected {}", join(&failing), join(&want)));
        }
    }
    Ok(failing)
}

fn run_oracle(cfg: &RunConfig, qs: &[u64], config: &OracleConfig, out: &mut Outcome) -> anyhow::Result<()> {
    let mut failed = Vec::new();
    for &q in qs {
        let res = oracle::run_suite(q, config)?;
        let ctx = validate_q(q)?;
        for row in &res.b_sums {
            out.report.rows.push(ReportRow::for_q(
                &ctx,
                "oracle/b-sum",
                format!("order={}", row.order),
                format!(
                    "divides_q_plus_1={};characters={};min_abs={:.9};max_abs={:.9}",
                    row.divides_q_plus_1, row.characters, row.min_abs, row.max_abs
                ),
            ));
        }
        for check in &res.checks {
            let verdict = if check.passed() { "pass" } else { "fail" };
            out.report.rows.push(ReportRow::for_q(
                &ctx,
                &format!("oracle/{}", check.name),
                verdict,
                format!("cases={};worst={:.3e};tolerance={:.0e}", check.cases, check.worst, check.tolerance),
            ));
            if !check.passed() {
                out.problems.push(format!("oracle q={q}: {} exceeded tolerance ({:.3e})", check.name, check.worst));
            }
        }
        progress(cfg, || format!("oracle q={q}: {}", if res.passed() { "pass" } else { "fail" }));
        if !res.passed() {
            failed.push(q);
        }
    }
    out.report.note("oracle_fields", join(qs));
    out.report.note("oracle_failures", join(&failed));
    Ok(())
}

fn run_reproduce_all(cfg: &RunConfig, line_max_q: u64, mode: Mode, out: &mut Outcome) -> anyhow::Result<()> {
    let strict = RunConfig { expect_paper: true, ..cfg.clone() };
    let mut claims: Vec<(&str, bool)> = Vec::new();
    let mut step = |out: &mut Outcome, name: &'static str, f: &mut dyn FnMut(&mut Outcome) -> anyhow::Result<()>| {
        let before = out.problems.len();
        f(out)?;
        claims.push((name, out.problems.len() == before));
        anyhow::Ok(())
    };

    step(out, "prime_count_cutoff", &mut |out| {
        let rep = criteria::cutoff_report();
        let cutoff = criteria::prime_count_cutoff();
        out.report.rows.push(ReportRow::general(
            "prime-count-cutoff",
            cutoff.to_string(),
            format!(
                "q0={:.6e};primorial_below={};primorial_at={};min_q_at_cutoff={}",
                rep.q0, rep.primorial_below, rep.primorial_at, rep.min_q_at_cutoff
            ),
        ));
        Ok(())
    })?;
    step(out, "algorithm1", &mut |out| {
        run_algorithm1(&strict, &known::ALGORITHM1_CLAIMS, out);
        Ok(())
    })?;
    step(out, "scan", &mut |out| {
        run_scan(&strict, known::SCAN_RANGE.0, known::SCAN_RANGE.1, out);
        Ok(())
    })?;
    step(out, "translate", &mut |out| {
        run_verify(&strict, PropertyKind::Translate, &known::SCAN_EXCEPTIONS, mode, out).map(drop)
    })?;
    let line_qs: Vec<u64> = known::SCAN_EXCEPTIONS.iter().copied().filter(|&q| q <= line_max_q).collect();
    step(out, "line", &mut |out| run_verify(&strict, PropertyKind::Line, &line_qs, mode, out).map(drop))?;

    for (name, ok) in &claims {
        out.report.note(&format!("claim_{name}"), if *ok { "consistent" } else { "inconsistent" });
    }
    out.report.note("line_max_q", line_max_q);
    out.report.note("verdict", if out.ok() { "consistent" } else { "inconsistent" });
    Ok(())
}
