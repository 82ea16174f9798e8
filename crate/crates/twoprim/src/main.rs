use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use twoprim::app::{self, Command, Mode, RunConfig};
use twoprim::known;
use twoprim::oracle::OracleConfig;
use twoprim::report::{self, Format};
use twoprim_core::PropertyKind;

/// Verification engine for 2-primitive elements on translates and lines of F_q in F_{q^2}.
#[derive(Parser)]
#[command(name = "twoprim", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report file (default: standard output).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Exit nonzero unless results match the published exception sets and counts.
    #[arg(long, global = true)]
    expect_paper: bool,
    /// Fill the elapsed_ms column.
    #[arg(long, global = true)]
    timings: bool,
    /// No progress lines on standard error.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Fast,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Paper => Mode::Paper,
            ModeArg::Fast => Mode::Fast,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct QSelect {
    /// A single q.
    #[arg(long)]
    q: Option<u64>,
    /// Comma-separated q values, or `scan-exceptions`.
    #[arg(long)]
    q_list: Option<String>,
    /// Every odd prime power in lo:hi.
    #[arg(long)]
    range: Option<String>,
}

impl QSelect {
    fn resolve(&self) -> anyhow::Result<Vec<u64>> {
        match (&self.q, &self.q_list, &self.range) {
            (Some(q), _, _) => Ok(vec![*q]),
            (_, Some(list), _) => app::parse_q_list(list),
            (_, _, Some(range)) => {
                let (lo, hi) = app::parse_range(range)?;
                Ok(app::qs_in_range(lo, hi))
            }
            _ => unreachable!("clap requires one selector"),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify every odd prime power in a range by the character-sum conditions.
    Scan {
        #[arg(long, default_value = "3:1048576")]
        range: String,
    },
    /// Evaluate the sieving bound over a band of distinct-prime counts.
    Algorithm1 {
        #[arg(long, requires = "t2")]
        t1: Option<u32>,
        #[arg(long, requires = "t1")]
        t2: Option<u32>,
    },
    /// Decide the translate property.
    VerifyTranslate {
        #[command(flatten)]
        select: QSelect,
        #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
        mode: ModeArg,
    },
    /// Decide the line property.
    VerifyLine {
        #[command(flatten)]
        select: QSelect,
        #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
        mode: ModeArg,
    },
    /// Run the character-sum oracle suite on small fields.
    Oracle {
        #[command(flatten)]
        select: QSelect,
        #[arg(long, default_value_t = OracleConfig::default().seed)]
        seed: u64,
        /// Random divisor families for the sieve inequality.
        #[arg(long, default_value_t = OracleConfig::default().families)]
        families: usize,
    },
    /// Run every stage and report a single verdict against the published results.
    ReproduceAll {
        /// Largest q for the line property.
        #[arg(long, default_value_t = known::DEFAULT_LINE_MAX_Q)]
        line_max_q: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
        mode: ModeArg,
    },
}

fn command(cmd: &Cmd) -> anyhow::Result<Command> {
    Ok(match cmd {
        Cmd::Scan { range } => {
            let (lo, hi) = app::parse_range(range)?;
            Command::Scan { lo, hi }
        }
        Cmd::Algorithm1 { t1, t2 } => {
            let pairs = match (t1, t2) {
                (Some(t1), Some(t2)) => {
                    anyhow::ensure!(2 <= *t1 && t1 <= t2, "algorithm1 needs 2 <= t1 <= t2");
                    vec![(*t1, *t2)]
                }
                _ => known::ALGORITHM1_CLAIMS.to_vec(),
            };
            Command::Algorithm1 { pairs }
        }
        Cmd::VerifyTranslate { select, mode } => {
            Command::Verify { property: PropertyKind::Translate, qs: select.resolve()?, mode: (*mode).into() }
        }
        Cmd::VerifyLine { select, mode } => {
            Command::Verify { property: PropertyKind::Line, qs: select.resolve()?, mode: (*mode).into() }
        }
        Cmd::Oracle { select, seed, families } => {
            Command::Oracle { qs: select.resolve()?, config: OracleConfig { seed: *seed, families: *families } }
        }
        Cmd::ReproduceAll { line_max_q, mode } => {
            Command::ReproduceAll { line_max_q: *line_max_q, mode: (*mode).into() }
        }
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = RunConfig {
        command: command(&cli.command)?,
        expect_paper: cli.expect_paper,
        timings: cli.timings,
        progress: !cli.quiet,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        anyhow::ensure!(n > 0, "--threads must be positive");
        pool = pool.num_threads(n);
    }
    let outcome = pool.build()?.install(|| app::execute(&cfg))?;

    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    match &cli.output {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            report::write_report(&outcome.report, format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report::write_report(&outcome.report, format, &mut w)?;
            w.flush()?;
        }
    }
    for problem in &outcome.problems {
        eprintln!("mismatch: {problem}");
    }
    Ok(outcome.ok())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
