//! `anchorsum`: exact, float and Monte Carlo evaluation of sensor
//! displacement moments from the command line.

mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use anchorsum_core::asymptotics::{self, lemma1_sum, lemma2_sum, lemma4_constant_f64, lemma4_sum};
use anchorsum_core::identities;
use anchorsum_core::moments::{self, EXACT_LIMIT};
use anchorsum_core::simulation::estimate;
use anchorsum_core::{Error, ExactRational, MomentQuery, SimulationConfig, Suite, Theorem};

use output::{approx, exact, float, Format, OutputRecord};

const EXIT_IDENTITY_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIZE_GUARD: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "anchorsum",
    version,
    about = "Sensor displacement moments on the unit interval"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Omit the run timestamp so output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact rational total, optionally with the per-sensor table.
    Exact(ExactArgs),
    /// Monte Carlo estimate of the total.
    Simulate(SimulateArgs),
    /// Normalized totals against the leading constant over a grid of n.
    Asymptotic(AsymptoticArgs),
    /// Evaluate one of the auxiliary sums.
    Lemma(LemmaArgs),
    /// Run the identity verification suites.
    Identities(IdentitiesArgs),
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    a: u32,
    /// Also list every sensor's moment and its signed and folded parts.
    #[arg(long)]
    per_sensor: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    a: u32,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; the estimate does not depend on this.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Debug, Args)]
struct AsymptoticArgs {
    #[arg(long, value_parser = ["1", "2"])]
    theorem: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    a: u32,
    /// Strictly increasing list of n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<u64>,
}

#[derive(Debug, Args)]
struct LemmaArgs {
    #[arg(long, value_parser = ["1", "2", "4"])]
    id: String,
    /// Odd moment order (sums 1 and 2).
    #[arg(long)]
    a: Option<u32>,
    #[arg(long, conflicts_with = "grid")]
    n: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    grid: Vec<u64>,
    /// Exponent of the extra `t_i^c` factor (sum 4 only; default 0).
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Stirling,
    Eulerian,
    Beta,
    Gould,
    FiniteDiff,
    Technical2b,
}

#[derive(Debug, Args)]
struct IdentitiesArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
}

/// A run that produced a record, plus whether it should exit as a failure.
struct Outcome {
    record: OutputRecord,
    failed: bool,
}

impl From<OutputRecord> for Outcome {
    fn from(record: OutputRecord) -> Self {
        Self {
            record,
            failed: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::SizeGuard { .. } => EXIT_SIZE_GUARD,
                _ => EXIT_USAGE,
            });
        }
    };
    let mut record = outcome.record;
    if !cli.no_timestamp {
        record.metadata.timestamp = Some(chrono::Utc::now().to_rfc3339());
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = record
        .write(cli.format, &mut lock)
        .and_then(|_| lock.flush())
    {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    if outcome.failed {
        ExitCode::from(EXIT_IDENTITY_FAILURE)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(command: &Command) -> anchorsum_core::Result<Outcome> {
    match command {
        Command::Exact(args) => run_exact(args).map(Into::into),
        Command::Simulate(args) => run_simulate(args).map(Into::into),
        Command::Asymptotic(args) => run_asymptotic(args).map(Into::into),
        Command::Lemma(args) => run_lemma(args).map(Into::into),
        Command::Identities(args) => Ok(run_identities(args)),
    }
}

fn run_exact(args: &ExactArgs) -> anchorsum_core::Result<OutputRecord> {
    let q = MomentQuery::new(args.n, args.a)?;
    let mut record = OutputRecord::new(
        "exact",
        &[
            "i",
            "t_i",
            "moment",
            "moment_approx",
            "signed_part",
            "folded_part",
        ],
    );
    record.param("n", args.n).param("a", args.a);
    if args.per_sensor {
        let breakdown = moments::total_moment_exact(&q)?;
        let mut signed = ExactRational::zero();
        let mut folded = ExactRational::zero();
        for s in &breakdown.per_sensor {
            signed += &s.e_signed_part;
            folded += &s.e_folded_part;
            record.push_row(vec![
                s.i.into(),
                exact(&s.t),
                exact(&s.e_total),
                approx(s.e_total.to_f64()),
                exact(&s.e_signed_part),
                exact(&s.e_folded_part),
            ]);
        }
        record.push_row(total_row(&breakdown.total, Some((&signed, &folded))));
    } else {
        let total = moments::total_moment_exact_value(&q)?;
        record.push_row(total_row(&total, None));
    }
    Ok(record)
}

fn total_row(total: &ExactRational, parts: Option<(&ExactRational, &ExactRational)>) -> Vec<Value> {
    let (signed, folded) = parts.map_or((Value::Null, Value::Null), |(s, f)| (exact(s), exact(f)));
    vec![
        "total".into(),
        Value::Null,
        exact(total),
        approx(total.to_f64()),
        signed,
        folded,
    ]
}

fn run_simulate(args: &SimulateArgs) -> anchorsum_core::Result<OutputRecord> {
    let workers = usize::try_from(args.workers).map_err(|e| Error::Config(e.to_string()))?;
    let config = SimulationConfig::new(args.n, args.a, args.trials, args.seed, workers)?;
    let result = estimate(&config)?;
    let mut record = OutputRecord::new(
        "simulate",
        &[
            "mean",
            "std_error",
            "ci95_low",
            "ci95_high",
            "trials",
            "exact",
            "exact_approx",
            "z_score",
        ],
    );
    record
        .param("n", args.n)
        .param("a", args.a)
        .param("trials", args.trials)
        .param("workers", args.workers);
    record.metadata.seed = Some(args.seed);
    let (reference, reference_approx, z) = if args.n <= EXACT_LIMIT {
        let value = moments::total_moment_exact_value(&MomentQuery::new(args.n, args.a)?)?;
        let v = value.to_f64();
        let z = if result.std_error > 0.0 {
            float((result.mean - v) / result.std_error)
        } else {
            Value::Null
        };
        (exact(&value), approx(v), z)
    } else {
        (Value::Null, Value::Null, Value::Null)
    };
    record.push_row(vec![
        float(result.mean),
        float(result.std_error),
        float(result.ci95.0),
        float(result.ci95.1),
        result.trials.into(),
        reference,
        reference_approx,
        z,
    ]);
    Ok(record)
}

fn run_asymptotic(args: &AsymptoticArgs) -> anchorsum_core::Result<OutputRecord> {
    let theorem = Theorem::from_id(args.theorem.parse().expect("restricted by clap"))?;
    let report = asymptotics::remainder_diagnostic(theorem, args.a, &args.grid)?;
    let mut record = OutputRecord::new(
        "asymptotic",
        &[
            "n",
            "measured",
            "normalized",
            "residual",
            "leading_constant",
            "leading_constant_approx",
            "fitted_exponent",
        ],
    );
    record
        .param("theorem", theorem.id())
        .param("a", args.a)
        .param("predicted_power", float(report.predicted_power));
    let fitted = report.fitted_exponent.map_or(Value::Null, float);
    for k in 0..report.n_grid.len() {
        record.push_row(vec![
            report.n_grid[k].into(),
            float(report.measured[k]),
            float(report.normalized[k]),
            float(report.residuals[k]),
            report.constant.to_string().into(),
            approx(report.constant_f64),
            fitted.clone(),
        ]);
    }
    Ok(record)
}

fn run_lemma(args: &LemmaArgs) -> anchorsum_core::Result<OutputRecord> {
    let grid = match (args.n, args.grid.is_empty()) {
        (Some(n), _) => vec![n],
        (None, false) => {
            asymptotics::validate_grid(&args.grid)?;
            args.grid.clone()
        }
        (None, true) => return Err(Error::Config("one of --n or --grid is required".into())),
    };
    match args.id.as_str() {
        "4" => lemma4_record(args.c.unwrap_or(0.0), &grid),
        id if args.c.is_some() => Err(Error::Config(format!("--c does not apply to sum {id}"))),
        id => {
            let a = args
                .a
                .ok_or_else(|| Error::Config(format!("sum {id} needs --a")))?;
            let sum = if id == "1" { lemma1_sum } else { lemma2_sum };
            let mut record =
                OutputRecord::new("lemma", &["n", "value", "value_approx", "normalized"]);
            record
                .param("id", id.parse::<u8>().expect("restricted by clap"))
                .param("a", a);
            for &n in &grid {
                let v = sum(n, a)?;
                let vf = v.to_f64();
                let scaled = (n as f64).powf((a as f64 - 1.0) / 2.0) * vf.abs();
                record.push_row(vec![n.into(), exact(&v), approx(vf), float(scaled)]);
            }
            Ok(record)
        }
    }
}

fn lemma4_record(c: f64, grid: &[u64]) -> anchorsum_core::Result<OutputRecord> {
    let constant = lemma4_constant_f64(c);
    let mut record = OutputRecord::new("lemma", &["n", "value", "normalized", "constant"]);
    record.param("id", 4).param("c", float(c));
    for &n in grid {
        let v = lemma4_sum(n, c)?;
        record.push_row(vec![
            n.into(),
            float(v),
            float(v / (n as f64).powf(1.5)),
            float(constant),
        ]);
    }
    Ok(record)
}

fn run_identities(args: &IdentitiesArgs) -> Outcome {
    let results = match args.suite {
        SuiteArg::All => identities::run_all(),
        other => identities::run_suite(suite_of(other)),
    };
    let mut record = OutputRecord::new(
        "identities",
        &[
            "suite",
            "identity",
            "parameters",
            "cases",
            "passed",
            "residual",
        ],
    );
    record.param("suite", suite_name(args.suite));
    let failed = results.iter().any(|r| !r.passed);
    for r in results {
        record.push_row(vec![
            r.suite.name().into(),
            r.identity.into(),
            r.parameters.into(),
            r.cases.into(),
            r.passed.into(),
            float(r.residual),
        ]);
    }
    Outcome { record, failed }
}

fn suite_of(arg: SuiteArg) -> Suite {
    match arg {
        SuiteArg::Stirling => Suite::Stirling,
        SuiteArg::Eulerian => Suite::Eulerian,
        SuiteArg::Beta => Suite::Beta,
        SuiteArg::Gould => Suite::Gould,
        SuiteArg::FiniteDiff => Suite::FiniteDiff,
        SuiteArg::Technical2b => Suite::Technical2b,
        SuiteArg::All => unreachable!("handled by the caller"),
    }
}

fn suite_name(arg: SuiteArg) -> &'static str {
    match arg {
        SuiteArg::All => "all",
        other => suite_of(other).name(),
    }
}
