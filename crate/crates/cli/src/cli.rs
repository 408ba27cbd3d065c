//! Argument parsing, dispatch and output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::analyze;
use crate::config::{RunConfig, Tolerances, DEFAULT_SEED};
use crate::report::{records_table, table_path, Report, Table};
use crate::suites::{self, Lemma, SuiteParams};
use crate::sweep;
use crate::zoo_checks::{self, ExampleId, ExampleParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "incl-verify", version, about = "Seeded numerical checks for cone-valued differential inclusions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, env = "INCL_VERIFY_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Sample count, or the tau grid size for `sweep-tau`.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Cone level for `analyze-matrix`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta: Option<f64>,

    /// Beltrami modulus for `example case1`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<f64>,

    /// Distortion bound `K`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub distortion: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eps: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    /// Override one tolerance, e.g. `--tol identity=1e-10`. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,

    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Rigorous margin bounds (n <= 3).
    #[arg(long, global = true)]
    pub certify: bool,

    /// Add wall time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, distortion, cone margin and verdict of one matrix.
    AnalyzeMatrix {
        /// Row-major JSON such as `[[1,0],[0,1]]`, a file path, or `-` for stdin.
        matrix: String,
    },
    /// Run a seeded property suite.
    Verify { lemma: Lemma },
    /// Run the claims attached to an example mapping.
    Example { id: ExampleId },
    /// Cone level as a function of tau, and the sharp threshold.
    SweepTau,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Domain(#[from] invertibility_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub tables: Vec<Table>,
}

/// Applies `name=value` overrides by round-tripping through JSON.
pub fn apply_overrides(base: Tolerances, overrides: &[String]) -> Result<Tolerances, CliError> {
    let mut v = serde_json::to_value(base).expect("tolerances serialize");
    let map = v.as_object_mut().expect("tolerances are an object");
    for o in overrides {
        let (key, value) =
            o.split_once('=').ok_or_else(|| CliError::Usage(format!("--tol expects NAME=VALUE, got `{o}`")))?;
        let key = key.trim().replace('-', "_");
        if !map.contains_key(&key) {
            let known: Vec<&str> = map.keys().map(String::as_str).collect();
            return Err(CliError::Usage(format!("unknown tolerance `{key}`; known: {}", known.join(", "))));
        }
        let x: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("tolerance `{key}` needs a number, got `{value}`")))?;
        if !(x.is_finite() && x >= 0.0) {
            return Err(CliError::Usage(format!("tolerance `{key}` must be finite and nonnegative")));
        }
        map.insert(key, Value::from(x));
    }
    Ok(serde_json::from_value(v).expect("tolerance keys were checked"))
}

fn read_matrix_arg(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else if arg == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(arg)?)
    }
}

fn samples(cli: &Cli, default: usize) -> Result<usize, CliError> {
    match cli.samples {
        Some(0) => Err(CliError::Usage("--samples must be positive".into())),
        Some(s) => Ok(s),
        None => Ok(default),
    }
}

/// Runs a parsed command without writing anything.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let started = Instant::now();
    if cli.format == Format::Csv && cli.out.is_none() {
        return Err(CliError::Usage("--format csv needs --out".into()));
    }
    let tol = apply_overrides(Tolerances::default(), &cli.tol)?;
    let mut config = RunConfig::new("", cli.seed);
    config.tolerances = tol;
    config.certify = cli.certify;
    config.n = cli.n;
    let (records, tables, data) = match &cli.command {
        Command::AnalyzeMatrix { matrix } => {
            config.command = "analyze-matrix".into();
            let text = read_matrix_arg(matrix)?;
            let a = analyze::parse_matrix(&text).map_err(CliError::Parse)?;
            let delta = cli.delta.unwrap_or(0.0);
            config.delta = Some(delta);
            config.distortion = cli.distortion;
            config.n = Some(a.dim());
            let (analysis, records) = analyze::analyze(&a, delta, cli.distortion, cli.certify)?;
            let data = serde_json::to_value(&analysis).expect("analysis serializes");
            (records, vec![], Some(data))
        }
        Command::Verify { lemma } => {
            config.command = "verify".into();
            config.target = Some(lemma.id().into());
            let s = samples(cli, lemma.default_samples())?;
            config.samples = Some(s);
            let p = SuiteParams { seed: cli.seed, samples: s, n: cli.n, tol };
            (suites::run(*lemma, &p)?, vec![], None)
        }
        Command::Example { id } => {
            config.command = "example".into();
            config.target = Some(id.id().into());
            let s = samples(cli, id.default_samples())?;
            config.samples = Some(s);
            config.k = cli.k;
            config.eps = cli.eps;
            config.lambda = cli.lambda;
            let p =
                ExampleParams { seed: cli.seed, samples: s, n: cli.n, k: cli.k, eps: cli.eps, lambda: cli.lambda, tol };
            let out = zoo_checks::run(*id, &p)?;
            (out.records, out.tables, None)
        }
        Command::SweepTau => {
            config.command = "sweep-tau".into();
            let s = samples(cli, sweep::DEFAULT_GRID)?;
            config.samples = Some(s);
            config.distortion = cli.distortion;
            let ks: Vec<f64> = cli.distortion.map_or(sweep::DEFAULT_DISTORTIONS.to_vec(), |k| vec![k]);
            let out = sweep::run(&ks, s, &tol)?;
            let data = serde_json::to_value(&out.sweeps).expect("sweeps serialize");
            (out.records, out.tables, Some(data))
        }
    };
    let mut report = Report::new(config, records, data);
    if cli.timing {
        report.wall_time_s = Some(started.elapsed().as_secs_f64());
    }
    Ok(Outcome { report, tables })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(CliError::Io)
}

/// Writes the report (and tables in CSV mode) where the flags say.
pub fn emit(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write) -> Result<(), CliError> {
    let json = outcome.report.to_json();
    match (cli.format, &cli.out) {
        (Format::Json, Some(path)) => write_file(path, json.as_bytes()),
        (Format::Json, None) => Ok(stdout.write_all(json.as_bytes())?),
        (Format::Csv, Some(path)) => {
            let fallback;
            let tables: &[Table] = if outcome.tables.is_empty() {
                fallback = [records_table(&outcome.report.records)];
                &fallback
            } else {
                &outcome.tables
            };
            for (i, t) in tables.iter().enumerate() {
                write_file(&table_path(path, &t.name, i == 0), t.to_csv_string().as_bytes())?;
            }
            Ok(stdout.write_all(json.as_bytes())?)
        }
        (Format::Csv, None) => Err(CliError::Usage("--format csv needs --out".into())),
    }
}

/// Full entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("incl-verify: {e}");
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    if let Err(e) = emit(&cli, &outcome, &mut stdout.lock()) {
        eprintln!("incl-verify: {e}");
        return e.exit_code();
    }
    let s = outcome.report.summary;
    eprintln!("incl-verify: {} pass, {} fail, {} inconclusive", s.pass, s.fail, s.inconclusive);
    outcome.report.exit_code()
}
