use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pmlab_core::{
    complex_reference_norm, intersection_norm, j_norm_discrete_with, j_seminorm_continuous_with, norm_eval,
    pm_norm_continuous, pm_norm_discrete, run_suite, sum_norm, tail_functional_with, to_csv, uc_norm_with,
    ContinuousGrid, Couple, EnumOptions, FiniteSeq, NormSpec, SolverCfg, StepFunction, Suite, SuiteConfig,
    SuiteReport, ThetaR, Vector,
};
use serde::Deserialize;
use serde_json::{json, Value};

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_ASSERTION: u8 = 4;

#[derive(Parser)]
#[command(name = "pmlab", version, about = "Plus-minus interpolation norms: evaluation and verification runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (defaults to PMLAB_THREADS, then all cores).
    #[arg(long, global = true, env = "PMLAB_THREADS")]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Write only this report format (both by default).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one norm described by a JSON config and print the estimate.
    Norm {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the suite named in the config.
    Verify(RunArgs),
    /// Run a limit scan; the config's suite field is ignored.
    LimitScan(RunArgs),
    /// Run the embedding check; the config's suite field is ignored.
    Embed(RunArgs),
    /// Summarise a saved report, or convert it to CSV.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Parse(String),
    Domain(pmlab_core::Error),
    Assertion(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Domain(e) if e.is_domain() => EXIT_DOMAIN,
            Failure::Domain(_) | Failure::Assertion(_) => EXIT_ASSERTION,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Domain(e) => write!(f, "error: {e}"),
            Failure::Assertion(m) => write!(f, "assertion failed: {m}"),
        }
    }
}

impl From<pmlab_core::Error> for Failure {
    fn from(e: pmlab_core::Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(value: Value) -> Result<T, Failure> {
    serde_json::from_value(value).map_err(|e| Failure::Parse(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum NormRequest {
    Norm {
        norm: NormSpec,
        v: Vector,
    },
    Uc {
        norm: NormSpec,
        seq: FiniteSeq,
        #[serde(default)]
        subset: Option<BTreeSet<i64>>,
        #[serde(default)]
        enumeration: EnumOptions,
    },
    Tail {
        norm: NormSpec,
        seq: FiniteSeq,
        #[serde(default)]
        enumeration: EnumOptions,
    },
    JDiscrete {
        couple: Couple,
        theta: f64,
        r: f64,
        seq: FiniteSeq,
        #[serde(default)]
        subset: Option<BTreeSet<i64>>,
        #[serde(default)]
        enumeration: EnumOptions,
    },
    JContinuous {
        couple: Couple,
        theta: f64,
        u: StepFunction,
        #[serde(default)]
        cells: Option<BTreeSet<usize>>,
        #[serde(default)]
        enumeration: EnumOptions,
    },
    Sum {
        couple: Couple,
        v: Vector,
    },
    Intersection {
        couple: Couple,
        v: Vector,
    },
    Reference {
        couple: Couple,
        theta: f64,
        v: Vector,
    },
    PmDiscrete {
        couple: Couple,
        theta: f64,
        r: f64,
        a: Vector,
        #[serde(default)]
        solver: SolverCfg,
    },
    PmContinuous {
        couple: Couple,
        theta: f64,
        a: Vector,
        #[serde(default)]
        grid: ContinuousGrid,
        #[serde(default)]
        solver: SolverCfg,
    },
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_norm(config: &Path) -> Result<Value, Failure> {
    let request: NormRequest = parse(read_json(config)?)?;
    let exact = |value: f64| json!({ "value": value, "kind": "exact" });
    Ok(match request {
        NormRequest::Norm { norm, v } => exact(norm_eval(&norm, &v)?),
        NormRequest::Uc { norm, seq, subset, enumeration } => {
            to_value(&uc_norm_with(&norm, &seq, subset.as_ref(), &enumeration)?)
        }
        NormRequest::Tail { norm, seq, enumeration } => {
            json!({ "tail": tail_functional_with(&norm, &seq, &enumeration)? })
        }
        NormRequest::JDiscrete { couple, theta, r, seq, subset, enumeration } => {
            let tr = ThetaR::new(theta, r)?;
            to_value(&j_norm_discrete_with(&couple, &tr, &seq, subset.as_ref(), &enumeration)?)
        }
        NormRequest::JContinuous { couple, theta, u, cells, enumeration } => {
            to_value(&j_seminorm_continuous_with(&couple, theta, &u, cells.as_ref(), &enumeration)?)
        }
        NormRequest::Sum { couple, v } => to_value(&sum_norm(&couple, &v)?),
        NormRequest::Intersection { couple, v } => exact(intersection_norm(&couple, &v)?),
        NormRequest::Reference { couple, theta, v } => exact(complex_reference_norm(&couple, theta, &v)?),
        NormRequest::PmDiscrete { couple, theta, r, a, solver } => {
            let tr = ThetaR::new(theta, r)?;
            to_value(&pm_norm_discrete(&couple, &tr, &a, &solver)?)
        }
        NormRequest::PmContinuous { couple, theta, a, grid, solver } => {
            to_value(&pm_norm_continuous(&couple, theta, &a, &grid, &solver)?)
        }
    })
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Equivalence => "equivalence",
        Suite::LimitScan => "limit-scan",
        Suite::Embed => "embed",
    }
}

fn cmd_run(args: &RunArgs, forced: Option<Suite>) -> Result<(), Failure> {
    let mut value = read_json(&args.config)?;
    if let (Some(suite), Some(obj)) = (forced, value.as_object_mut()) {
        obj.insert("suite".into(), to_value(&suite));
    }
    let mut cfg: SuiteConfig = parse(value)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let report = run_suite(&cfg)?;
    fs::create_dir_all(&args.out).map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))?;
    let stem = suite_name(cfg.suite);
    if args.format != Some(Format::Csv) {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        write_file(&args.out.join(format!("{stem}.json")), &(text + "\n"))?;
    }
    if args.format != Some(Format::Json) {
        write_file(&args.out.join(format!("{stem}.csv")), &to_csv(&report)?)?;
    }
    println!("passed {}/{}", report.passed, report.total);
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .instances
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.index.to_string())
            .collect();
        Err(Failure::Assertion(format!("instances {} failed", failed.join(", "))))
    }
}

fn cmd_report(path: &Path, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let report: SuiteReport = parse(read_json(path)?)?;
    let text = match format {
        Format::Csv => to_csv(&report)?,
        Format::Json => {
            let failed: Vec<usize> = report.instances.iter().filter(|r| !r.pass).map(|r| r.index).collect();
            let summary = json!({
                "suite": suite_name(report.config.suite),
                "seed": report.config.seed,
                "passed": report.passed,
                "total": report.total,
                "failed": failed,
            });
            serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"
        }
    };
    match out {
        Some(p) => write_file(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Io(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Norm { config } => {
            let value = cmd_norm(&config)?;
            println!("{}", serde_json::to_string_pretty(&value).expect("estimate serializes"));
            Ok(())
        }
        Command::Verify(args) => cmd_run(&args, None),
        Command::LimitScan(args) => cmd_run(&args, Some(Suite::LimitScan)),
        Command::Embed(args) => cmd_run(&args, Some(Suite::Embed)),
        Command::Report { config, format, out } => cmd_report(&config, format, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pmlab: {e}");
            ExitCode::from(e.code())
        }
    }
}
