use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use signbal_core::graph::{read_edge_list, write_edge_list, ParseOptions};
use signbal_core::graphon::{sample_network, SpecFile};
use signbal_core::harness::{run_to_dir, ExperimentConfig, HarnessError};
use signbal_core::inference::{
    balance_test, confidence_interval, Alternative, CiOptions, InferenceError, Method, NullValue,
    TestOptions,
};
use signbal_core::{triangle_profile, SignedAdjacency, Target};

/// Balance analysis of signed networks.
#[derive(Parser, Debug)]
#[command(name = "signbal", version, about)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, env = "SIGNBAL_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a network from a graphon spec file and write it as an edge list.
    Simulate(SimulateArgs),
    /// Count triangles by sign type.
    Census(CensusArgs),
    /// Confidence interval for a balance ratio.
    Ci(CiArgs),
    /// Test a balance ratio against a null value.
    Test(TestArgs),
    /// Run a Monte Carlo study described by a JSON config.
    Mc(McArgs),
    /// Print the version.
    Version,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// JSON spec file `{name, params, rho, s, n}`.
    #[arg(long)]
    spec: PathBuf,
    /// Node count (overrides `n` in the spec file).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge list (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Edge list with lines `u v s`, `s` in {+1, -1, 1}.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Human-readable output instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args, Debug)]
struct InferenceArgs {
    /// balanced, type1, type2, type3 or type4.
    #[arg(long, default_value = "balanced")]
    target: Target,
    /// Perturbation constant; `--c-delta` alone uses 0.1.
    #[arg(long, num_args = 0..=1, default_value_t = 0.0, default_missing_value = "0.1")]
    c_delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct CiArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    inference: InferenceArgs,
    #[arg(long, default_value_t = 0.95, value_parser = parse_level)]
    level: f64,
    /// edgeworth, normal or bootstrap.
    #[arg(long, default_value = "edgeworth")]
    method: Method,
    /// Bootstrap replicate count.
    #[arg(long, default_value_t = 1000)]
    replicates: usize,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    inference: InferenceArgs,
    /// Null value: a number, or `adjusted` for the sign-shuffling baseline.
    #[arg(long, default_value = "0.5")]
    null: NullValue,
    /// greater, less or two-sided.
    #[arg(long = "alt", default_value = "greater")]
    alternative: Alternative,
    /// edgeworth or normal.
    #[arg(long, default_value = "edgeworth")]
    method: Method,
}

#[derive(Args, Debug)]
struct McArgs {
    /// Experiment config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the CSV files.
    #[arg(long)]
    out: PathBuf,
    /// Also write long-format CSV for plotting.
    #[arg(long)]
    plot_data: bool,
}

fn parse_level(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("level {v} must lie in (0, 1)"))
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Degenerate(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Degenerate(m) => m,
        }
    }
}

impl From<InferenceError> for CliError {
    fn from(e: InferenceError) -> Self {
        match e {
            e if e.is_degenerate() => CliError::Degenerate(e.to_string()),
            e @ (InferenceError::InvalidLevel(_)
            | InferenceError::InvalidCDelta(_)
            | InferenceError::UnsupportedMethod(_)
            | InferenceError::TooFewReplicates { .. }) => CliError::Usage(e.to_string()),
            e => CliError::Data(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Inference(e) => e.into(),
            HarnessError::AllDegenerate { .. } => CliError::Degenerate(e.to_string()),
            e => CliError::Data(e.to_string()),
        }
    }
}

fn data_err(context: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", context.display()))
}

fn load(path: &Path) -> Result<SignedAdjacency, CliError> {
    let file = File::open(path).map_err(|e| data_err(path, e))?;
    read_edge_list(BufReader::new(file), &ParseOptions::default()).map_err(|e| data_err(path, e))
}

fn emit<T: Serialize>(value: &T, pretty: bool) -> Result<(), CliError> {
    let out = io::stdout();
    let mut out = out.lock();
    let result = if pretty {
        let json = serde_json::to_value(value).expect("serializable");
        write_table(&mut out, &json, "")
    } else {
        serde_json::to_writer(&mut out, value)
            .map_err(io::Error::other)
            .and_then(|_| writeln!(out))
    };
    result.map_err(|e| CliError::Data(format!("writing output: {e}")))
}

fn write_table(out: &mut impl Write, value: &serde_json::Value, prefix: &str) -> io::Result<()> {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                write_table(out, v, &key)?;
            }
            Ok(())
        }
        serde_json::Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_u64() && !n.is_i64() => writeln!(out, "{prefix:<28} {x:.6}"),
            _ => writeln!(out, "{prefix:<28} {n}"),
        },
        serde_json::Value::String(s) => writeln!(out, "{prefix:<28} {s}"),
        other => writeln!(out, "{prefix:<28} {other}"),
    }
}

#[derive(Serialize)]
struct CensusOutput {
    n: usize,
    total: u64,
    c1: u64,
    c2: u64,
    c3: u64,
    c4: u64,
    balanced: u64,
}

fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.spec).map_err(|e| data_err(&args.spec, e))?;
    let spec_file: SpecFile = serde_json::from_str(&text).map_err(|e| data_err(&args.spec, e))?;
    let n = args.n.or(spec_file.n).ok_or_else(|| {
        CliError::Usage("node count missing: pass --n or set n in the spec file".into())
    })?;
    let spec = spec_file
        .resolve(Some(n))
        .map_err(|e| data_err(&args.spec, e))?;
    let adj = sample_network(&spec, n, args.seed).map_err(|e| CliError::Data(e.to_string()))?;
    let write = |w: &mut dyn Write| -> io::Result<()> {
        write_edge_list(&adj, &mut *w).map_err(io::Error::other)?;
        w.flush()
    };
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| data_err(path, e))?;
            write(&mut BufWriter::new(file)).map_err(|e| data_err(path, e))
        }
        None => write(&mut io::stdout().lock()).map_err(|e| CliError::Data(e.to_string())),
    }
}

fn census(args: &CensusArgs) -> Result<(), CliError> {
    let adj = load(&args.input.input)?;
    let c = triangle_profile(&adj).census;
    emit(
        &CensusOutput {
            n: c.n,
            total: c.total,
            c1: c.by_type[0],
            c2: c.by_type[1],
            c3: c.by_type[2],
            c4: c.by_type[3],
            balanced: c.balanced,
        },
        args.input.pretty,
    )
}

fn check_c_delta(c_delta: f64) -> Result<(), CliError> {
    if c_delta >= 0.0 && c_delta.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--c-delta {c_delta} must be finite and nonnegative"
        )))
    }
}

fn ci(args: &CiArgs) -> Result<(), CliError> {
    check_c_delta(args.inference.c_delta)?;
    let adj = load(&args.input.input)?;
    let report = confidence_interval(
        &adj,
        &CiOptions {
            level: args.level,
            target: args.inference.target,
            method: args.method,
            c_delta: args.inference.c_delta,
            seed: args.inference.seed,
            replicates: args.replicates,
        },
    )?;
    emit(&report, args.input.pretty)
}

fn test(args: &TestArgs) -> Result<(), CliError> {
    check_c_delta(args.inference.c_delta)?;
    if args.method == Method::Bootstrap {
        return Err(CliError::Usage(
            "test supports --method edgeworth or normal".into(),
        ));
    }
    let adj = load(&args.input.input)?;
    let report = balance_test(
        &adj,
        &TestOptions {
            target: args.inference.target,
            null: args.null,
            alternative: args.alternative,
            method: args.method,
            c_delta: args.inference.c_delta,
            seed: args.inference.seed,
        },
    )?;
    emit(&report, args.input.pretty)
}

fn mc(args: &McArgs) -> Result<(), CliError> {
    let config = ExperimentConfig::from_path(&args.config).map_err(|e| match e {
        HarnessError::Config(m) => CliError::Usage(format!("{}: {m}", args.config.display())),
        e => data_err(&args.config, e),
    })?;
    let files = run_to_dir(&config, &args.out, args.plot_data)?;
    #[derive(Serialize)]
    struct Written {
        files: Vec<String>,
    }
    emit(
        &Written {
            files: files.iter().map(|p| p.display().to_string()).collect(),
        },
        false,
    )
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Census(a) => census(a),
        Command::Ci(a) => ci(a),
        Command::Test(a) => test(a),
        Command::Mc(a) => mc(a),
        Command::Version => {
            println!("signbal {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("signbal: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
