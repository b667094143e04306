use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use f2sketch::error::Error;
use f2sketch::fourier::{approx_fourier_dimension, wht, DimensionMethod};
use f2sketch::gf2::BitVector;
use f2sketch::harness::{
    check_graphic_formula, curve_to_csv, dimension_error_curve, measure_distributional_mse,
    measure_error_rate, measure_worst_case_mse, CurveKind, InputSet, RunConfig,
};
use f2sketch::input::{format_input, parse_input};
use f2sketch::protocol::SharedPlan;
use f2sketch::sketch::{build_for_spec, estimate, BuildOptions, LtfMode, SketchPlan, Strategy};
use f2sketch::stream::{stream_init, StreamReader};
use f2sketch::valuations::{validate_ltf, FunctionSpec};

#[derive(Parser)]
#[command(name = "f2sketch", version, about = "Parity sketches of set functions")]
struct Cli {
    /// Base seed for every random choice.
    #[arg(long, global = true, env = "F2SKETCH_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for experiments.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier coefficients of a function spec.
    Spectrum {
        #[arg(long = "fn", value_name = "SPEC")]
        spec: PathBuf,
        /// Also report the approximate Fourier dimension for this captured energy.
        #[arg(long)]
        energy: Option<f64>,
        #[arg(long, value_enum, default_value = "exhaustive")]
        method: Method,
    },
    /// Build a sketch plan.
    Build {
        #[arg(long = "fn", value_name = "SPEC")]
        spec: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
    },
    /// Evaluate a plan on one or more inputs.
    Eval {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long = "input", required = true, num_args = 1)]
        inputs: Vec<String>,
        /// Also report the exact value f(x).
        #[arg(long = "fn", value_name = "SPEC")]
        spec: Option<PathBuf>,
    },
    /// Replay a file of coordinate flips through a plan.
    Stream {
        #[arg(long)]
        plan: PathBuf,
        /// One 0-based coordinate per line; `-` reads stdin.
        #[arg(long)]
        updates: PathBuf,
    },
    /// Simulate a two-party protocol on f(x ⊕ y).
    Protocol {
        #[arg(value_enum)]
        mode: ProtocolMode,
        #[arg(long)]
        plan: PathBuf,
        #[arg(short = 'x', long = "x")]
        x: String,
        #[arg(short = 'y', long = "y")]
        y: String,
    },
    /// Monte Carlo error measurements.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Exact validity checks.
    #[command(subcommand)]
    Check(Check),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exhaustive,
    Greedy,
}

impl From<Method> for DimensionMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Exhaustive => DimensionMethod::Exhaustive,
            Method::Greedy => DimensionMethod::Greedy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SketchKind {
    Auto,
    L1,
    TopSubspace,
    Expectation,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Direct,
    Compact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolMode {
    Oneway,
    Smp,
}

#[derive(Args, Clone)]
struct BuildArgs {
    #[arg(long, value_enum, default_value = "auto")]
    sketch: SketchKind,
    /// Squared-error target for real-valued sketches.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Failure probability for threshold sketches.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    delta: f64,
    #[arg(long, value_enum, default_value = "direct")]
    ltf_mode: Mode,
    #[arg(long, value_enum, default_value = "exhaustive")]
    method: Method,
}

impl BuildArgs {
    fn options(&self) -> BuildOptions {
        BuildOptions {
            eps: self.eps,
            delta: self.delta,
            ltf_mode: match self.ltf_mode {
                Mode::Direct => LtfMode::Direct,
                Mode::Compact => LtfMode::Compact,
            },
            strategy: match self.sketch {
                SketchKind::Auto => Strategy::Auto,
                SketchKind::L1 => Strategy::L1,
                SketchKind::TopSubspace => Strategy::TopSubspace,
                SketchKind::Expectation => Strategy::Expectation,
            },
            method: self.method.into(),
        }
    }
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long = "fn", value_name = "SPEC")]
    spec: PathBuf,
    #[command(flatten)]
    build: BuildArgs,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// File of inputs, one per line, instead of all of {0,1}^n.
    #[arg(long, conflicts_with = "samples")]
    inputs: Option<PathBuf>,
    /// Measure on this many uniform inputs instead of all of {0,1}^n.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum Experiment {
    /// Largest per-input mean squared error.
    WorstMse(MeasureArgs),
    /// Mean squared error under uniform inputs.
    DistMse(MeasureArgs),
    /// Largest per-input probability of a wrong output.
    ErrorRate(MeasureArgs),
    /// Error as a function of sketch size.
    Curve {
        #[arg(long = "fn", value_name = "SPEC")]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "l1")]
        kind: CurveArg,
        /// Comma-separated sizes: rows for l1, subspace dimensions for top-subspace.
        #[arg(long, value_delimiter = ',', required = true)]
        k_grid: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    L1,
    TopSubspace,
}

#[derive(Subcommand)]
enum Check {
    /// Verify an LTF's claimed margin over all inputs.
    Margin {
        #[arg(long = "fn", value_name = "SPEC")]
        spec: PathBuf,
    },
    /// Compare the forest-OR formula with the rank of a graphic matroid.
    Graphic {
        #[arg(long = "fn", value_name = "SPEC")]
        spec: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> CliResult<FunctionSpec> {
    FunctionSpec::from_json(&read(path)?).map_err(|e| with_path(path, e))
}

fn load_plan(path: &Path) -> CliResult<SketchPlan> {
    SketchPlan::from_json(&read(path)?).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: Error) -> CliError {
    match e {
        Error::Json(j) => CliError::Lib(Error::Parse(format!("{}: {j}", path.display()))),
        Error::Parse(m) => CliError::Lib(Error::Parse(format!("{}: {m}", path.display()))),
        other => CliError::Lib(other),
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

fn csv_unsupported(what: &str) -> CliError {
    CliError::Usage(format!("{what} has no CSV form; use --format json"))
}

fn run(cli: &Cli) -> CliResult<String> {
    let fmt = cli.format;
    let csv = fmt == Some(Format::Csv);
    Ok(match &cli.cmd {
        Command::Spectrum { spec, energy, method } => {
            let spec = load_spec(spec)?;
            let s = wht(&spec.truth_table()?)?;
            let dim = match energy {
                Some(t) => Some(approx_fourier_dimension(&s, *t, (*method).into())?),
                None => None,
            };
            // CSV is the default here
            if fmt != Some(Format::Json) {
                if dim.is_some() {
                    return Err(csv_unsupported("--energy"));
                }
                let mut out = String::from("alpha_index,coefficient\n");
                for (a, c) in s.coeffs().iter().enumerate() {
                    let _ = writeln!(out, "{a},{c}");
                }
                out
            } else {
                pretty(&json!({
                    "n": s.n(),
                    "coefficients": s.coeffs(),
                    "l2_squared": s.l2_squared(),
                    "dimension": dim,
                }))
            }
        }
        Command::Build { spec, build } => {
            if csv {
                return Err(csv_unsupported("a plan"));
            }
            let spec = load_spec(spec)?;
            build_for_spec(&spec, &build.options(), cli.seed)?.to_json_pretty()
        }
        Command::Eval { plan, inputs, spec } => {
            let plan = load_plan(plan)?;
            let spec = spec.as_deref().map(load_spec).transpose()?;
            let mut rows = Vec::new();
            for s in inputs {
                let x = parse_input(s, plan.n())?;
                let est = estimate(&plan, &plan.sketch(&x)?)?;
                let f = spec.as_ref().map(|f| f.eval(&x)).transpose()?;
                rows.push((format_input(&x), est, f));
            }
            if csv {
                let mut out = String::from("x,estimate,f\n");
                for (x, e, f) in &rows {
                    let f = f.map(|v| v.to_string()).unwrap_or_default();
                    let _ = writeln!(out, "{x},{e},{f}");
                }
                out
            } else {
                let v: Vec<_> = rows
                    .iter()
                    .map(|(x, e, f)| json!({ "x": x, "estimate": e, "f": f }))
                    .collect();
                pretty(&json!({ "plan_fingerprint": plan.fingerprint(), "results": v }))
            }
        }
        Command::Stream { plan, updates } => {
            let plan = load_plan(plan)?;
            let mut state = stream_init(&plan);
            let mut x = BitVector::zeros(plan.n());
            let mut apply = |i: f2sketch::error::Result<usize>| -> CliResult<()> {
                let i = i?;
                state.update(i)?;
                x.flip(i);
                Ok(())
            };
            if updates.as_os_str() == "-" {
                StreamReader::new(io::stdin().lock()).try_for_each(&mut apply)?;
            } else {
                let f = fs::File::open(updates)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", updates.display())))?;
                StreamReader::new(BufReader::new(f)).try_for_each(&mut apply)?;
            }
            let (count, bits, est) = (state.update_count(), state.bits().to_hex(), state.query());
            if csv {
                format!("updates,input,sketch_hex,estimate\n{count},{},{bits},{est}\n", format_input(&x))
            } else {
                pretty(&json!({
                    "updates": count,
                    "input": format_input(&x),
                    "k": plan.k(),
                    "sketch_hex": bits,
                    "estimate": est,
                }))
            }
        }
        Command::Protocol { mode, plan, x, y } => {
            let plan = load_plan(plan)?;
            let (x, y) = (parse_input(x, plan.n())?, parse_input(y, plan.n())?);
            let shared = SharedPlan::new(&plan);
            let t = match mode {
                ProtocolMode::Oneway => shared.oneway(&x, &y)?,
                ProtocolMode::Smp => shared.smp(&x, &y)?,
            };
            if csv {
                format!("message_bits,output\n{},{}\n", t.message_bits(), t.output)
            } else {
                t.to_json()
            }
        }
        Command::Experiment(e) => experiment(cli, e)?,
        Command::Check(Check::Margin { spec }) => {
            let ltf = match load_spec(spec)? {
                FunctionSpec::Ltf(l) => l,
                other => {
                    return Err(CliError::Usage(format!(
                        "margin check needs an ltf spec, got {}",
                        other.kind()
                    )))
                }
            };
            let r = validate_ltf(&ltf)?;
            if csv {
                format!(
                    "n,claimed,true_margin,witness,trusted\n{},{},{},{},{}\n",
                    r.n,
                    r.claimed,
                    r.true_margin.map(|m| m.to_string()).unwrap_or_default(),
                    r.witness.clone().unwrap_or_default(),
                    r.trusted
                )
            } else {
                pretty(&r)
            }
        }
        Command::Check(Check::Graphic { spec }) => {
            let m = match load_spec(spec)? {
                FunctionSpec::GraphicMatroid { matroid, .. } => matroid,
                other => {
                    return Err(CliError::Usage(format!(
                        "graphic check needs a graphic_matroid spec, got {}",
                        other.kind()
                    )))
                }
            };
            let r = check_graphic_formula(&m)?;
            if csv {
                let mut out = String::from("disagreement\n");
                r.disagreements.iter().for_each(|d| {
                    let _ = writeln!(out, "{d}");
                });
                out
            } else {
                pretty(&r)
            }
        }
    })
}

fn experiment(cli: &Cli, e: &Experiment) -> CliResult<String> {
    let csv = cli.format == Some(Format::Csv);
    let measure = match e {
        Experiment::WorstMse(a) => (a, measure_worst_case_mse as Measure),
        Experiment::DistMse(a) => (a, measure_distributional_mse as Measure),
        Experiment::ErrorRate(a) => (a, measure_error_rate as Measure),
        Experiment::Curve { spec, kind, k_grid, trials } => {
            let spec = load_spec(spec)?;
            let kind = match kind {
                CurveArg::L1 => CurveKind::L1,
                CurveArg::TopSubspace => CurveKind::TopSubspace,
            };
            let cfg = RunConfig {
                trials: *trials,
                seed: cli.seed,
                jobs: cli.jobs,
                inputs: InputSet::Auto,
            };
            let pts = dimension_error_curve(&spec, kind, k_grid, &cfg)?;
            return Ok(if csv { curve_to_csv(&pts) } else { pretty(&pts) });
        }
    };
    let (a, f) = measure;
    let spec = load_spec(&a.spec)?;
    let inputs = match (&a.inputs, a.samples) {
        (Some(path), _) => {
            let text = read(path)?;
            let xs = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| parse_input(l, spec.n()))
                .collect::<f2sketch::error::Result<Vec<_>>>()
                .map_err(|e| with_path(path, e))?;
            InputSet::List(xs)
        }
        (None, Some(count)) => InputSet::Sample { count, seed: cli.seed },
        (None, None) => InputSet::Auto,
    };
    let cfg = RunConfig {
        trials: a.trials,
        seed: cli.seed,
        jobs: cli.jobs,
        inputs,
    };
    let opts = a.build.options();
    let report = f(&|s| build_for_spec(&spec, &opts, s), &spec, &cfg)?;
    if report.sampled_inputs {
        eprintln!("warning: measured on {} sampled inputs, not all of {{0,1}}^{}", report.inputs, spec.n());
    }
    Ok(if csv { report.to_csv() } else { report.to_json() })
}

type Measure = fn(
    &f2sketch::harness::Builder<'_>,
    &FunctionSpec,
    &RunConfig,
) -> f2sketch::error::Result<f2sketch::harness::ErrorReport>;

fn emit(out: &Option<PathBuf>, text: &str) -> io::Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli).and_then(|text| emit(&cli.out, &text).map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
