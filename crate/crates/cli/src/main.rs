mod commands;
mod demos;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use specred::io::to_canonical_string;
use specred::Tolerances;

#[derive(Parser, Debug)]
#[command(name = "specred", version, about = "Isospectral reductions, unfoldings and quantum state transfer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Scalar backend: exact rationals over ℚ(i) or complex floating point.
    #[arg(long, value_enum, default_value_t = Backend::Exact, global = true)]
    pub backend: Backend,
    /// Comma-separated vertex labels.
    #[arg(long, value_delimiter = ',', global = true)]
    pub subset: Vec<String>,
    /// Orthonormal frame Σ as a Matrix JSON file.
    #[arg(long, global = true)]
    pub frame: Option<PathBuf>,
    #[arg(long, default_value_t = specred::tolerance::DEFAULT_EPS, global = true)]
    pub tol_eps: f64,
    #[arg(long, default_value_t = specred::tolerance::DEFAULT_DELTA, global = true)]
    pub tol_delta: f64,
    #[arg(long, default_value_t = specred::tolerance::DEFAULT_POLE, global = true)]
    pub tol_pole: f64,
    #[arg(long, default_value_t = specred::tolerance::DEFAULT_PSD, global = true)]
    pub tol_psd: f64,
    #[arg(long, default_value_t = specred::tolerance::DEFAULT_RANK, global = true)]
    pub tol_rank: f64,
    /// Comma-separated evaluation times.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, global = true)]
    pub times: Vec<f64>,
    /// Number of grid points for time scans.
    #[arg(long, default_value_t = 2000, global = true)]
    pub grid: usize,
    /// Seed for randomized tie-breaking. Every current command is deterministic.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a labeled matrix (JSON or edge list) onto --subset.
    Reduce { input: PathBuf },
    /// Reduce a labeled matrix onto the orthonormal frame given by --frame.
    Greduce { input: PathBuf },
    /// Partial fraction form of a rational matrix.
    Pfd { input: PathBuf },
    /// Unfold a rational matrix into a scalar matrix.
    Unfold {
        input: PathBuf,
        /// Use the general (non-Hermitian) unfolding.
        #[arg(long)]
        general: bool,
    },
    /// Make the tail diagonal of an unfolding zero.
    Hollow { input: PathBuf },
    /// Similarity to block-tridiagonal form.
    Compress {
        input: PathBuf,
        /// Also make the band real with a diagonal sign gauge.
        #[arg(long)]
        sign_cleanup: bool,
    },
    /// Sample the walk e^{-itA} restricted to --subset at --times.
    Qwalk { input: PathBuf },
    /// Certify perfect state transfer between the two vertices of --subset.
    Pst {
        input: PathBuf,
        /// Scan [0, T] when no --times are given.
        #[arg(long, default_value_t = std::f64::consts::PI)]
        t_max: f64,
        /// Certification tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Divisor of a partition ("a,b;c,d") or of the distance partition from --root.
    Divisor {
        input: PathBuf,
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        root: Option<String>,
    },
    /// Reduction generated by a TrigWalkSpec document.
    Walkgen {
        /// TrigWalkSpec JSON; the built-in weighted target when omitted.
        input: Option<PathBuf>,
    },
    /// Build the hypercube PST variants and certify them.
    DemoHypercube,
    /// Run the weighted 16-vertex PST pipeline and certify it.
    DemoWeightedPst,
}

/// A finished command: its result document and exit code.
pub struct Outcome {
    pub doc: Value,
    pub code: u8,
}

impl Outcome {
    pub fn ok(doc: Value) -> Self {
        Outcome { doc, code: 0 }
    }

    pub fn negative(doc: Value) -> Self {
        Outcome { doc, code: 1 }
    }
}

/// A failure reported with exit code 2.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub context: String,
}

impl From<specred::Error> for Failure {
    fn from(e: specred::Error) -> Self {
        Failure { kind: e.kind().to_string(), context: e.to_string() }
    }
}

impl Failure {
    pub fn new(kind: &str, context: impl Into<String>) -> Self {
        Failure { kind: kind.to_string(), context: context.into() }
    }
}

fn tolerances(o: &Options) -> Result<Tolerances, Failure> {
    let t = Tolerances { eps: o.tol_eps, delta: o.tol_delta, pole: o.tol_pole, psd: o.tol_psd, rank: o.tol_rank };
    if !t.validate() {
        return Err(Failure::new("InvalidTolerance", "tolerances must be positive and finite"));
    }
    Ok(t)
}

fn write(doc: &Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = to_canonical_string(doc);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::new("IoError", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SPECRED_LOG", "warn")).init();
    let cli = Cli::parse();
    log::debug!("seed {}", cli.opts.seed);
    let result = tolerances(&cli.opts).and_then(|t| {
        t.install();
        let outcome = commands::run(&cli.command, &cli.opts)?;
        write(&outcome.doc, cli.opts.out.as_ref())?;
        Ok(outcome.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let report = json!({"error": {"kind": f.kind, "context": f.context}});
            eprint!("{}", to_canonical_string(&report));
            ExitCode::from(2)
        }
    }
}
