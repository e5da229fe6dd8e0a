//! `ktinv`: invariants, classification and compatibility analysis of
//! Killing two-tensors in the Euclidean plane.

mod commands;
mod literal;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "ktinv", version, about = "Killing two-tensor invariants and compatible potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Numeric,
    Exact,
    Both,
}

impl BackendArg {
    pub fn as_str(&self) -> &'static str {
        match self {
            BackendArg::Numeric => "numeric",
            BackendArg::Exact => "exact",
            BackendArg::Both => "both",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Sample points for the compatibility system (at least 12).
    #[arg(long, default_value_t = 240)]
    pub samples: usize,
    /// Relative rank and validation tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Numeric)]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct PotentialArgs {
    /// free, oscillator, sw, ttw or kepler.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants of one tensor (--tensor) or joint invariants of a pair (--pair).
    Invariants {
        #[arg(long, conflicts_with = "pair")]
        tensor: Option<String>,
        #[arg(long, num_args = 2, value_names = ["POLAR", "EH"])]
        pair: Option<Vec<String>>,
        #[command(flatten)]
        common: Common,
    },
    /// Orbit type of one tensor or pair class of a polar/EH pair.
    Classify {
        #[arg(long, conflicts_with = "pair")]
        tensor: Option<String>,
        #[arg(long, num_args = 2, value_names = ["POLAR", "EH"])]
        pair: Option<Vec<String>>,
        #[command(flatten)]
        common: Common,
    },
    /// Push a tensor forward by a rigid motion p1,p2,p3.
    Transform {
        #[arg(long)]
        tensor: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// Tensors compatible with a potential, or re-validation of a saved report.
    Compatible {
        #[command(flatten)]
        potential: PotentialArgs,
        /// Restrict to the span of b1..b5.
        #[arg(long)]
        reduced: bool,
        /// A previous `compatible` JSON report whose basis is re-validated.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// SW-family potentials compatible with every given tensor.
    DualSolve {
        #[arg(long, num_args = 1.., required = true)]
        tensor: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension of the compatible space of the TTW potential over k.
    TtwScan {
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        beta: f64,
        /// Comma-separated; defaults to the standard scan set.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        k: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Polar tensor at (a, b) against eh:ell; without a and b, the four
    /// zero patterns.
    Degeneracy {
        #[arg(long, allow_negative_numbers = true, requires = "b")]
        a: Option<f64>,
        #[arg(long, allow_negative_numbers = true, requires = "a")]
        b: Option<f64>,
        #[arg(long, default_value_t = 4.0)]
        ell: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized invariance, equivariance and group-law checks.
    Audit {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn cap_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("KT_INVARIANTS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("KT_INVARIANTS_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = cap_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
