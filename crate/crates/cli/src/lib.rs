//! Command-line front end for `omdyn`: criterion runs, Abel solving,
//! hypercyclic-vector experiments and the example matrix.

pub mod commands;
pub mod matrix;
pub mod report;

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

pub use report::ReportEnvelope;

pub mod exit {
    pub const EVIDENCE: i32 = 0;
    pub const WITNESS: i32 = 2;
    pub const HYPOTHESIS: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const USAGE: i32 = 64;
}

#[derive(Debug, Parser)]
#[command(name = "omdyn", version, about = "Dynamics of composition operators on slowly increasing smooth functions")]
pub struct Cli {
    /// Print the full JSON report instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,

    /// Directory for CSV tables.
    #[arg(long = "emit-csv", global = true, value_name = "DIR")]
    pub emit_csv: Option<PathBuf>,

    /// JSON file with parameter defaults; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run classification criteria on a symbol.
    Classify(Params),
    /// Solve Abel's equation and verify the solution.
    Abel(Params),
    /// Select a schedule, assemble g and tabulate the orbit approach.
    Hypvec(Params),
    /// Run the example matrix.
    Examples(Params),
    /// Print the orbit x, ψ(x), ..., ψ_n(x).
    Iterate(Params),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Abel(_) => "abel",
            Command::Hypvec(_) => "hypvec",
            Command::Examples(_) => "examples",
            Command::Iterate(_) => "iterate",
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Command::Classify(p)
            | Command::Abel(p)
            | Command::Hypvec(p)
            | Command::Examples(p)
            | Command::Iterate(p) => p,
        }
    }
}

/// Parameters shared by the subcommands. Every field is optional so that
/// flags can be layered over a config file.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Symbol label, e.g. `translation:1`, `sqrt_glide`, `reflect(tiled_3x)`.
    #[arg(long)]
    pub symbol: Option<String>,
    /// Comma-separated criterion ids.
    #[arg(long)]
    pub criteria: Option<String>,
    /// Comma-separated weights, e.g. `gauss(1),expcone(1),left_exp`.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub jmax: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Junction matching order of the Abel seed.
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k_order: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Abel seed slope.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Fit `H ≈ a·x^p + b` on `[1, hi]`.
    #[arg(long = "fit-power")]
    pub fit_power: Option<f64>,
    /// Skip the seminorm table of the Abel solution.
    #[arg(long = "no-seminorms")]
    #[serde(default)]
    pub no_seminorms: bool,
    /// Bump targets `l:r:amplitude;...` or `default`.
    #[arg(long)]
    pub targets: Option<String>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Seminorm order of the approach tables.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
}

macro_rules! layer {
    ($flags:expr, $file:expr, $($field:ident),*) => {
        Params { $($field: $flags.$field.clone().or($file.$field.clone()),)* no_seminorms: $flags.no_seminorms || $file.no_seminorms }
    };
}

impl Params {
    /// Flags over file values.
    pub fn layered(&self, file: &Params) -> Params {
        layer!(
            self, file, symbol, criteria, weights, kmax, nmax, jmax, a, b, alpha, beta, k_order, x0, c, lo, hi, points,
            fit_power, targets, repeats, m, x, n
        )
    }
}

pub fn read_config(path: &Path) -> anyhow::Result<Params> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Result of a command: exit code, the report and the summary lines.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub envelope: Option<ReportEnvelope>,
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn usage(message: impl Into<String>) -> Outcome {
        Outcome { code: exit::USAGE, envelope: None, summary: vec![message.into()] }
    }
}

/// Runs a parsed command line; `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: &[String]) -> Outcome {
    let params = match &cli.config {
        Some(path) => match read_config(path) {
            Ok(file) => cli.command.params().layered(&file),
            Err(e) => return Outcome::usage(format!("{e:#}")),
        },
        None => cli.command.params().clone(),
    };
    let ctx = commands::Context { argv: argv.to_vec(), emit_csv: cli.emit_csv.clone() };
    let result = match cli.command {
        Command::Classify(_) => commands::classify(&params, &ctx),
        Command::Abel(_) => commands::abel(&params, &ctx),
        Command::Hypvec(_) => commands::hypvec(&params, &ctx),
        Command::Examples(_) => commands::examples(&params, &ctx),
        Command::Iterate(_) => commands::iterate(&params, &ctx),
    };
    result.unwrap_or_else(|e| Outcome::usage(format!("{e:#}")))
}
