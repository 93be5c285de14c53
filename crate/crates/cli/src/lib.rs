//! Front end for the `residua` binary: argument handling, dispatch and
//! report emission.

mod commands;
pub mod parse;
pub mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use commands::run_command;
pub use parse::{parse_monomial, parse_test_form, ParseError};
pub use report::{emit_report, Format, IoError, ReportRecord};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "residua", version, about = "Exact residue-current calculator on monomial data", args_override_self = true)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for sampled checks; RESIDUA_SEED takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Radial profile order N of the test forms, `(1-t)^N`.
    #[arg(long, global = true, default_value_t = 4)]
    pub profile: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Iterated against curve limits of every γ_I^σ.
    GammaCheck(GammaCheckArgs),
    /// Coleff-Herrera product of R-factors against a test form.
    ChEval(ChEvalArgs),
    /// Mixed U/R/M product against a test form.
    ProductEval(ProductEvalArgs),
    /// Lelong-type current M(f) against a test form.
    MEval(MEvalArgs),
    /// Annihilation of a complete-intersection product by a monomial.
    Duality(DualityArgs),
    /// Quadrature of the smooth-cutoff and λ-regularized forms against the exact value.
    QuadCompare(QuadCompareArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::GammaCheck(_) => "gamma-check",
            Self::ChEval(_) => "ch-eval",
            Self::ProductEval(_) => "product-eval",
            Self::MEval(_) => "m-eval",
            Self::Duality(_) => "duality",
            Self::QuadCompare(_) => "quad-compare",
        }
    }

    fn echo(&self) -> BTreeMap<String, String> {
        match self {
            Self::GammaCheck(a) => commands::echo(a),
            Self::ChEval(a) => commands::echo(a),
            Self::ProductEval(a) => commands::echo(a),
            Self::MEval(a) => commands::echo(a),
            Self::Duality(a) => commands::echo(a),
            Self::QuadCompare(a) => commands::echo(a),
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct GammaCheckArgs {
    /// Exponent matrix, e.g. "[[1,0],[1,1]]".
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub p: usize,
    /// "id" or a 1-based permutation such as "2,1".
    #[arg(long, default_value = "id")]
    pub sigma: String,
    #[arg(long)]
    pub mu: String,
    /// Pole multiplicities, all 1 by default.
    #[arg(long)]
    pub k: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct ChEvalArgs {
    /// Comma-separated monomials, innermost first.
    #[arg(long)]
    pub factors: String,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub testform: String,
}

#[derive(Args, Debug, Serialize)]
pub struct ProductEvalArgs {
    /// Comma-separated "[R|U|M:]monomial", innermost first.
    #[arg(long)]
    pub factors: String,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub testform: String,
    /// Unit constants, one rational per factor.
    #[arg(long)]
    pub units: Option<String>,
    /// Pole orders, one per factor.
    #[arg(long)]
    pub poles: Option<String>,
    /// Accept weights that are not strictly decreasing.
    #[arg(long)]
    pub exploratory: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct MEvalArgs {
    #[arg(long)]
    pub factor: String,
    #[arg(long)]
    pub testform: String,
}

#[derive(Args, Debug, Serialize)]
pub struct DualityArgs {
    /// Generators of the complete intersection.
    #[arg(long)]
    pub ci: String,
    #[arg(long)]
    pub g: String,
}

#[derive(Args, Debug, Serialize)]
pub struct QuadCompareArgs {
    #[arg(long)]
    pub factors: String,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub testform: String,
    /// Path exponents ν; the weights by default.
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long, default_value = "1e-1,1e-2,1e-3")]
    pub deltas: String,
    /// "characteristic", "smoothstep" or "smoothstep:<m>".
    #[arg(long, default_value = "smoothstep:2")]
    pub cutoff: String,
    /// Number of random real λ samples.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub zero_tolerance: f64,
}

/// Splices `--config <file>` (a JSON object of flag values, optionally with
/// a "command" key) into the argument list, ahead of explicit flags.
fn expand_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(i) = args.iter().position(|a| a == "--config") else {
        return Ok(args);
    };
    let path = args.get(i + 1).ok_or("--config needs a path")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let serde_json::Value::Object(map) = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))? else {
        return Err(format!("{path}: expected a JSON object"));
    };
    let mut rest: Vec<String> = args[..i].iter().chain(&args[i + 2..]).cloned().collect();
    let names = ["gamma-check", "ch-eval", "product-eval", "m-eval", "duality", "quad-compare"];
    let pos = match rest.iter().position(|a| names.contains(&a.as_str())) {
        Some(p) => p,
        None => {
            let Some(serde_json::Value::String(c)) = map.get("command") else {
                return Err("no command given".into());
            };
            let at = rest.len().min(1);
            rest.insert(at, c.clone());
            at
        }
    };
    let mut flags = Vec::new();
    for (k, v) in map.into_iter().filter(|(k, _)| k != "command") {
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            serde_json::Value::Bool(true) => flags.push(flag),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::String(s) => flags.extend([flag, s]),
            other => flags.extend([flag, other.to_string()]),
        }
    }
    rest.splice(pos + 1..pos + 1, flags);
    Ok(rest)
}

/// Full command-line run; returns the exit status.
pub fn run(args: Vec<String>, env_seed: Option<String>) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let seed = match env_seed.map(|s| s.trim().parse::<u64>()) {
        None => cli.seed,
        Some(Ok(s)) => s,
        Some(Err(_)) => {
            eprintln!("error: RESIDUA_SEED must be an unsigned integer");
            return EXIT_USAGE;
        }
    };
    let record = match run_command(&cli.command, seed, cli.profile) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    if let Err(e) = emit_report(&record, format, cli.output.as_deref()) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if record.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
