mod commands;
mod config;
mod expr;

use clap::{Args, Parser, Subcommand};
use commands::{Output, EXIT_INPUT};
use config::*;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

/// Level-measure norms, counting functions and composition-operator
/// diagnostics on the unit disk, the unit ball of C² and the bidisk.
///
/// Settings come from `--config FILE` (JSON), overridden by flags.
/// PLURINORM_THREADS caps the worker pool unless `--threads` is given.
/// Exit codes: 0 pass, 1 input error, 2 unconverged, 3 verification failure.
#[derive(Parser)]
#[command(name = "plurinorm", version)]
struct Cli {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: PLURINORM_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hardy (alpha = -1) or weighted Bergman norm of a polynomial.
    Norm(NormArgs),
    /// Counting functions n, N and N_alpha of a map into the unit disk.
    Counting(CountingArgs),
    /// Numerical checks of the integral identities and inequalities.
    Verify(VerifyArgs),
    /// Composition-operator diagnostics.
    Compop {
        #[command(subcommand)]
        action: CompopCommand,
    },
}

#[derive(Subcommand)]
enum CompopCommand {
    /// Boundedness/compactness diagnostic, or a deficiency profile with --r-grid.
    Diagnose(DiagnoseArgs),
    /// Counting exponents of z1^2 + z2^2 on the ball.
    SweepQuadratic(SweepArgs),
}

#[derive(Args, Serialize)]
struct DomainArgs {
    /// disk, ball or bidisk.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<String>,
    /// log, log-max (bidisk), green (with --pole) or smooth-square (ball).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    exhaustion: Option<String>,
    /// Pole of the Green exhaustion, e.g. "0.3+0.1i" or "0, 0".
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pole: Option<String>,
    /// Quadrature budget: default, low or doubled.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Args, Serialize)]
struct NormArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: DomainArgs,
    /// Polynomial in z (disk) or z1, z2.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    /// Dyadic levels of the Hardy limit.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    levels: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
}

#[derive(Args, Serialize)]
struct CountingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: DomainArgs,
    /// Map into the unit disk, or `identity`.
    #[arg(long = "F", allow_hyphen_values = true)]
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    map: Option<String>,
    /// `radial a..b` or `list w1; w2; ...`.
    #[arg(long = "w-grid", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    w_grid: Option<String>,
    #[arg(long = "w-count")]
    #[serde(skip_serializing_if = "Option::is_none")]
    w_count: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    /// Comma-separated levels r ≤ 0.
    #[arg(long = "r-grid", allow_hyphen_values = true, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    r_grid: Option<Vec<f64>>,
    /// csv or json.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<String>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Identity name or `all`.
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    /// table, csv or json.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Args, Serialize)]
struct DiagnoseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    common: DomainArgs,
    /// Map into the unit disk, or `identity`.
    #[arg(long = "F", allow_hyphen_values = true)]
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    map: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    /// Comma-separated radii in (0, 1).
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    radii: Option<Vec<f64>>,
    /// Comma-separated levels r < 0 for a deficiency profile.
    #[arg(long = "r-grid", allow_hyphen_values = true, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    r_grid: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rays: Option<usize>,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    /// Comma-separated target radii |w|.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    radii: Option<Vec<f64>>,
    #[arg(long = "diagnostic-radii", value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic_radii: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<String>,
    /// csv or json.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn threads(flag: Option<usize>) -> Result<(), String> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("PLURINORM_THREADS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| format!("PLURINORM_THREADS must be a positive integer, got `{s}`"))?),
            Err(_) => None,
        },
    };
    match n {
        Some(n) => plurinorm::exec::init_threads(n).map_err(|e| format!("threads: {e}")),
        None => Ok(()),
    }
}

fn run<A: Serialize, C: serde::de::DeserializeOwned>(
    cli_config: Option<&std::path::Path>,
    section: &str,
    args: &A,
    cmd: fn(&C) -> Result<Output, String>,
) -> Result<Output, String> {
    let base = load_section(cli_config, section)?;
    let flags = serde_json::to_value(args).map_err(|e| e.to_string())?;
    let cfg: C = resolve(base, flags)?;
    cmd(&cfg)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = threads(cli.threads) {
        eprintln!("error: {e}");
        std::process::exit(EXIT_INPUT);
    }
    let cfg = cli.config.as_deref();
    let res = match &cli.command {
        Command::Norm(a) => run(cfg, "norm", a, commands::norm),
        Command::Counting(a) => run(cfg, "counting", a, commands::counting),
        Command::Verify(a) => run(cfg, "verify", a, commands::verify),
        Command::Compop { action: CompopCommand::Diagnose(a) } => run(cfg, "compop-diagnose", a, commands::diagnose),
        Command::Compop { action: CompopCommand::SweepQuadratic(a) } => {
            run(cfg, "compop-sweep-quadratic", a, commands::sweep)
        }
    };
    let out = match res {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_INPUT);
        }
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &out.body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout().write_all(&out.body).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        std::process::exit(EXIT_INPUT);
    }
    eprintln!("{}", out.summary);
    std::process::exit(out.code);
}
