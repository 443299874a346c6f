//! `helson-lab`: runs one experiment, writes JSON/CSV results plus a
//! `manifest.json` into the output directory.
//!
//! Exit status is 0 when every certificate holds, 1 when one is invalid or
//! the computation fails, 2 for usage and input errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use helson_lab_core::Error as CoreError;
use serde::Serialize;
use serde_json::json;

use commands::{DruryArgs, GaussArgs, HelsonArgs, MelaArgs, ProjectorArgs, RieszArgs, VerifyArgs};
use output::OutputDir;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input data.
    Usage(String),
    /// The computation itself failed.
    Run(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Run(m) => f.write_str(m),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(_)
            | CoreError::InvalidArgument(_)
            | CoreError::OutOfRange { .. }
            | CoreError::DimensionTooLarge { .. }
            | CoreError::DimensionMismatch { .. }
            | CoreError::BudgetExceeded { .. }
            | CoreError::NotDissociate(_) => CliError::Usage(e.to_string()),
            CoreError::MomentCheckFailed(_) | CoreError::InfeasibleSeparation | CoreError::Lp(_) => {
                CliError::Run(e.to_string())
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "helson-lab",
    version,
    about = "Thin sets, Riesz products and spectral projectors at desk scale"
)]
struct Cli {
    /// JSON file whose keys override the flags; a saved manifest.json also works.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for results and the manifest.
    #[arg(long, global = true, default_value = "helson-lab-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Drury function on Z^n from a mixing measure.
    Drury(DruryArgs),
    /// Minimum-variation mixing measure with small odd moments.
    Mela(MelaArgs),
    /// Upper estimate of the Helson constant of a finite set.
    HelsonConstant(HelsonArgs),
    /// Approximate spectral projectors and their L^p growth.
    Projector(ProjectorArgs),
    /// Riesz-product coefficients, convolution powers and rigidity.
    Riesz(RieszArgs),
    /// Simulate a stationary sequence and run the moment diagnostics.
    GaussSim(GaussArgs),
    /// Run the full acceptance suite.
    VerifyAll(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Drury(_) => "drury",
            Command::Mela(_) => "mela",
            Command::HelsonConstant(_) => "helson-constant",
            Command::Projector(_) => "projector",
            Command::Riesz(_) => "riesz",
            Command::GaussSim(_) => "gauss-sim",
            Command::VerifyAll(_) => "verify-all",
        }
    }
}

fn apply_config<T: Serialize + serde::de::DeserializeOwned>(
    args: &mut T,
    cfg: &Option<serde_json::Map<String, serde_json::Value>>,
) -> Result<(), CliError> {
    if let Some(params) = cfg {
        *args = config::overlay(args, params.clone())?;
    }
    Ok(())
}

fn configure_threads() -> Result<usize, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("HELSON_LAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("HELSON_LAB_THREADS={v:?} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build_global()
        .map_err(|e| CliError::Run(format!("thread pool: {e}")))?;
    Ok(rayon::current_num_threads())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let threads = configure_threads()?;
    let name = cli.command.name();
    let cfg = match &cli.config {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            Some(config::load(&bytes, name)?)
        }
        None => None,
    };
    let mut out = OutputDir::create(&cli.out)?;
    let mut extra = serde_json::Map::new();
    let (ok, params) = match cli.command {
        Command::Drury(mut a) => {
            apply_config(&mut a, &cfg)?;
            (commands::drury(&a, &mut out)?, json!(a))
        }
        Command::Mela(mut a) => {
            apply_config(&mut a, &cfg)?;
            (commands::mela(&a, &mut out)?, json!(a))
        }
        Command::HelsonConstant(mut a) => {
            apply_config(&mut a, &cfg)?;
            (commands::helson(&a, &mut out)?, json!(a))
        }
        Command::Projector(mut a) => {
            apply_config(&mut a, &cfg)?;
            (commands::projector(&a, &mut out)?, json!(a))
        }
        Command::Riesz(mut a) => {
            apply_config(&mut a, &cfg)?;
            (commands::riesz(&a, &mut out)?, json!(a))
        }
        Command::GaussSim(mut a) => {
            apply_config(&mut a, &cfg)?;
            (commands::gauss(&a, &mut out)?, json!(a))
        }
        Command::VerifyAll(mut a) => {
            apply_config(&mut a, &cfg)?;
            let (ok, times) = commands::verify(&a, &mut out)?;
            extra.insert("criterion_seconds".into(), json!(times));
            (ok, json!(a))
        }
    };
    let mut manifest = json!({
        "tool": "helson-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "params": params,
        "outputs": out.written(),
        "threads": threads,
        "wall_time_seconds": start.elapsed().as_secs_f64(),
    });
    manifest.as_object_mut().expect("object").extend(extra);
    out.write_json("manifest.json", &manifest)?;
    println!("results in {}", out.path().display());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("helson-lab: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Run(_) => 1,
            })
        }
    }
}
