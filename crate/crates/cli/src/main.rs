//! `dal` — steady states, entanglement and dynamics of the dissipative
//! three-qubit model from the command line.
//!
//! Every run writes its result artifact to `--out` plus a manifest
//! (`<out>.manifest.json`) echoing the full effective config; feeding that
//! manifest back through `--config` reproduces the result byte for byte.
//! Exit codes: 0 success, 1 computation error, 2 config error.

mod commands;
mod config;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{load_config_file, load_preset, CommandConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Compute(msg) => write!(f, "computation error: {msg}"),
        }
    }
}

impl From<dal_core::Error> for CliError {
    fn from(e: dal_core::Error) -> Self {
        // parameter validation failures are config problems; everything else
        // is a numerical/computation failure
        match &e {
            dal_core::Error::InvalidParams(_) => CliError::Config(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dal",
    version,
    about = "Dissipative-ancilla lab: steady-state entanglement of two decaying qubits \
             coupled to a lossy two-level ancilla",
    after_help = "Set DAL_LOG=debug (or info, warn) for log output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Config JSON (bare config, preset file or an emitted manifest)
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset name (fig2, fig3, fig4, fig5, fig6, fig7, opt)
    #[arg(long)]
    preset: Option<String>,
    /// Output path for the result artifact
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for sweep/scan/optimize evaluations (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Override the optimizer seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the steady state and report negativity, certificates, fidelities
    Steady(RunArgs),
    /// Closed-form two-qubit benchmark and its optimal coupling
    Analytic2q(RunArgs),
    /// Steady-state negativity over an (omega_c, j_c) grid, to CSV
    Sweep(RunArgs),
    /// Steady-state negativity along a gamma_c scan, to CSV
    Scan(RunArgs),
    /// Fidelity trajectory of the master equation, to CSV
    Dynamics(RunArgs),
    /// Box-constrained maximization of the steady-state negativity, to JSON
    Optimize(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Steady(_) => "steady",
            Command::Analytic2q(_) => "analytic2q",
            Command::Sweep(_) => "sweep",
            Command::Scan(_) => "scan",
            Command::Dynamics(_) => "dynamics",
            Command::Optimize(_) => "optimize",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Steady(a)
            | Command::Analytic2q(a)
            | Command::Sweep(a)
            | Command::Scan(a)
            | Command::Dynamics(a)
            | Command::Optimize(a) => a,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DAL_LOG")).init();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dal: {e}");
            match e {
                CliError::Compute(_) => ExitCode::from(1),
                CliError::Config(_) => ExitCode::from(2),
            }
        }
    }
}

fn run(command: &Command) -> Result<(), CliError> {
    let args = command.args();
    let name = command.name();

    let cfg = match (&args.config, &args.preset) {
        (Some(path), None) => load_config_file(path, name)?,
        (None, Some(preset)) => load_preset(preset, name)?,
        (None, None) => return Err(CliError::Config("provide either --config or --preset".into())),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with prevents this"),
    };

    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot configure {jobs} jobs: {e}")))?;
    }
    if args.seed.is_some() && !matches!(cfg, CommandConfig::Optimize(_)) {
        log::warn!("--seed only affects the optimize command; ignoring");
    }

    let started = Instant::now();
    let (effective, extra) = match &cfg {
        CommandConfig::Steady(c) => (cfg.clone(), commands::run_steady(c, &args.out)?),
        CommandConfig::Analytic2q(c) => (cfg.clone(), commands::run_analytic2q(c, &args.out)?),
        CommandConfig::Sweep(c) => (cfg.clone(), commands::run_sweep(c, &args.out)?),
        CommandConfig::Scan(c) => (cfg.clone(), commands::run_scan(c, &args.out)?),
        CommandConfig::Dynamics(c) => (cfg.clone(), commands::run_dynamics(c, &args.out)?),
        CommandConfig::Optimize(c) => {
            // bake the effective seed into the echoed config so the manifest
            // reproduces this exact run
            let mut resolved = c.clone();
            if let Some(seed) = args.seed {
                resolved.seed = seed;
            }
            let extra = commands::run_optimize(&resolved, None, &args.out)?;
            (CommandConfig::Optimize(resolved), extra)
        }
    };
    write_manifest(&args.out, &effective, started.elapsed().as_secs_f64(), extra)
}

/// Record the run beside its output: tool version, full config echo, wall
/// time and per-command extras.
fn write_manifest(
    out: &Path,
    cfg: &CommandConfig,
    wall_time_s: f64,
    extra: commands::ManifestExtra,
) -> Result<(), CliError> {
    let mut manifest = json!({
        "tool": "dal",
        "version": env!("CARGO_PKG_VERSION"),
        "output": out.display().to_string(),
        "wall_time_s": wall_time_s,
    });
    let object = manifest.as_object_mut().unwrap();
    let wrapped = serde_json::to_value(cfg).expect("config serializes");
    object.insert("command".into(), wrapped["command"].clone());
    object.insert("config".into(), wrapped["config"].clone());
    for (k, v) in extra {
        object.insert(k, v);
    }

    let path = manifest_path(out);
    std::fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&manifest).unwrap()))
        .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}
