//! Config schemas for every subcommand, preset registry and the
//! config-or-manifest loader.
//!
//! Every run emits a manifest JSON beside its output; a manifest contains a
//! full `config` echo and can be fed back through `--config` to reproduce the
//! run byte for byte. Presets use the same wrapper shape.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use dal_core::explore::Bounds;
use dal_core::ModelParams;

use crate::CliError;

/// An axis sampled between two endpoints.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Axis with selectable linear/log spacing.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanAxisSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyConfig {
    pub params: ModelParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Analytic2qConfig {
    pub j: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Template providing j, gamma and gamma_c; omega_c and j_c are swept.
    pub params: ModelParams,
    pub omega_c: AxisSpec,
    pub j_c: AxisSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossoverSpec {
    pub reference: f64,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Template providing omega_c, j, j_c and gamma; gamma_c is scanned.
    pub params: ModelParams,
    pub gamma_c: ScanAxisSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover: Option<CrossoverSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum TimeSpec {
    Linear { t_max: f64, dt: f64 },
    Log { t_min: f64, t_max: f64, points: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialSpec {
    /// Qubit A excited, B and the ancilla C in their ground states.
    ExcitedA,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    pub params: ModelParams,
    pub initial: InitialSpec,
    pub times: TimeSpec,
}

fn default_n_starts() -> usize {
    32
}

fn default_seed() -> u64 {
    42
}

fn default_gamma() -> f64 {
    dal_core::explore::OPTIMIZATION_GAMMA
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default = "default_n_starts")]
    pub n_starts: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

/// A command's config, wrapped with the command name. Presets and emitted
/// manifests both use this shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "command", content = "config")]
pub enum CommandConfig {
    Steady(SteadyConfig),
    Analytic2q(Analytic2qConfig),
    Sweep(SweepConfig),
    Scan(ScanConfig),
    Dynamics(DynamicsConfig),
    Optimize(OptimizeConfig),
}

impl CommandConfig {
    pub fn command_name(&self) -> &'static str {
        match self {
            CommandConfig::Steady(_) => "steady",
            CommandConfig::Analytic2q(_) => "analytic2q",
            CommandConfig::Sweep(_) => "sweep",
            CommandConfig::Scan(_) => "scan",
            CommandConfig::Dynamics(_) => "dynamics",
            CommandConfig::Optimize(_) => "optimize",
        }
    }
}

/// Parse a config document for `expected` command: either a bare config
/// object or a `{"command": ..., "config": ...}` wrapper (preset or emitted
/// manifest; extra manifest keys are ignored on the wrapper level only).
pub fn parse_config(text: &str, expected: &str) -> Result<CommandConfig, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
    let wrapped = if value.get("command").is_some() && value.get("config").is_some() {
        serde_json::json!({ "command": value["command"], "config": value["config"] })
    } else {
        serde_json::json!({ "command": expected, "config": value })
    };
    let parsed: CommandConfig = serde_json::from_value(wrapped)
        .map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    if parsed.command_name() != expected {
        return Err(CliError::Config(format!(
            "config is for `{}` but the `{expected}` command was invoked",
            parsed.command_name()
        )));
    }
    Ok(parsed)
}

pub fn load_config_file(path: &Path, expected: &str) -> Result<CommandConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, expected)
}

/// Built-in presets regenerating each figure and the optimization.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
    ("fig6", include_str!("../presets/fig6.json")),
    ("fig7", include_str!("../presets/fig7.json")),
    ("opt", include_str!("../presets/opt.json")),
];

pub fn load_preset(name: &str, expected: &str) -> Result<CommandConfig, CliError> {
    let text = PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).ok_or_else(|| {
        let known: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::Config(format!("unknown preset `{name}`; available: {}", known.join(", ")))
    })?;
    parse_config(text, expected)
}
