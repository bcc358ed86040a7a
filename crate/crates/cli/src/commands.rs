//! One function per subcommand: compute, write the result artifact, and
//! return the extra fields recorded in the run manifest.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use dal_core::dynamics::{default_initial_state, fidelity_trajectory, propagate_log, Trajectory};
use dal_core::entanglement::{negativity, optimal_two_qubit_coupling, two_qubit_analytic};
use dal_core::explore::{
    find_crossover, linspace, logspace, maximize_entanglement_with, scan_gamma_c, sweep_2d,
};
use dal_core::quantum::partial_trace_c;
use dal_core::spectral::{fidelities, hamiltonian_spectrum};
use dal_core::steady::steady_state;

use crate::config::{
    Analytic2qConfig, DynamicsConfig, InitialSpec, OptimizeConfig, ScanConfig, Spacing,
    SteadyConfig, SweepConfig, TimeSpec,
};
use crate::CliError;

pub type ManifestExtra = Map<String, Value>;

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes)
        .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct SteadyReport {
    negativity: f64,
    residual: f64,
    gap: f64,
    min_eigenvalue: f64,
    fidelities: Vec<f64>,
    eigenenergies: Vec<f64>,
}

/// Steady summary: negativity, solver certificates, fidelities, energies.
pub fn run_steady(cfg: &SteadyConfig, out: &Path) -> Result<ManifestExtra, CliError> {
    let solution = steady_state(&cfg.params)?;
    let reduced = partial_trace_c(&solution.rho_st)?;
    let neg = negativity(&reduced)?.value();
    let spectrum = hamiltonian_spectrum(&cfg.params)?;
    let f = fidelities(&solution.rho_st, &spectrum)?;

    let report = SteadyReport {
        negativity: neg,
        residual: solution.residual,
        gap: solution.nullspace_gap,
        min_eigenvalue: solution.min_eigenvalue,
        fidelities: f.values().to_vec(),
        eigenenergies: spectrum.energies.clone(),
    };
    write_output(out, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()).as_bytes())?;
    println!(
        "steady: N = {neg:.6} (residual {:.2e}, gap {:.2e})",
        solution.residual, solution.nullspace_gap
    );

    let mut extra = ManifestExtra::new();
    extra.insert("negativity".into(), json!(neg));
    Ok(extra)
}

/// Closed-form two-qubit benchmark and its optimal coupling.
pub fn run_analytic2q(cfg: &Analytic2qConfig, out: &Path) -> Result<ManifestExtra, CliError> {
    if !(cfg.gamma >= 0.0 && cfg.gamma.is_finite() && cfg.j.is_finite()) {
        return Err(CliError::Config(format!(
            "analytic2q needs finite j and gamma >= 0, got j = {}, gamma = {}",
            cfg.j, cfg.gamma
        )));
    }
    let n = two_qubit_analytic(cfg.j, cfg.gamma).value();
    let (j_star, n_star) = optimal_two_qubit_coupling(cfg.gamma);

    #[derive(Serialize)]
    struct AnalyticReport {
        j: f64,
        gamma: f64,
        negativity: f64,
        j_star: f64,
        n_star: f64,
    }
    let report = AnalyticReport {
        j: cfg.j,
        gamma: cfg.gamma,
        negativity: n,
        j_star,
        n_star: n_star.value(),
    };
    write_output(out, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()).as_bytes())?;
    println!("analytic2q: N({}) = {n:.6}; optimum N({j_star:.4}) = {:.6}", cfg.j, n_star.value());
    Ok(ManifestExtra::new())
}

/// 2-D (ω_C, J_C) sweep to CSV.
pub fn run_sweep(cfg: &SweepConfig, out: &Path) -> Result<ManifestExtra, CliError> {
    for (name, axis) in [("omega_c", &cfg.omega_c), ("j_c", &cfg.j_c)] {
        if axis.points < 2 {
            return Err(CliError::Config(format!("{name} axis needs at least 2 points")));
        }
    }
    let grid = sweep_2d(
        &cfg.params,
        (cfg.omega_c.min, cfg.omega_c.max),
        (cfg.j_c.min, cfg.j_c.max),
        (cfg.omega_c.points, cfg.j_c.points),
    )?;
    let mut csv = Vec::new();
    grid.write_csv(&mut csv).map_err(|e| CliError::Compute(e.to_string()))?;
    write_output(out, &csv)?;

    let mut extra = ManifestExtra::new();
    if let Some((omega_c, j_c, max_n)) = grid.max_point() {
        println!(
            "sweep: {} points, max N = {max_n:.6} at (omega_c = {omega_c}, j_c = {j_c})",
            grid.omega_c_axis.len() * grid.j_c_axis.len()
        );
        extra.insert("max".into(), json!({"omega_c": omega_c, "j_c": j_c, "negativity": max_n}));
    }
    extra.insert("failures".into(), serde_json::to_value(&grid.failures).unwrap());
    Ok(extra)
}

/// γ_C scan to CSV, with optional crossover localization.
pub fn run_scan(cfg: &ScanConfig, out: &Path) -> Result<ManifestExtra, CliError> {
    if cfg.gamma_c.points < 2 {
        return Err(CliError::Config("gamma_c axis needs at least 2 points".into()));
    }
    if cfg.gamma_c.spacing == Spacing::Log && cfg.gamma_c.min <= 0.0 {
        return Err(CliError::Config("log spacing needs gamma_c.min > 0".into()));
    }
    let points = match cfg.gamma_c.spacing {
        Spacing::Linear => linspace(cfg.gamma_c.min, cfg.gamma_c.max, cfg.gamma_c.points),
        Spacing::Log => logspace(cfg.gamma_c.min, cfg.gamma_c.max, cfg.gamma_c.points),
    };
    let scan = scan_gamma_c(&cfg.params, &points)?;
    let mut csv = Vec::new();
    scan.write_csv(&mut csv).map_err(|e| CliError::Compute(e.to_string()))?;
    write_output(out, &csv)?;

    let mut extra = ManifestExtra::new();
    if let Some((gamma_c, max_n)) = scan.max_point() {
        println!(
            "scan: {} points, max N = {max_n:.6} at gamma_c = {gamma_c:.5}",
            scan.points.len()
        );
        extra.insert("max".into(), json!({"gamma_c": gamma_c, "negativity": max_n}));
    }
    extra.insert("failures".into(), serde_json::to_value(&scan.failures).unwrap());
    if let Some(spec) = &cfg.crossover {
        let gamma_cross = find_crossover(&cfg.params, spec.bracket, spec.reference)?;
        println!("scan: N = {} crossed at gamma_c = {gamma_cross:.4}", spec.reference);
        extra.insert(
            "crossover".into(),
            json!({"reference": spec.reference, "gamma_c": gamma_cross}),
        );
    }
    Ok(extra)
}

/// Fidelity trajectory to CSV: t, F_0..F_7, trace_error, min_eig.
pub fn run_dynamics(cfg: &DynamicsConfig, out: &Path) -> Result<ManifestExtra, CliError> {
    let rho0 = match cfg.initial {
        InitialSpec::ExcitedA => default_initial_state(),
    };
    let trajectory = match cfg.times {
        TimeSpec::Linear { t_max, dt } => fidelity_trajectory(&cfg.params, &rho0, t_max, dt)?,
        TimeSpec::Log { t_min, t_max, points } => {
            propagate_log(&cfg.params, &rho0, t_min, t_max, points, true)?
        }
    };
    let mut csv = Vec::new();
    write_trajectory_csv(&trajectory, &mut csv).map_err(|e| CliError::Compute(e.to_string()))?;
    write_output(out, &csv)?;

    let rows = trajectory.fidelity_rows.as_ref().expect("fidelities were requested");
    let final_row = rows.last().expect("at least one sample");
    let dominant = final_row.argmax();
    println!(
        "dynamics: {} samples to t = {}, final dominant eigenstate E_{dominant} (F = {:.4})",
        trajectory.times.len(),
        trajectory.times.last().unwrap(),
        final_row.values()[dominant]
    );
    let mut extra = ManifestExtra::new();
    extra.insert("final_argmax".into(), json!(dominant));
    extra.insert("samples".into(), json!(trajectory.times.len()));
    Ok(extra)
}

fn write_trajectory_csv<W: Write>(trajectory: &Trajectory, mut w: W) -> std::io::Result<()> {
    let rows = trajectory.fidelity_rows.as_ref().expect("fidelity rows present");
    write!(w, "t")?;
    for n in 0..8 {
        write!(w, ",F_{n}")?;
    }
    writeln!(w, ",trace_error,min_eig")?;
    for ((t, state), row) in trajectory.times.iter().zip(&trajectory.states).zip(rows) {
        write!(w, "{t}")?;
        for v in row.values() {
            write!(w, ",{v}")?;
        }
        writeln!(w, ",{},{}", state.trace_error(), state.min_eigenvalue())?;
    }
    Ok(())
}

/// Box-constrained maximization to a JSON report.
pub fn run_optimize(
    cfg: &OptimizeConfig,
    seed_override: Option<u64>,
    out: &Path,
) -> Result<ManifestExtra, CliError> {
    let seed = seed_override.unwrap_or(cfg.seed);
    let result = maximize_entanglement_with(&cfg.bounds, cfg.n_starts, seed, cfg.gamma)?;
    let report = serde_json::to_value(&result).expect("OptResult serializes");
    write_output(out, format!("{}\n", serde_json::to_string_pretty(&report).unwrap()).as_bytes())?;
    println!(
        "optimize: best N = {:.6} at (j = {:.4}, j_c = {:.4}, omega_c = {:.4}, gamma_c = {:.4}) \
         after {} evaluations over {} starts",
        result.best_n,
        result.best_params.j,
        result.best_params.j_c,
        result.best_params.omega_c,
        result.best_params.gamma_c,
        result.evaluations,
        result.starts
    );
    let mut extra = ManifestExtra::new();
    extra.insert("best_n".into(), json!(result.best_n));
    extra.insert("seed".into(), json!(seed));
    Ok(extra)
}
