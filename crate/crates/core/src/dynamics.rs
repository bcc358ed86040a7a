//! Time propagation of the master equation.
//!
//! The generator is time-independent and small, so one matrix exponential
//! P = exp(M·dt) is computed per run and every step is a 64-vector product.
//! This is exact for the Lindblad semigroup at the sample times and immune to
//! the stiffness of the model (unit-scale frequencies against 10⁻³ decay
//! rates), where step-wise integrators would need tiny steps.

use crate::error::{Error, Result};
use crate::model::{build_liouvillian, ModelParams};
use crate::numerics::{expm, ComplexMatrix, C64};
use crate::quantum::{
    product_state, trace_distance, unvectorize, vectorize, DensityMatrix, Level, StateTolerances,
};
use crate::spectral::{fidelities, hamiltonian_spectrum, FidelityVector};
use crate::steady::steady_state;

/// Hard cap on propagation steps per run.
const MAX_STEPS: usize = 2_000_000;

/// Sampled states (and optionally fidelities) along one master-equation
/// trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Sample times in units of 1/ω, ascending, starting at 0.
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// Fidelities against the Hamiltonian eigenstates, one row per sample.
    pub fidelity_rows: Option<Vec<FidelityVector>>,
}

/// The initial state used throughout: qubit A excited, B and the ancilla C
/// in their ground states.
pub fn default_initial_state() -> DensityMatrix {
    product_state(Level::Excited, Level::Ground, Level::Ground)
}

/// Convergence horizon sized to the slowest decay channel: 50 / min(γ, γ_C).
pub fn suggested_t_cap(p: &ModelParams) -> f64 {
    50.0 / p.gamma.min(p.gamma_c)
}

/// Propagate from `rho0`, sampling at t = 0, dt_out, 2·dt_out, … ≤ t_max.
pub fn propagate(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_max: f64,
    dt_out: f64,
) -> Result<Trajectory> {
    propagate_impl(p, rho0, t_max, dt_out, false)
}

/// As [`propagate`], additionally recording fidelity rows at every sample.
pub fn fidelity_trajectory(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_max: f64,
    dt_out: f64,
) -> Result<Trajectory> {
    propagate_impl(p, rho0, t_max, dt_out, true)
}

fn propagate_impl(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_max: f64,
    dt_out: f64,
    with_fidelities: bool,
) -> Result<Trajectory> {
    check_times(t_max, dt_out)?;
    let steps = (t_max / dt_out).floor() as usize;
    if steps > MAX_STEPS {
        return Err(Error::InvalidParams(format!(
            "{steps} propagation steps exceed the cap {MAX_STEPS}; increase dt_out"
        )));
    }
    let mut stepper = Stepper::new(p, rho0, dt_out)?;
    let spectrum = if with_fidelities { Some(hamiltonian_spectrum(p)?) } else { None };

    let mut trajectory = Trajectory {
        times: Vec::with_capacity(steps + 1),
        states: Vec::with_capacity(steps + 1),
        fidelity_rows: if with_fidelities { Some(Vec::with_capacity(steps + 1)) } else { None },
    };
    for k in 0..=steps {
        if k > 0 {
            stepper.advance();
        }
        let state = stepper.state()?;
        if let (Some(rows), Some(s)) = (&mut trajectory.fidelity_rows, &spectrum) {
            rows.push(fidelities(&state, s)?);
        }
        trajectory.times.push(k as f64 * dt_out);
        trajectory.states.push(state);
    }
    Ok(trajectory)
}

/// Propagate with logarithmically spaced samples between `t_min` and `t_max`
/// (plus the t = 0 sample).
///
/// Sample times snap to an internal uniform grid so a single exponentiated
/// step can be reused; the returned `times` are the snapped values.
pub fn propagate_log(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_min: f64,
    t_max: f64,
    points: usize,
    with_fidelities: bool,
) -> Result<Trajectory> {
    if !(t_min > 0.0 && t_max > t_min) || points < 2 {
        return Err(Error::InvalidParams(format!(
            "log sampling needs 0 < t_min < t_max and points >= 2 \
             (t_min = {t_min}, t_max = {t_max}, points = {points})"
        )));
    }
    let ratio = (t_max / t_min).powf(1.0 / (points - 1) as f64);
    let dt = (t_min * (ratio - 1.0)).max(t_max / 200_000.0);
    let mut steps: Vec<usize> = (0..points)
        .map(|k| (t_min * ratio.powi(k as i32) / dt).round().max(1.0) as usize)
        .collect();
    steps.dedup();

    let mut stepper = Stepper::new(p, rho0, dt)?;
    let spectrum = if with_fidelities { Some(hamiltonian_spectrum(p)?) } else { None };

    let mut trajectory =
        Trajectory { times: vec![0.0], states: vec![rho0.clone()], fidelity_rows: None };
    if let Some(s) = &spectrum {
        trajectory.fidelity_rows = Some(vec![fidelities(rho0, s)?]);
    }
    let mut current = 0usize;
    for target in steps {
        while current < target {
            stepper.advance();
            current += 1;
        }
        let state = stepper.state()?;
        if let (Some(rows), Some(s)) = (&mut trajectory.fidelity_rows, &spectrum) {
            rows.push(fidelities(&state, s)?);
        }
        trajectory.times.push(current as f64 * dt);
        trajectory.states.push(state);
    }
    Ok(trajectory)
}

/// Step until the trace distance to the steady state drops below `tol`.
///
/// Samples on a unit time grid; returns the first sampled time that is
/// converged together with the state there.
pub fn converge_to_steady(
    p: &ModelParams,
    rho0: &DensityMatrix,
    tol: f64,
    t_cap: f64,
) -> Result<(f64, DensityMatrix)> {
    if tol.is_nan() || tol <= 0.0 || t_cap.is_nan() || t_cap < 0.0 {
        return Err(Error::InvalidParams(format!(
            "converge_to_steady needs tol > 0 and t_cap >= 0 (tol = {tol}, t_cap = {t_cap})"
        )));
    }
    let target = steady_state(p)?.rho_st;
    let mut distance = trace_distance(rho0, &target);
    if distance <= tol {
        return Ok((0.0, rho0.clone()));
    }
    let dt = 1.0;
    let steps = (t_cap / dt).ceil() as usize;
    if steps > MAX_STEPS {
        return Err(Error::InvalidParams(format!(
            "{steps} propagation steps exceed the cap {MAX_STEPS}; reduce t_cap"
        )));
    }
    let mut stepper = Stepper::new(p, rho0, dt)?;
    for k in 1..=steps {
        stepper.advance();
        // distance check on the raw evolved matrix; full state validation
        // only once a candidate is returned
        distance = stepper.raw_distance(&target)?;
        if distance <= tol {
            return Ok((k as f64 * dt, stepper.state()?));
        }
    }
    Err(Error::NotConverged { t_cap, last_distance: distance })
}

/// Precomputed one-step propagator applied in the vectorized space.
struct Stepper {
    propagator: ComplexMatrix,
    v: Vec<C64>,
}

impl Stepper {
    fn new(p: &ModelParams, rho0: &DensityMatrix, dt: f64) -> Result<Self> {
        if rho0.dim() != 8 {
            return Err(Error::DimensionMismatch(format!(
                "propagation expects an 8x8 state, got {}x{}",
                rho0.dim(),
                rho0.dim()
            )));
        }
        let superop = build_liouvillian(p)?;
        let propagator = expm(&superop.matrix().scale(C64::new(dt, 0.0)))?;
        Ok(Self { propagator, v: vectorize(rho0.matrix()) })
    }

    fn advance(&mut self) {
        self.v = self.propagator.apply(&self.v);
    }

    /// Trace distance between the current (hermitized) matrix and a target,
    /// without the cost of full state validation.
    fn raw_distance(&self, target: &DensityMatrix) -> Result<f64> {
        let m = unvectorize(&self.v)?.hermitize();
        let diff = &m - target.matrix();
        let spectrum = crate::numerics::eigh(&diff)?;
        Ok(0.5 * spectrum.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
    }

    fn state(&self) -> Result<DensityMatrix> {
        let m = unvectorize(&self.v)?;
        DensityMatrix::with_tolerances(m, &StateTolerances::TRAJECTORY)
    }
}

fn check_times(t_max: f64, dt_out: f64) -> Result<()> {
    if t_max.is_nan() || dt_out.is_nan() || t_max <= 0.0 || dt_out <= 0.0 || dt_out > t_max {
        return Err(Error::InvalidParams(format!(
            "need 0 < dt_out <= t_max (dt_out = {dt_out}, t_max = {t_max})"
        )));
    }
    Ok(())
}
