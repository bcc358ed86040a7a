//! Acceptance gate: every shipped claim of the library, pinned to its
//! tolerance and runtime budget. One test per criterion; each prints a
//! `[criterion N] PASS/FAIL` line (visible with `--nocapture`).
//!
//! Note on criterion 4: the strict figure-level threshold is kept verbatim.
//! A correct solve of this model shows a reproducible residual enhancement
//! bump (N = 0.15565 at omega_c = 0.56, j_c = 0.01 for J = +0.62) that sits
//! just above the 0.155 threshold, so the criterion fails by 0.0007 even
//! though the sign dichotomy it describes is real. The measured value is
//! cross-checked by three independent solver routes; see the property suite
//! for the honest formulation.

mod common;

use std::time::Instant;

use common::{random_density, rk4_propagate};
use dal_core::dynamics::{
    converge_to_steady, default_initial_state, propagate, propagate_log, suggested_t_cap,
};
use dal_core::entanglement::{negativity, optimal_two_qubit_coupling, two_qubit_analytic};
use dal_core::explore::{
    find_crossover, logspace, maximize_entanglement, scan_gamma_c, sweep_2d, Bounds,
};
use dal_core::model::{build_liouvillian, ModelParams};
use dal_core::numerics::{c, expm, kron, vector_norm, ComplexMatrix, C64};
use dal_core::quantum::{partial_trace_c, trace_distance, unvectorize, vectorize};
use dal_core::spectral::{
    eigenstate_negativity, fidelities, hamiltonian_spectrum, truncated_mixture,
};
use dal_core::steady::{steady_negativity, steady_state};
use rand::prelude::*;

fn fig3_set() -> ModelParams {
    ModelParams::new(0.55, -0.62, 0.01, 1e-3, 1e-3).unwrap()
}

fn fig5_set() -> ModelParams {
    ModelParams::new(0.55, 0.62, 0.01, 1e-3, 1e-3).unwrap()
}

fn enhanced_set() -> ModelParams {
    ModelParams::new(0.55, -0.62, 0.01, 1e-3, 0.04).unwrap()
}

fn optimal_set() -> ModelParams {
    ModelParams::new(-0.74, -0.31, 0.01, 1e-3, 0.03).unwrap()
}

struct Criterion {
    number: u32,
    started: Instant,
    budget_s: f64,
}

impl Criterion {
    fn start(number: u32, budget_s: f64) -> Self {
        Self { number, started: Instant::now(), budget_s }
    }

    fn finish(self, detail: &str) {
        let elapsed = self.started.elapsed().as_secs_f64();
        println!(
            "[criterion {}] PASS ({elapsed:.2} s of {} s budget): {detail}",
            self.number, self.budget_s
        );
        assert!(
            elapsed < self.budget_s,
            "[criterion {}] runtime {elapsed:.2} s exceeded budget {} s",
            self.number,
            self.budget_s
        );
    }

    fn fail(self, detail: &str) -> ! {
        println!("[criterion {}] FAIL: {detail}", self.number);
        panic!("[criterion {}] FAIL: {detail}", self.number);
    }
}

#[test]
fn criterion_1_analytic_benchmark() {
    let criterion = Criterion::start(1, 1.0);
    let n = two_qubit_analytic(0.62, 1e-3).value();
    if (n - 0.1545).abs() > 5e-4 {
        criterion.fail(&format!("two_qubit_analytic(0.62, 1e-3) = {n}, expected 0.1545 +- 0.0005"));
    }
    let (j_star, n_star) = optimal_two_qubit_coupling(1e-3);
    if (j_star - 0.618).abs() > 1e-3 || (n_star.value() - 0.1545).abs() > 5e-4 {
        criterion.fail(&format!(
            "optimal coupling ({j_star}, {}) vs (0.618 +- 0.001, 0.1545 +- 0.0005)",
            n_star.value()
        ));
    }
    criterion.finish(&format!("N(0.62) = {n:.6}, optimum ({j_star:.5}, {:.6})", n_star.value()));
}

#[test]
fn criterion_2_oracle_equivalence() {
    let criterion = Criterion::start(2, 5.0);
    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let j = 4.0 * rng.gen::<f64>() - 2.0;
        let gamma = 0.1 * (1.0 - rng.gen::<f64>());
        let p = ModelParams::new(0.3, j, 0.0, gamma, gamma).unwrap();
        let numeric = steady_negativity(&p).unwrap();
        let analytic = two_qubit_analytic(j, gamma).value();
        let err = (numeric - analytic).abs();
        worst = worst.max(err);
        if err > 1e-6 {
            criterion.fail(&format!(
                "J = {j}, gamma = {gamma}: |numeric - analytic| = {err:.3e} > 1e-6"
            ));
        }
    }
    criterion.finish(&format!("50 random (J, gamma) points, worst deviation {worst:.3e}"));
}

#[test]
fn criterion_3_fig3_maximum() {
    let criterion = Criterion::start(3, 1.0);
    let n = steady_negativity(&fig3_set()).unwrap();
    if (n - 0.180).abs() > 5e-3 {
        criterion.fail(&format!("N = {n}, expected 0.180 +- 0.005"));
    }
    criterion.finish(&format!("N(J=-0.62, omega_c=0.55, j_c=0.01) = {n:.6}"));
}

#[test]
fn criterion_4_fig2_monotone_suppression() {
    let criterion = Criterion::start(4, 60.0);
    let mut template = fig3_set();
    template.j = 0.62;
    let grid = sweep_2d(&template, (-1.0, 1.0), (0.01, 1.0), (51, 51)).unwrap();
    assert!(grid.failures.is_empty(), "sweep failures: {:?}", grid.failures);
    let (omega_c, j_c, max_n) = grid.max_point().unwrap();
    if max_n >= 0.155 {
        criterion.fail(&format!(
            "J = +0.62 grid max is {max_n:.9} at (omega_c = {omega_c}, j_c = {j_c}), \
             not < 0.155; the model has a genuine ~0.7% enhancement pocket above the \
             uncoupled value 0.154507 here (confirmed by SVD, LU and propagation routes)"
        ));
    }
    criterion.finish(&format!("51x51 grid max {max_n:.6} at ({omega_c}, {j_c})"));
}

#[test]
fn criterion_5_fig4_peak_and_crossover() {
    let criterion = Criterion::start(5, 30.0);
    let template = fig3_set();
    let scan = scan_gamma_c(&template, &logspace(1e-3, 1.0, 140)).unwrap();
    assert!(scan.failures.is_empty());
    let (peak_gamma, peak_n) = scan.max_point().unwrap();
    if (peak_n - 0.203).abs() > 5e-3 || (peak_gamma - 0.04).abs() > 0.01 {
        criterion.fail(&format!(
            "scan peak N = {peak_n:.6} at gamma_c = {peak_gamma:.4}, expected 0.203 +- 0.005 near 0.04 +- 0.01"
        ));
    }
    for (g, n) in scan.points.iter().filter(|(g, _)| *g >= 0.7) {
        assert!(*n < 0.155, "enhancement should have ceased at gamma_c = {g}, got N = {n}");
    }
    let crossover = find_crossover(&template, (0.3, 0.9), 0.155).unwrap();
    if (crossover - 0.64).abs() > 0.02 {
        criterion.fail(&format!("crossover at gamma_c = {crossover:.4}, expected 0.64 +- 0.02"));
    }
    criterion.finish(&format!(
        "peak N = {peak_n:.6} at gamma_c = {peak_gamma:.4}, crossover at {crossover:.4}"
    ));
}

#[test]
fn criterion_6_constrained_optimization() {
    let criterion = Criterion::start(6, 300.0);
    let printed_optimum = steady_negativity(&optimal_set()).unwrap();
    if (printed_optimum - 0.413).abs() > 5e-3 {
        criterion.fail(&format!(
            "N at the printed optimal parameters = {printed_optimum:.6}, expected 0.413 +- 0.005"
        ));
    }
    let result = maximize_entanglement(&Bounds::default(), 32, 42).unwrap();
    if result.best_n < 0.408 {
        criterion.fail(&format!(
            "optimizer best {:.6} at {:?} below 0.408",
            result.best_n, result.best_params
        ));
    }
    criterion.finish(&format!(
        "printed-optimum N = {printed_optimum:.6}; optimizer best {:.6} at \
         (j = {:.4}, j_c = {:.4}, omega_c = {:.4}, gamma_c = {:.4}) in {} evaluations",
        result.best_n,
        result.best_params.j,
        result.best_params.j_c,
        result.best_params.omega_c,
        result.best_params.gamma_c,
        result.evaluations
    ));
}

#[test]
fn criterion_7_eigenstate_selection() {
    let criterion = Criterion::start(7, 30.0);
    let rho0 = default_initial_state();

    let run = |p: &ModelParams| -> usize {
        let trajectory = propagate_log(p, &rho0, 1.0, 2e4, 90, true).unwrap();
        let rows = trajectory.fidelity_rows.unwrap();
        rows.last().unwrap().argmax()
    };
    let fig5_argmax = run(&fig5_set());
    if fig5_argmax != 0 {
        criterion.fail(&format!("long-time argmax at the fig. 5 set is {fig5_argmax}, expected 0"));
    }
    let optimal_argmax = run(&optimal_set());
    if optimal_argmax != 4 {
        criterion
            .fail(&format!("long-time argmax at the optimal set is {optimal_argmax}, expected 4"));
    }
    criterion.finish(&format!(
        "long-time dominant eigenstate: {fig5_argmax} (fig. 5 set), {optimal_argmax} (optimal set)"
    ));
}

#[test]
fn criterion_8_truncated_mixtures() {
    let criterion = Criterion::start(8, 10.0);

    let mixture_negativity = |p: &ModelParams, indices: &[usize]| -> f64 {
        let steady = steady_state(p).unwrap();
        let spectrum = hamiltonian_spectrum(p).unwrap();
        let f = fidelities(&steady.rho_st, &spectrum).unwrap();
        let mix = truncated_mixture(&spectrum, &f, indices).unwrap();
        negativity(&partial_trace_c(&mix.rho).unwrap()).unwrap().value()
    };

    let n_024 = mixture_negativity(&fig5_set(), &[0, 2, 4]);
    if (n_024 - 0.157).abs() > 5e-3 {
        criterion.fail(&format!("{{0,2,4}} mixture N = {n_024:.6}, expected 0.157 +- 0.005"));
    }
    let n_04 = mixture_negativity(&enhanced_set(), &[0, 4]);
    if (n_04 - 0.206).abs() > 5e-3 {
        criterion.fail(&format!("{{0,4}} mixture N = {n_04:.6}, expected 0.206 +- 0.005"));
    }
    let spectrum = hamiltonian_spectrum(&optimal_set()).unwrap();
    let n_e4 = eigenstate_negativity(&spectrum, 4).unwrap().value();
    if (n_e4 - 0.499).abs() > 3e-3 {
        criterion.fail(&format!("E_4 negativity = {n_e4:.6}, expected 0.499 +- 0.003"));
    }
    criterion.finish(&format!(
        "{{0,2,4}} mixture {n_024:.6}, {{0,4}} mixture {n_04:.6}, E_4 negativity {n_e4:.6}"
    ));
}

#[test]
fn criterion_9_property_suites() {
    let criterion = Criterion::start(9, 120.0);
    let mut rng = StdRng::seed_from_u64(9);

    // superoperator identity vec(A rho B) = (A (x) B^T) vec(rho) to 1e-12
    for _ in 0..20 {
        let rand8 = |rng: &mut StdRng| {
            ComplexMatrix::from_fn(8, 8, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })
        };
        let (a, rho, b) = (rand8(&mut rng), rand8(&mut rng), rand8(&mut rng));
        let lhs = vectorize(&a.matmul(&rho).matmul(&b));
        let rhs = kron(&a, &b.transpose()).apply(&vectorize(&rho));
        let err: f64 = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        assert!(err <= 1e-12 * vector_norm(&lhs).max(1.0), "vec identity error {err:.3e}");
    }

    // trajectory trace/Hermiticity/positivity within tolerances
    let trajectory = propagate(&enhanced_set(), &default_initial_state(), 300.0, 3.0).unwrap();
    for state in &trajectory.states {
        assert!(state.trace_error() <= 1e-9);
        assert!(state.min_eigenvalue() >= -1e-8);
        assert!(state.matrix().distance(&state.matrix().adjoint()) <= 1e-9);
    }

    // J_C sign symmetry to 1e-9
    for _ in 0..5 {
        let mut p = fig3_set();
        p.omega_c = 2.0 * rng.gen::<f64>() - 1.0;
        p.j_c = rng.gen::<f64>();
        let mut mirrored = p;
        mirrored.j_c = -p.j_c;
        let delta = (steady_negativity(&p).unwrap() - steady_negativity(&mirrored).unwrap()).abs();
        assert!(delta <= 1e-9, "J_C sign asymmetry {delta:.3e}");
    }

    // initial-state independence of the steady state to 1e-6
    let p = enhanced_set();
    let reference = steady_state(&p).unwrap().rho_st;
    for _ in 0..3 {
        let rho0 = random_density(8, &mut rng);
        let (_, converged) = converge_to_steady(&p, &rho0, 1e-6, suggested_t_cap(&p)).unwrap();
        assert!(trace_distance(&converged, &reference) <= 1e-6);
    }

    // expm propagator vs classical RK4 to 1e-6
    let m = build_liouvillian(&p).unwrap().matrix().clone();
    let v0 = vectorize(default_initial_state().matrix());
    let exact = expm(&m.scale(c(10.0))).unwrap().apply(&v0);
    let integrated = rk4_propagate(&m, &v0, 10.0, 1e-3);
    let err: f64 =
        exact.iter().zip(&integrated).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    assert!(err <= 1e-6, "expm vs RK4 deviation {err:.3e}");
    let unvec_check = unvectorize(&exact).unwrap();
    assert!((unvec_check.trace().re - 1.0).abs() <= 1e-9);

    criterion.finish(
        "vec identity, trajectory CPTP, J_C symmetry, initial-state independence, expm-vs-RK4",
    );
}
