//! Steady state of the Liouvillian and its entanglement.
//!
//! The fixed point L[ρ] = 0 is the nullspace of the 64×64 vectorized
//! generator. With every qubit decaying it is unique; the second-smallest
//! singular value certifies that numerically. The raw nullspace vector is
//! reshaped, hermitized and trace-normalized, and positivity is validated —
//! never projected.

use crate::entanglement::negativity;
use crate::error::{Error, Result};
use crate::model::{build_liouvillian, ModelParams};
use crate::numerics::{c, eigh, min_singular_vector, vector_norm};
use crate::quantum::{partial_trace_c, unvectorize, vectorize, DensityMatrix, StateTolerances};

/// Tolerances for steady-state extraction, sized for double precision at
/// dimension 64. All are absolute.
#[derive(Debug, Clone, Copy)]
pub struct SteadyOptions {
    /// Maximum allowed ‖M·vec(ρ_st)‖₂ of the final state.
    pub residual_tol: f64,
    /// Minimum second-smallest singular value certifying uniqueness.
    pub gap_tol: f64,
    /// Magnitude of the allowed negative-eigenvalue floor.
    pub positivity_tol: f64,
    /// Minimum |trace| of the raw nullspace vector before normalization.
    pub trace_tol: f64,
}

impl Default for SteadyOptions {
    fn default() -> Self {
        Self { residual_tol: 1e-9, gap_tol: 1e-6, positivity_tol: 1e-9, trace_tol: 1e-8 }
    }
}

/// A validated steady state with its numerical certificates.
#[derive(Debug, Clone)]
pub struct SteadyStateResult {
    pub rho_st: DensityMatrix,
    /// ‖M·vec(ρ_st)‖₂ of the normalized state.
    pub residual: f64,
    /// Second-smallest singular value of the Liouvillian.
    pub nullspace_gap: f64,
    /// Smallest eigenvalue of ρ_st.
    pub min_eigenvalue: f64,
}

/// Solve L[ρ] = 0 with default tolerances.
pub fn steady_state(p: &ModelParams) -> Result<SteadyStateResult> {
    steady_state_with(p, &SteadyOptions::default())
}

/// Solve L[ρ] = 0 with explicit tolerances.
pub fn steady_state_with(p: &ModelParams, opts: &SteadyOptions) -> Result<SteadyStateResult> {
    p.validate()?;
    if p.gamma <= 0.0 || p.gamma_c <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "uniqueness of the steady state needs gamma > 0 and gamma_c > 0 \
             (gamma = {}, gamma_c = {})",
            p.gamma, p.gamma_c
        )));
    }
    let superop = build_liouvillian(p)?;
    let (v, _, gap) = min_singular_vector(superop.matrix())?;
    if gap < opts.gap_tol {
        return Err(Error::NonUniqueSteadyState { gap, tol: opts.gap_tol });
    }

    let raw = unvectorize(&v)?;
    let hermitian = raw.hermitize();
    let trace = hermitian.trace().re;
    if trace.abs() < opts.trace_tol {
        return Err(Error::ZeroTrace(trace.abs()));
    }
    let normalized = hermitian.scale(c(1.0 / trace));

    let min_eigenvalue = eigh(&normalized)?.eigenvalues[0];
    if min_eigenvalue < -opts.positivity_tol {
        return Err(Error::NotPositive { min_eigenvalue, tol: opts.positivity_tol });
    }
    // hermitized, normalized and positivity-checked above, so construction
    // cannot fail on those grounds
    let tolerances =
        StateTolerances { hermiticity: 1e-12, trace: 1e-12, positivity: opts.positivity_tol };
    let rho_st = DensityMatrix::with_tolerances(normalized, &tolerances)?;

    let residual = vector_norm(&superop.apply_vec(&vectorize(rho_st.matrix())));
    if residual > opts.residual_tol {
        return Err(Error::ConvergenceFailure(format!(
            "steady-state residual {residual:.3e} exceeds {:.1e}",
            opts.residual_tol
        )));
    }
    Ok(SteadyStateResult { min_eigenvalue, rho_st, residual, nullspace_gap: gap })
}

/// Negativity of the reduced steady state ρ_AB = tr_C[ρ_st].
pub fn steady_negativity(p: &ModelParams) -> Result<f64> {
    let result = steady_state(p)?;
    let reduced = partial_trace_c(&result.rho_st)?;
    Ok(negativity(&reduced)?.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ComplexMatrix;
    use crate::quantum::{basis_index, Level};

    #[test]
    fn pure_decay_reaches_all_ground() {
        let p = ModelParams::new(0.5, 0.0, 0.0, 1e-3, 1e-3).unwrap();
        let result = steady_state(&p).unwrap();
        let ggg = basis_index(Level::Ground, Level::Ground, Level::Ground);
        let mut expect = ComplexMatrix::zeros(8, 8);
        expect[(ggg, ggg)] = crate::numerics::c(1.0);
        assert!(result.rho_st.matrix().distance(&expect) < 1e-10);
        assert!(result.residual <= 1e-9);
        assert!(result.nullspace_gap >= 1e-6);
        assert!(result.min_eigenvalue >= -1e-9);
    }

    #[test]
    fn uncoupled_pair_has_no_entanglement() {
        let p = ModelParams::new(0.5, 0.0, 0.0, 1e-3, 1e-3).unwrap();
        assert!(steady_negativity(&p).unwrap() < 1e-10);
    }

    #[test]
    fn analytic_starting_point() {
        // J_C = 0 decouples the ancilla; the pair negativity takes the
        // closed-form value independent of omega_c and gamma_c.
        for j in [0.62, -0.62] {
            let p = ModelParams::new(0.3, j, 0.0, 1e-3, 1e-3).unwrap();
            let n = steady_negativity(&p).unwrap();
            assert!((n - 0.155).abs() < 1e-3, "J={j}: N={n}");
            let analytic = crate::entanglement::two_qubit_analytic(j, 1e-3).value();
            assert!((n - analytic).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_decay_is_rejected() {
        let p = ModelParams::new(0.5, 0.1, 0.1, 0.0, 1e-3).unwrap();
        assert!(matches!(steady_state(&p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn near_degenerate_nullspace_fails_the_gap_certificate() {
        // decoupled ancilla decaying at 1e-9: a second near-stationary mode
        let p = ModelParams::new(0.5, -0.62, 0.0, 1e-3, 1e-9).unwrap();
        match steady_state(&p) {
            Err(Error::NonUniqueSteadyState { gap, tol }) => {
                assert!(gap < tol);
            }
            other => panic!("expected NonUniqueSteadyState, got {other:?}"),
        }
    }
}
