//! Negativity of a two-qubit state and the closed-form benchmark for the
//! uncoupled pair.
//!
//! The negativity N = (‖ρ^{T_B}‖₁ − 1)/2 of a unit-trace Hermitian state
//! equals the absolute sum of the negative eigenvalues of its partial
//! transpose, which is how it is computed here. N = 0 for separable two-qubit
//! states; the upper bound N = 0.5 is reached by a Bell state.

use crate::error::{Error, Result};
use crate::numerics::eigh;
use crate::quantum::{partial_transpose_b, DensityMatrix};

/// A negativity in [0, 0.5].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NegativityValue {
    value: f64,
}

impl NegativityValue {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=0.5 + 1e-12).contains(&value) {
            return Err(Error::InvalidState(format!("negativity {value} outside [0, 0.5]")));
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl From<NegativityValue> for f64 {
    fn from(n: NegativityValue) -> f64 {
        n.value
    }
}

/// Negativity of a two-qubit state from the spectrum of its partial transpose.
pub fn negativity(rho_ab: &DensityMatrix) -> Result<NegativityValue> {
    if rho_ab.dim() != 4 {
        return Err(Error::InvalidState(format!(
            "negativity expects a two-qubit (4x4) state, got dimension {}",
            rho_ab.dim()
        )));
    }
    let pt = partial_transpose_b(rho_ab.matrix())?;
    let spectrum = eigh(&pt)?;
    let neg_sum: f64 = spectrum.eigenvalues.iter().filter(|&&x| x < 0.0).map(|x| -x).sum();
    NegativityValue::new(neg_sum)
}

/// Closed-form steady-state negativity of the uncoupled qubit pair:
/// N = max[0, (√(J²γ² + 4J²) − J²) / (4J² + 4 + γ²)].
pub fn two_qubit_analytic(j: f64, gamma: f64) -> NegativityValue {
    assert!(gamma >= 0.0, "decay rate must be non-negative");
    assert!(j.is_finite() && gamma.is_finite());
    let j2 = j * j;
    let raw = ((j2 * gamma * gamma + 4.0 * j2).sqrt() - j2) / (4.0 * j2 + 4.0 + gamma * gamma);
    NegativityValue::new(raw.max(0.0)).expect("analytic formula stays within [0, 0.5]")
}

/// Coupling strength maximizing [`two_qubit_analytic`] over J ∈ (0, 2].
///
/// Golden-section search; the objective is unimodal on this interval for the
/// small decay rates of interest. As γ → 0 the maximizer approaches the root
/// of J² + J − 1 = 0, i.e. J* = (√5 − 1)/2.
pub fn optimal_two_qubit_coupling(gamma: f64) -> (f64, NegativityValue) {
    assert!(gamma >= 0.0, "decay rate must be non-negative");
    let f = |j: f64| two_qubit_analytic(j, gamma).value();
    let j_star = golden_section_max(f, 0.0, 2.0, 1e-6);
    (j_star, two_qubit_analytic(j_star, gamma))
}

/// Locate the maximum of a unimodal function on [a, b] to within `tol`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
