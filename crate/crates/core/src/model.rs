//! Three-qubit model: Hamiltonian, Lindblad dissipator and the 64×64
//! Liouvillian superoperator acting on row-stacked density matrices.
//!
//! All quantities are dimensionless: frequencies, couplings and decay rates
//! are measured in units of the common qubit frequency ω (ℏ = 1), so ω itself
//! is pinned to 1 and time runs in units of 1/ω.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{kron, ComplexMatrix, C64};
use crate::quantum::{embed, pauli, vectorize, DensityMatrix, Pauli, Site};

/// Physical parameters of the model, in units of ω.
///
/// `omega` documents the rescaling convention and is always 1; the two system
/// qubits share the decay rate `gamma` while the ancilla C has its own
/// frequency `omega_c`, coupling `j_c` and decay rate `gamma_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams", into = "RawModelParams")]
pub struct ModelParams {
    pub omega: f64,
    pub omega_c: f64,
    pub j: f64,
    pub j_c: f64,
    pub gamma: f64,
    pub gamma_c: f64,
}

/// Wire format: `omega` is implied 1 and unknown keys are rejected.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelParams {
    omega_c: f64,
    j: f64,
    j_c: f64,
    gamma: f64,
    gamma_c: f64,
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = Error;
    fn try_from(raw: RawModelParams) -> Result<Self> {
        ModelParams::new(raw.omega_c, raw.j, raw.j_c, raw.gamma, raw.gamma_c)
    }
}

impl From<ModelParams> for RawModelParams {
    fn from(p: ModelParams) -> Self {
        RawModelParams {
            omega_c: p.omega_c,
            j: p.j,
            j_c: p.j_c,
            gamma: p.gamma,
            gamma_c: p.gamma_c,
        }
    }
}

impl ModelParams {
    pub fn new(omega_c: f64, j: f64, j_c: f64, gamma: f64, gamma_c: f64) -> Result<Self> {
        let p = Self { omega: 1.0, omega_c, j, j_c, gamma, gamma_c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega", self.omega),
            ("omega_c", self.omega_c),
            ("j", self.j),
            ("j_c", self.j_c),
            ("gamma", self.gamma),
            ("gamma_c", self.gamma_c),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {value} is not finite")));
            }
        }
        if self.omega != 1.0 {
            return Err(Error::InvalidParams(format!(
                "omega = {} but the dimensionless convention fixes omega = 1",
                self.omega
            )));
        }
        if self.gamma < 0.0 || self.gamma_c < 0.0 {
            return Err(Error::InvalidParams(format!(
                "decay rates must be non-negative (gamma = {}, gamma_c = {})",
                self.gamma, self.gamma_c
            )));
        }
        Ok(())
    }
}

/// The Liouvillian as a 64×64 matrix on row-stacked 8×8 density matrices.
#[derive(Debug, Clone)]
pub struct Superoperator {
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Apply to a vectorized density matrix.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.apply(v)
    }
}

/// H = (ω/2)(σ_z^A + σ_z^B) + (ω_C/2)σ_z^C + J σ_x^A σ_x^B + J_C (σ_x^A σ_x^C + σ_x^B σ_x^C).
///
/// Real symmetric by construction.
pub fn build_hamiltonian(p: &ModelParams) -> ComplexMatrix {
    let sz = pauli(Pauli::Z);
    let sx = pauli(Pauli::X);
    let id = ComplexMatrix::identity(2);

    let free = &(&kron(&sz, &kron(&id, &id)) + &kron(&id, &kron(&sz, &id)))
        .scale(real(p.omega / 2.0))
        + &kron(&id, &kron(&id, &sz)).scale(real(p.omega_c / 2.0));

    let ab = kron(&sx, &kron(&sx, &id)).scale(real(p.j));
    let ac = kron(&sx, &kron(&id, &sx));
    let bc = kron(&id, &kron(&sx, &sx));
    let ancilla = (&ac + &bc).scale(real(p.j_c));

    &(&free + &ab) + &ancilla
}

/// Vectorized Liouvillian: −i(H⊗I − I⊗Hᵀ) plus the decay terms
/// γ_k [σ₋ᵏ ⊗ (σ₋ᵏ)* − ½(σ₊ᵏσ₋ᵏ)⊗I − ½ I⊗(σ₊ᵏσ₋ᵏ)ᵀ] for k ∈ {A, B, C}.
pub fn build_liouvillian(p: &ModelParams) -> Result<Superoperator> {
    p.validate()?;
    let h = build_hamiltonian(p);
    let id8 = ComplexMatrix::identity(8);

    let commutator = (&kron(&h, &id8) - &kron(&id8, &h.transpose())).scale(C64::new(0.0, -1.0));

    let mut matrix = commutator;
    for (site, rate) in [(Site::A, p.gamma), (Site::B, p.gamma), (Site::C, p.gamma_c)] {
        let lower = embed(&pauli(Pauli::Minus), site)?;
        let number = lower.adjoint().matmul(&lower); // σ₊σ₋ = |e⟩⟨e| on that site
        let jump = kron(&lower, &lower.conj());
        let anti = &kron(&number, &id8) + &kron(&id8, &number.transpose());
        matrix = &matrix + &(&jump - &anti.scale(real(0.5))).scale(real(rate));
    }
    Ok(Superoperator { matrix })
}

/// dρ/dt evaluated directly from matrix products (no superoperator).
pub fn apply_liouvillian(p: &ModelParams, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    p.validate()?;
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch(format!(
            "apply_liouvillian expects an 8x8 state, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let h = build_hamiltonian(p);
    let r = rho.matrix();
    let mut out = (&h.matmul(r) - &r.matmul(&h)).scale(C64::new(0.0, -1.0));
    for (site, rate) in [(Site::A, p.gamma), (Site::B, p.gamma), (Site::C, p.gamma_c)] {
        let lower = embed(&pauli(Pauli::Minus), site)?;
        let raise = lower.adjoint();
        let number = raise.matmul(&lower);
        let jump = lower.matmul(r).matmul(&raise);
        let anti = &number.matmul(r) + &r.matmul(&number);
        out = &out + &(&jump - &anti.scale(real(0.5))).scale(real(rate));
    }
    Ok(out)
}

/// Row vector vec(I₈)ᴴ contracted with the superoperator; zero iff the
/// generator annihilates the trace.
pub fn trace_annihilation_defect(s: &Superoperator) -> f64 {
    let vec_id = vectorize(&ComplexMatrix::identity(8));
    let m = s.matrix();
    let mut acc = 0.0;
    for j in 0..m.cols() {
        let mut entry = C64::ZERO;
        for (i, w) in vec_id.iter().enumerate() {
            entry += w.conj() * m[(i, j)];
        }
        acc += entry.norm_sqr();
    }
    acc.sqrt()
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}
