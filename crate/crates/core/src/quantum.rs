//! Qubit operator algebra for the three-qubit register A ⊗ B ⊗ C.
//!
//! Basis conventions, fixed once for the whole crate:
//! * single-qubit basis index 0 = |e⟩ (excited), 1 = |g⟩ (ground), so that
//!   σ_z = diag(1, −1) gives the excited level energy +ω/2;
//! * composite basis index = 4·a + 2·b + c with a, b, c ∈ {0, 1} — slot A is
//!   the slowest index;
//! * density matrices are vectorized by row stacking, which makes
//!   vec(AρB) = (A ⊗ Bᵀ)·vec(ρ).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{c, eigh, kron, ComplexMatrix, C64};

/// One of the three qubits; tensor slot order is A ⊗ B ⊗ C.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    A,
    B,
    C,
}

/// Level of a single two-level system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Excited,
    Ground,
}

impl Level {
    fn index(self) -> usize {
        match self {
            Level::Excited => 0,
            Level::Ground => 1,
        }
    }
}

/// Single-qubit operator kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    Plus,
    Minus,
    Id,
}

/// The 2×2 operator for the requested kind in the |e⟩, |g⟩ basis.
///
/// σ₋ = |g⟩⟨e| lowers the excited state; σ₊ is its adjoint.
pub fn pauli(kind: Pauli) -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    match kind {
        Pauli::X => ComplexMatrix::from_rows(&[vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]),
        Pauli::Y => ComplexMatrix::from_rows(&[vec![c(0.0), -i], vec![i, c(0.0)]]),
        Pauli::Z => ComplexMatrix::from_diagonal(&[c(1.0), c(-1.0)]),
        Pauli::Plus => ComplexMatrix::from_rows(&[vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]),
        Pauli::Minus => ComplexMatrix::from_rows(&[vec![c(0.0), c(0.0)], vec![c(1.0), c(0.0)]]),
        Pauli::Id => ComplexMatrix::identity(2),
    }
}

/// Embed a single-qubit operator into the 8-dimensional A ⊗ B ⊗ C space.
pub fn embed(op: &ComplexMatrix, site: Site) -> Result<ComplexMatrix> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "embed expects a 2x2 operator, got {}x{}",
            op.rows(),
            op.cols()
        )));
    }
    let id = ComplexMatrix::identity(2);
    Ok(match site {
        Site::A => kron(op, &kron(&id, &id)),
        Site::B => kron(&id, &kron(op, &id)),
        Site::C => kron(&id, &kron(&id, op)),
    })
}

/// Composite basis index of the product state |a b c⟩.
pub fn basis_index(a: Level, b: Level, c: Level) -> usize {
    4 * a.index() + 2 * b.index() + c.index()
}

/// Validation tolerances for [`DensityMatrix`] construction.
#[derive(Debug, Clone, Copy)]
pub struct StateTolerances {
    /// Frobenius norm of ρ − ρ^†.
    pub hermiticity: f64,
    /// |tr ρ − 1|.
    pub trace: f64,
    /// Magnitude of the allowed negative eigenvalue floor.
    pub positivity: f64,
}

impl Default for StateTolerances {
    fn default() -> Self {
        Self { hermiticity: 1e-10, trace: 1e-10, positivity: 1e-9 }
    }
}

impl StateTolerances {
    /// Looser tolerances used for states produced by long time propagation.
    pub const TRAJECTORY: Self = Self { hermiticity: 1e-9, trace: 1e-9, positivity: 1e-8 };
}

/// A validated quantum state: Hermitian, unit trace, positive within tolerance.
///
/// The stored matrix is the Hermitian part of the input, so downstream
/// consumers can rely on exact (bitwise) Hermiticity.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    min_eigenvalue: f64,
}

impl DensityMatrix {
    /// Validate with the default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &StateTolerances::default())
    }

    /// Validate against explicit tolerances.
    pub fn with_tolerances(matrix: ComplexMatrix, tol: &StateTolerances) -> Result<Self> {
        if !matrix.is_square() || !matches!(matrix.rows(), 2 | 4 | 8) {
            return Err(Error::InvalidState(format!(
                "density matrix must be square of dimension 2, 4 or 8, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidState("density matrix has non-finite entries".into()));
        }
        let asymmetry = matrix.distance(&matrix.adjoint());
        if asymmetry > tol.hermiticity {
            return Err(Error::InvalidState(format!(
                "Hermiticity violation {asymmetry:.3e} exceeds {:.1e}",
                tol.hermiticity
            )));
        }
        let hermitian = matrix.hermitize();
        let trace = hermitian.trace().re;
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::InvalidState(format!(
                "trace {trace:.12} deviates from 1 beyond {:.1e}",
                tol.trace
            )));
        }
        let spectrum = eigh(&hermitian)?;
        let min_eigenvalue = spectrum.eigenvalues[0];
        if min_eigenvalue < -tol.positivity {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eigenvalue:.3e} below -{:.1e}",
                tol.positivity
            )));
        }
        Ok(Self { matrix: hermitian, min_eigenvalue })
    }

    /// Pure state ρ = |ψ⟩⟨ψ| from a (not necessarily normalized) ket.
    pub fn from_ket(ket: &[C64]) -> Result<Self> {
        let norm = crate::numerics::vector_norm(ket);
        if norm == 0.0 {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let dim = ket.len();
        let m = ComplexMatrix::from_fn(dim, dim, |i, j| ket[i] * ket[j].conj() / (norm * norm));
        Self::new(m)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Smallest eigenvalue found during validation.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// |tr ρ − 1| of the stored matrix.
    pub fn trace_error(&self) -> f64 {
        (self.matrix.trace().re - 1.0).abs()
    }
}

/// Pure product state |a⟩|b⟩|c⟩ of the three-qubit register.
pub fn product_state(a: Level, b: Level, c_level: Level) -> DensityMatrix {
    let mut ket = vec![C64::ZERO; 8];
    ket[basis_index(a, b, c_level)] = c(1.0);
    DensityMatrix::from_ket(&ket).expect("basis kets are valid states")
}

/// Trace out qubit C: (ρ_AB)[ij,kl] = Σ_c ρ[ijc, klc].
pub fn partial_trace_c(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace_c expects an 8x8 state, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let reduced = ComplexMatrix::from_fn(4, 4, |ab, ab2| {
        (0..2).map(|cc| m[(2 * ab + cc, 2 * ab2 + cc)]).sum()
    });
    DensityMatrix::new(reduced)
}

/// Partial transpose of a two-qubit operator with respect to qubit B.
pub fn partial_transpose_b(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "partial_transpose_b expects 4x4, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(4, 4, |row, col| {
        let (a, b) = (row / 2, row % 2);
        let (a2, b2) = (col / 2, col % 2);
        m[(2 * a + b2, 2 * a2 + b)]
    }))
}

/// Row-stacking vectorization of a square matrix.
pub fn vectorize(m: &ComplexMatrix) -> Vec<C64> {
    assert!(m.is_square(), "vectorize needs a square matrix");
    m.data().to_vec()
}

/// Inverse of [`vectorize`]: fails unless the length is a perfect square.
pub fn unvectorize(v: &[C64]) -> Result<ComplexMatrix> {
    let dim = (v.len() as f64).sqrt().round() as usize;
    if dim * dim != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "unvectorize needs a square length, got {}",
            v.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| v[i * dim + j]))
}

/// Trace distance ½‖ρ − σ‖₁ between two states of equal dimension.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "trace distance dimension mismatch");
    let diff = a.matrix() - b.matrix();
    let spectrum = eigh(&diff).expect("difference of Hermitian states is Hermitian");
    0.5 * spectrum.eigenvalues.iter().map(|x| x.abs()).sum::<f64>()
}
