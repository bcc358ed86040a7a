//! Steady-state entanglement of two decaying qubits coupled to a dissipative
//! two-level ancilla.
//!
//! Two qubits A and B with a σ_x σ_x coupling relax under local spontaneous
//! decay; a third qubit C with tunable frequency, coupling and decay rate is
//! attached to both. The crate builds the Lindblad generator of this model,
//! extracts its unique steady state from the 64×64 vectorized Liouvillian,
//! quantifies the A–B entanglement by the negativity of the partially
//! transposed reduced state, propagates the master equation in time, and
//! scans/optimizes the ancilla parameters for maximal steady-state
//! entanglement.
//!
//! Module map:
//! * [`numerics`] — dense complex matrix kernel (eigh, SVD, expm, kron);
//! * [`quantum`] — qubit algebra, embeddings, partial trace/transpose,
//!   vectorization;
//! * [`model`] — Hamiltonian, dissipator and Liouvillian construction;
//! * [`steady`] — nullspace extraction and validation of the steady state;
//! * [`entanglement`] — negativity and the closed-form two-qubit benchmark;
//! * [`spectral`] — Hamiltonian eigenstates, fidelities, truncated mixtures;
//! * [`dynamics`] — time propagation via the exponentiated generator;
//! * [`explore`] — parameter sweeps, scans, crossover search and constrained
//!   maximization.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod explore;
pub mod model;
pub mod numerics;
pub mod quantum;
pub mod spectral;
pub mod steady;

pub use error::{Error, Result};
pub use model::{build_hamiltonian, build_liouvillian, ModelParams, Superoperator};
pub use numerics::{ComplexMatrix, C64};
pub use quantum::{DensityMatrix, Level, Pauli, Site};
pub use steady::{steady_negativity, steady_state, SteadyStateResult};
