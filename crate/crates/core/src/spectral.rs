//! Eigenstates of the undamped Hamiltonian, fidelities against them, and
//! truncated eigenstate mixtures.
//!
//! Eigenstates are labeled by ascending energy, so |E_0⟩ is the ground state.
//! Labels inside a degenerate cluster are basis-dependent; adjacent
//! degeneracies are flagged and fidelities can additionally be reported as
//! sums over degenerate clusters.

use crate::entanglement::{negativity, NegativityValue};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, ModelParams};
use crate::numerics::{eigh, ComplexMatrix, C64};
use crate::quantum::{partial_trace_c, DensityMatrix};

/// Gap below which two adjacent energies are treated as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Eigenvalues and eigenvectors of the three-qubit Hamiltonian.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Energies in units of ω, non-decreasing.
    pub energies: Vec<f64>,
    /// Column n is the eigenvector |E_n⟩.
    states: ComplexMatrix,
    /// Flag k marks a gap below [`DEGENERACY_GAP`] between levels k and k+1.
    pub degeneracy_flags: Vec<bool>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Eigenvector |E_n⟩, copied out.
    pub fn state(&self, n: usize) -> Result<Vec<C64>> {
        self.check_index(n)?;
        Ok(self.states.column(n))
    }

    /// Matrix whose column n is |E_n⟩.
    pub fn states(&self) -> &ComplexMatrix {
        &self.states
    }

    /// Indices grouped into degenerate clusters, in ascending-energy order.
    pub fn degenerate_clusters(&self) -> Vec<Vec<usize>> {
        let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
        for (k, &flag) in self.degeneracy_flags.iter().enumerate() {
            if flag {
                clusters.last_mut().unwrap().push(k + 1);
            } else {
                clusters.push(vec![k + 1]);
            }
        }
        clusters
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n >= self.dim() {
            return Err(Error::IndexOutOfRange { index: n, len: self.dim() });
        }
        Ok(())
    }
}

/// Fidelities F_n = ⟨E_n|ρ|E_n⟩ against the eight eigenstates.
#[derive(Debug, Clone)]
pub struct FidelityVector {
    values: Vec<f64>,
}

impl FidelityVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Index of the dominant eigenstate; ties resolve to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Fidelity summed over each degenerate cluster of the spectrum; these
    /// sums are basis-independent even where individual F_n are not.
    pub fn cluster_sums(&self, spectrum: &Spectrum) -> Vec<(Vec<usize>, f64)> {
        spectrum
            .degenerate_clusters()
            .into_iter()
            .map(|cluster| {
                let sum = cluster.iter().map(|&n| self.values[n]).sum();
                (cluster, sum)
            })
            .collect()
    }
}

/// Diagonalize the Hamiltonian for the given parameters.
pub fn hamiltonian_spectrum(p: &ModelParams) -> Result<Spectrum> {
    p.validate()?;
    let h = build_hamiltonian(p);
    let decomposition = eigh(&h)?;
    let energies = decomposition.eigenvalues;
    let degeneracy_flags =
        energies.windows(2).map(|w| (w[1] - w[0]).abs() < DEGENERACY_GAP).collect();
    Ok(Spectrum { energies, states: decomposition.eigenvectors, degeneracy_flags })
}

/// Fidelities of a state against the spectrum's eigenstates.
pub fn fidelities(rho: &DensityMatrix, spectrum: &Spectrum) -> Result<FidelityVector> {
    if rho.dim() != spectrum.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs spectrum dimension {}",
            rho.dim(),
            spectrum.dim()
        )));
    }
    let m = rho.matrix();
    let mut values = Vec::with_capacity(spectrum.dim());
    for n in 0..spectrum.dim() {
        let e_n = spectrum.states.column(n);
        let applied = m.apply(&e_n);
        let overlap: C64 = e_n.iter().zip(&applied).map(|(a, b)| a.conj() * b).sum();
        if overlap.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "fidelity F_{n} has imaginary residue {:.3e}",
                overlap.im
            )));
        }
        values.push(overlap.re);
    }
    Ok(FidelityVector { values })
}

/// A renormalized mixture of selected eigenstates.
#[derive(Debug, Clone)]
pub struct TruncatedMixture {
    pub rho: DensityMatrix,
    /// Total fidelity weight of the selected eigenstates before renormalizing.
    pub kept_weight: f64,
    /// Fidelity weight of the discarded eigenstates.
    pub discarded_weight: f64,
}

/// ρ = Σ_{n ∈ indices} F_n |E_n⟩⟨E_n|, renormalized to unit trace.
///
/// Duplicate indices are ignored; the discarded weight is reported so the
/// quality of the truncation stays visible.
pub fn truncated_mixture(
    spectrum: &Spectrum,
    fidelity: &FidelityVector,
    indices: &[usize],
) -> Result<TruncatedMixture> {
    let dim = spectrum.dim();
    let mut selected = vec![false; dim];
    for &n in indices {
        if n >= dim {
            return Err(Error::IndexOutOfRange { index: n, len: dim });
        }
        selected[n] = true;
    }
    let kept_weight: f64 = (0..dim).filter(|&n| selected[n]).map(|n| fidelity.values()[n]).sum();
    if kept_weight <= 0.0 {
        return Err(Error::EmptySelection(kept_weight));
    }
    let total: f64 = fidelity.values().iter().sum();

    let mut m = ComplexMatrix::zeros(dim, dim);
    for n in (0..dim).filter(|&n| selected[n]) {
        let weight = fidelity.values()[n] / kept_weight;
        let e_n = spectrum.states.column(n);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += e_n[i] * e_n[j].conj() * weight;
            }
        }
    }
    Ok(TruncatedMixture {
        rho: DensityMatrix::new(m)?,
        kept_weight,
        discarded_weight: total - kept_weight,
    })
}

/// Negativity of tr_C |E_n⟩⟨E_n| — the A–B entanglement carried by one
/// eigenstate.
pub fn eigenstate_negativity(spectrum: &Spectrum, n: usize) -> Result<NegativityValue> {
    let ket = spectrum.state(n)?;
    let rho = DensityMatrix::from_ket(&ket)?;
    negativity(&partial_trace_c(&rho)?)
}
