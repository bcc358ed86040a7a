//! Full singular value decomposition and smallest-singular-vector extraction.
//!
//! The Liouvillian nullspace is found from the full SVD of the 64×64 matrix:
//! the right singular vector of the smallest singular value is the steady
//! state, and the second-smallest singular value certifies uniqueness. The
//! factorization itself is delegated to nalgebra's Golub–Kahan implementation;
//! this module owns the ordering, phase and residual conventions.

use nalgebra::DMatrix;

use super::{fix_phase, vector_norm, ComplexMatrix, C64};
use crate::error::{Error, Result};

const MAX_SVD_ITERATIONS: usize = 10_000;

/// Singular values (ascending) with the matching right singular vectors.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Singular values sorted non-decreasing.
    pub singular_values: Vec<f64>,
    /// Column `k` is the right singular vector for `singular_values[k]`.
    pub right_vectors: ComplexMatrix,
}

/// Full SVD of a square matrix, keeping singular values and right vectors.
pub fn svd_right(m: &ComplexMatrix) -> Result<SvdResult> {
    assert!(m.is_square(), "svd_right needs a square matrix");
    if !m.is_finite() {
        return Err(Error::ConvergenceFailure("non-finite entries in SVD input".into()));
    }
    let n = m.rows();
    let na = DMatrix::<C64>::from_fn(n, n, |i, j| m[(i, j)]);
    let svd = na
        .try_svd(false, true, f64::EPSILON, MAX_SVD_ITERATIONS)
        .ok_or_else(|| Error::ConvergenceFailure("SVD iteration cap exceeded".into()))?;
    let v_t = svd.v_t.expect("right singular vectors were requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));

    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let mut right_vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        // row `src` of V^H is the conjugated right singular vector
        let mut col: Vec<C64> = (0..n).map(|i| v_t[(src, i)].conj()).collect();
        fix_phase(&mut col);
        for i in 0..n {
            right_vectors[(i, dst)] = col[i];
        }
    }
    Ok(SvdResult { singular_values, right_vectors })
}

/// Unit right singular vector of the smallest singular value.
///
/// Returns `(v, residual, gap)` where `residual = ‖m·v‖₂` is recomputed on
/// the input matrix and `gap` is the second-smallest singular value.
pub fn min_singular_vector(m: &ComplexMatrix) -> Result<(Vec<C64>, f64, f64)> {
    let svd = svd_right(m)?;
    let v = svd.right_vectors.column(0);
    let residual = vector_norm(&m.apply(&v));
    let gap = if svd.singular_values.len() > 1 { svd.singular_values[1] } else { 0.0 };
    Ok((v, residual, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;
    use rand::prelude::*;

    #[test]
    fn diagonal_with_null_direction() {
        let m = ComplexMatrix::from_diagonal(&[c(0.0), c(1.0), c(1.0), c(1.0)]);
        let (v, residual, gap) = min_singular_vector(&m).unwrap();
        assert!((v[0].re - 1.0).abs() < 1e-14 && v[0].im.abs() < 1e-14);
        assert!(vector_norm(&v[1..]) < 1e-14);
        assert!(residual < 1e-14);
        assert!((gap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_degenerate() {
        let m = ComplexMatrix::zeros(3, 3);
        let (v, residual, gap) = min_singular_vector(&m).unwrap();
        assert!((vector_norm(&v) - 1.0).abs() < 1e-14);
        assert_eq!(residual, 0.0);
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn random_matrices_satisfy_contract() {
        let mut rng = StdRng::seed_from_u64(5);
        for &n in &[4usize, 8, 64] {
            let m = ComplexMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let (v, residual, gap) = min_singular_vector(&m).unwrap();
            // unit norm and residual consistency
            assert!((vector_norm(&v) - 1.0).abs() < 1e-12);
            assert!((vector_norm(&m.apply(&v)) - residual).abs() < 1e-12);
            // no singular value below the reported minimum: check against
            // the full factorization
            let svd = svd_right(&m).unwrap();
            assert!(residual <= svd.singular_values[0] * (1.0 + 1e-8) + 1e-12);
            assert!(gap >= svd.singular_values[0]);
        }
    }

    #[test]
    fn singular_values_match_known_construction() {
        // m = U Σ V^H with U, V from Jacobi eigenvectors of random Hermitian
        let mut rng = StdRng::seed_from_u64(17);
        let n = 8;
        let herm = |rng: &mut StdRng| {
            ComplexMatrix::from_fn(n, n, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })
            .hermitize()
        };
        let u = crate::numerics::eigh(&herm(&mut rng)).unwrap().eigenvectors;
        let v = crate::numerics::eigh(&herm(&mut rng)).unwrap().eigenvectors;
        let sigma: Vec<f64> = (0..n).map(|k| 0.01 * (k * k) as f64).collect();
        let s = ComplexMatrix::from_diagonal(&sigma.iter().map(|&x| c(x)).collect::<Vec<_>>());
        let m = u.matmul(&s).matmul(&v.adjoint());
        let svd = svd_right(&m).unwrap();
        for (got, want) in svd.singular_values.iter().zip(&sigma) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        let (vec_min, residual, gap) = min_singular_vector(&m).unwrap();
        assert!(residual < 1e-12);
        assert!((gap - sigma[1]).abs() < 1e-12);
        // smallest right singular vector should match V's first column up to phase
        let overlap: C64 = v.column(0).iter().zip(&vec_min).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }
}
