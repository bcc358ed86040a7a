//! Shared helpers for the integration suites: random states and two
//! independent oracles (a fixed-step RK4 integrator and a trace-replacement
//! linear solve) that cross-check the production expm/SVD paths.

// each test target compiles this module and uses a different subset
#![allow(dead_code)]

use dal_core::model::{build_liouvillian, ModelParams};
use dal_core::numerics::{c, ComplexMatrix, C64};
use dal_core::quantum::{unvectorize, vectorize, DensityMatrix};
use rand::prelude::*;

pub fn random_density(dim: usize, rng: &mut StdRng) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    DensityMatrix::new(w.scale(c(1.0 / tr))).expect("Wishart construction is a valid state")
}

fn axpy(y: &[C64], a: f64, x: &[C64]) -> Vec<C64> {
    y.iter().zip(x).map(|(yi, xi)| yi + xi * c(a)).collect()
}

/// Classical fixed-step RK4 on d vec(ρ)/dt = M vec(ρ).
pub fn rk4_propagate(m: &ComplexMatrix, v0: &[C64], t_final: f64, h: f64) -> Vec<C64> {
    let steps = (t_final / h).round() as usize;
    assert!((steps as f64 * h - t_final).abs() < 1e-9, "t_final must be a multiple of h");
    let mut v = v0.to_vec();
    for _ in 0..steps {
        let k1 = m.apply(&v);
        let k2 = m.apply(&axpy(&v, h / 2.0, &k1));
        let k3 = m.apply(&axpy(&v, h / 2.0, &k2));
        let k4 = m.apply(&axpy(&v, h, &k3));
        for i in 0..v.len() {
            v[i] += c(h / 6.0) * (k1[i] + c(2.0) * k2[i] + c(2.0) * k3[i] + k4[i]);
        }
    }
    v
}

/// Steady state by the trace-replacement linear solve: one redundant row of
/// the Liouvillian (the rows at diagonal vec positions sum to zero) is
/// replaced by the trace functional and the system solved for trace one.
/// Entirely independent of the SVD route.
pub fn trace_replacement_steady(p: &ModelParams) -> ComplexMatrix {
    let superop = build_liouvillian(p).expect("valid parameters");
    let mut m = superop.matrix().clone();
    let dim = 8usize;
    let identity_vec = vectorize(&ComplexMatrix::identity(dim));
    for j in 0..dim * dim {
        m[(0, j)] = identity_vec[j].conj();
    }
    let mut rhs = ComplexMatrix::zeros(dim * dim, 1);
    rhs[(0, 0)] = c(1.0);
    let x = m.solve(&rhs).expect("trace-replaced Liouvillian is nonsingular");
    let v: Vec<C64> = (0..dim * dim).map(|i| x[(i, 0)]).collect();
    unvectorize(&v).expect("square length").hermitize()
}
