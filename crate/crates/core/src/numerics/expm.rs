//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Order [13/13] with the standard 1-norm thresholds for the lower orders;
//! the argument is halved until its norm is below θ₁₃ and the result squared
//! back up. Inputs that would need more than 60 halvings, or whose
//! exponential is not representable, are rejected instead of returning junk.

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.53939833006323e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

const MAX_SQUARINGS: i32 = 60;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential of a square complex matrix.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    assert!(m.is_square(), "expm needs a square matrix");
    if !m.is_finite() {
        return Err(Error::Overflow("non-finite entries in expm input".into()));
    }
    let norm = m.one_norm();

    let result = if norm <= THETA_3 {
        pade(m, &B3)?
    } else if norm <= THETA_5 {
        pade(m, &B5)?
    } else if norm <= THETA_7 {
        pade(m, &B7)?
    } else if norm <= THETA_9 {
        pade(m, &B9)?
    } else {
        let mut squarings = 0i32;
        if norm > THETA_13 {
            squarings = (norm / THETA_13).log2().ceil() as i32;
            if squarings > MAX_SQUARINGS {
                return Err(Error::Overflow(format!(
                    "1-norm {norm:.3e} needs {squarings} halvings (cap {MAX_SQUARINGS})"
                )));
            }
        }
        let scaled = m.scale(C64::new(0.5f64.powi(squarings), 0.0));
        let mut f = pade_13(&scaled)?;
        for _ in 0..squarings {
            f = f.matmul(&f);
        }
        f
    };

    if !result.is_finite() {
        return Err(Error::Overflow("matrix exponential is not representable in f64".into()));
    }
    Ok(result)
}

/// Diagonal Padé approximant for orders 3–9: sums over powers A⁰..A^(m-1).
fn pade(a: &ComplexMatrix, b: &[f64]) -> Result<ComplexMatrix> {
    let n = a.rows();
    let a2 = a.matmul(a);
    // odd and even power sums, built with A² steps
    let mut u_inner = ComplexMatrix::identity(n).scale(C64::new(b[1], 0.0));
    let mut v = ComplexMatrix::identity(n).scale(C64::new(b[0], 0.0));
    let mut power = ComplexMatrix::identity(n);
    for k in (2..b.len()).step_by(2) {
        power = power.matmul(&a2);
        v = &v + &power.scale(C64::new(b[k], 0.0));
        if k + 1 < b.len() {
            u_inner = &u_inner + &power.scale(C64::new(b[k + 1], 0.0));
        }
    }
    let u = a.matmul(&u_inner);
    solve_pade(&u, &v)
}

/// Order-13 Padé approximant with the factored power layout.
fn pade_13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let b = &B13;
    let id = ComplexMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);

    let u_high = &(&a6.scale(C64::new(b[13], 0.0)) + &a4.scale(C64::new(b[11], 0.0)))
        + &a2.scale(C64::new(b[9], 0.0));
    let u_low = &(&(&a6.scale(C64::new(b[7], 0.0)) + &a4.scale(C64::new(b[5], 0.0)))
        + &a2.scale(C64::new(b[3], 0.0)))
        + &id.scale(C64::new(b[1], 0.0));
    let u = a.matmul(&(&a6.matmul(&u_high) + &u_low));

    let v_high = &(&a6.scale(C64::new(b[12], 0.0)) + &a4.scale(C64::new(b[10], 0.0)))
        + &a2.scale(C64::new(b[8], 0.0));
    let v = &(&(&a6.matmul(&v_high) + &a6.scale(C64::new(b[6], 0.0)))
        + &a4.scale(C64::new(b[4], 0.0)))
        + &(&a2.scale(C64::new(b[2], 0.0)) + &id.scale(C64::new(b[0], 0.0)));

    solve_pade(&u, &v)
}

/// Solve (V − U)·F = (V + U) for the Padé quotient F.
fn solve_pade(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    (v - u).solve(&(v + u))
}
