//! Parameter exploration: 2-D sweeps over the ancilla frequency and coupling,
//! decay-rate scans, crossover localization and box-constrained maximization
//! of the steady-state negativity.
//!
//! Every grid point is an independent steady-state solve; failures are
//! recorded per point (as NaN in the table) instead of aborting a sweep.
//! Results are deterministic for fixed inputs regardless of how many worker
//! threads evaluate the grid.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::steady::steady_negativity;

/// The fixed system decay rate used for the constrained optimization.
pub const OPTIMIZATION_GAMMA: f64 = 1e-3;

/// Evenly spaced grid with both endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Logarithmically spaced grid with both endpoints included.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "logspace needs at least two points");
    assert!(lo > 0.0 && hi > lo, "logspace needs 0 < lo < hi");
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|k| lo * ratio.powi(k as i32)).collect()
}

/// One failed grid evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub row: usize,
    pub col: usize,
    pub omega_c: f64,
    pub j_c: f64,
    pub message: String,
}

/// Steady-state negativity tabulated over an (ω_C, J_C) grid.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub omega_c_axis: Vec<f64>,
    pub j_c_axis: Vec<f64>,
    /// Template providing J, γ, γ_C for every grid point.
    pub fixed: ModelParams,
    /// `values[i][j]` is the negativity at `(omega_c_axis[i], j_c_axis[j])`;
    /// failed points hold NaN.
    pub values: Vec<Vec<f64>>,
    pub failures: Vec<SweepFailure>,
}

impl SweepGrid {
    /// Largest finite value with its grid coordinates.
    pub fn max_point(&self) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v.is_finite() && best.is_none_or(|(_, _, b)| v > b) {
                    best = Some((self.omega_c_axis[i], self.j_c_axis[j], v));
                }
            }
        }
        best
    }

    /// CSV with header `omega_c,j_c,negativity`, row-major over the grid.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "omega_c,j_c,negativity")?;
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                writeln!(w, "{},{},{}", self.omega_c_axis[i], self.j_c_axis[j], v)?;
            }
        }
        Ok(())
    }
}

/// Steady-state negativity over a grid of ancilla frequency and coupling.
pub fn sweep_2d(
    template: &ModelParams,
    omega_c_range: (f64, f64),
    j_c_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<SweepGrid> {
    template.validate()?;
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidParams(format!(
            "sweep resolution must be at least 2 per axis, got {resolution:?}"
        )));
    }
    let omega_c_axis = linspace(omega_c_range.0, omega_c_range.1, resolution.0);
    let j_c_axis = linspace(j_c_range.0, j_c_range.1, resolution.1);

    let cells: Vec<(usize, usize)> =
        (0..resolution.0).flat_map(|i| (0..resolution.1).map(move |j| (i, j))).collect();
    let evaluated: Vec<std::result::Result<f64, String>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let mut p = *template;
            p.omega_c = omega_c_axis[i];
            p.j_c = j_c_axis[j];
            steady_negativity(&p).map_err(|e| e.to_string())
        })
        .collect();

    let mut values = vec![vec![f64::NAN; resolution.1]; resolution.0];
    let mut failures = Vec::new();
    for (&(i, j), outcome) in cells.iter().zip(evaluated) {
        match outcome {
            Ok(v) => values[i][j] = v,
            Err(message) => {
                log::warn!(
                    "sweep point (omega_c = {}, j_c = {}) failed: {message}",
                    omega_c_axis[i],
                    j_c_axis[j]
                );
                failures.push(SweepFailure {
                    row: i,
                    col: j,
                    omega_c: omega_c_axis[i],
                    j_c: j_c_axis[j],
                    message,
                });
            }
        }
    }
    Ok(SweepGrid { omega_c_axis, j_c_axis, fixed: *template, values, failures })
}

/// One failed scan evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ScanFailure {
    pub index: usize,
    pub gamma_c: f64,
    pub message: String,
}

/// Negativity along a γ_C scan.
#[derive(Debug, Clone)]
pub struct ScanResult {
    /// (γ_C, negativity) pairs in input order; failed points hold NaN.
    pub points: Vec<(f64, f64)>,
    pub failures: Vec<ScanFailure>,
}

impl ScanResult {
    /// Largest finite value as (γ_C, negativity).
    pub fn max_point(&self) -> Option<(f64, f64)> {
        self.points.iter().filter(|(_, v)| v.is_finite()).cloned().reduce(|a, b| {
            if b.1 > a.1 {
                b
            } else {
                a
            }
        })
    }

    /// CSV with header `gamma_c,negativity`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "gamma_c,negativity")?;
        for (g, v) in &self.points {
            writeln!(w, "{g},{v}")?;
        }
        Ok(())
    }
}

/// Steady-state negativity at each requested ancilla decay rate.
pub fn scan_gamma_c(template: &ModelParams, gamma_c_points: &[f64]) -> Result<ScanResult> {
    template.validate()?;
    if gamma_c_points.iter().any(|&g| g.is_nan() || g <= 0.0) {
        return Err(Error::InvalidParams("gamma_c scan points must be positive".into()));
    }
    let evaluated: Vec<std::result::Result<f64, String>> = gamma_c_points
        .par_iter()
        .map(|&g| {
            let mut p = *template;
            p.gamma_c = g;
            steady_negativity(&p).map_err(|e| e.to_string())
        })
        .collect();

    let mut points = Vec::with_capacity(gamma_c_points.len());
    let mut failures = Vec::new();
    for (index, (&g, outcome)) in gamma_c_points.iter().zip(evaluated).enumerate() {
        match outcome {
            Ok(v) => points.push((g, v)),
            Err(message) => {
                log::warn!("scan point gamma_c = {g} failed: {message}");
                points.push((g, f64::NAN));
                failures.push(ScanFailure { index, gamma_c: g, message });
            }
        }
    }
    Ok(ScanResult { points, failures })
}

/// Decay rate at which the scan curve crosses `reference_n`, located by
/// bisection to an interval of 10⁻³.
///
/// The bracket must satisfy N(γ_lo) > reference_n > N(γ_hi).
pub fn find_crossover(
    template: &ModelParams,
    bracket: (f64, f64),
    reference_n: f64,
) -> Result<f64> {
    template.validate()?;
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::BracketInvalid(format!("need 0 < lo < hi, got ({lo}, {hi})")));
    }
    let eval = |g: f64| -> Result<f64> {
        let mut p = *template;
        p.gamma_c = g;
        steady_negativity(&p)
    };
    let n_lo = eval(lo)?;
    let n_hi = eval(hi)?;
    if !(n_lo > reference_n && reference_n > n_hi) {
        return Err(Error::BracketInvalid(format!(
            "no crossing of {reference_n} in bracket: N({lo}) = {n_lo}, N({hi}) = {n_hi}"
        )));
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? > reference_n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Box constraints for the free parameters of the optimization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub j: (f64, f64),
    pub j_c: (f64, f64),
    pub omega_c: (f64, f64),
    pub gamma_c: (f64, f64),
}

impl Default for Bounds {
    /// The constraint box −1 ≤ J ≤ 0, 0 ≤ J_C ≤ 1, −1 ≤ ω_C ≤ 1 and
    /// 10⁻⁶ ≤ γ_C ≤ 1; the lower γ_C bound encodes the open interval
    /// 0 < γ_C, below which the steady state need not be unique.
    fn default() -> Self {
        Self { j: (-1.0, 0.0), j_c: (0.0, 1.0), omega_c: (-1.0, 1.0), gamma_c: (1e-6, 1.0) }
    }
}

impl Bounds {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in
            [("j", self.j), ("j_c", self.j_c), ("omega_c", self.omega_c), ("gamma_c", self.gamma_c)]
        {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidParams(format!("invalid {name} bounds ({lo}, {hi})")));
            }
        }
        if self.gamma_c.0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma_c lower bound must be positive, got {}",
                self.gamma_c.0
            )));
        }
        Ok(())
    }

    fn as_array(&self) -> [(f64, f64); 4] {
        [self.j, self.j_c, self.omega_c, self.gamma_c]
    }

    fn clip(&self, x: &mut [f64; 4]) {
        for (value, (lo, hi)) in x.iter_mut().zip(self.as_array()) {
            *value = value.clamp(lo, hi);
        }
    }

    fn contains(&self, x: &[f64; 4]) -> bool {
        x.iter().zip(self.as_array()).all(|(&v, (lo, hi))| (lo..=hi).contains(&v))
    }
}

/// Outcome of one optimizer start.
#[derive(Debug, Clone, Serialize)]
pub struct StartRecord {
    pub seed_params: ModelParams,
    pub converged_params: ModelParams,
    pub value: f64,
    pub evaluations: usize,
}

/// Outcome of the multi-start maximization.
#[derive(Debug, Clone, Serialize)]
pub struct OptResult {
    pub best_params: ModelParams,
    pub best_n: f64,
    pub evaluations: usize,
    pub starts: usize,
    pub history: Vec<StartRecord>,
}

/// Maximize the steady-state negativity over the box, with γ fixed to
/// [`OPTIMIZATION_GAMMA`].
///
/// Multi-start Nelder–Mead on (J, J_C, ω_C, γ_C): candidate points are
/// clipped to the box and evaluated at the clipped location. Start points
/// come from a Halton set rotated by a seeded offset, so the whole run is
/// reproducible from `seed`.
pub fn maximize_entanglement(bounds: &Bounds, n_starts: usize, seed: u64) -> Result<OptResult> {
    maximize_entanglement_with(bounds, n_starts, seed, OPTIMIZATION_GAMMA)
}

/// As [`maximize_entanglement`] with an explicit fixed system decay rate.
pub fn maximize_entanglement_with(
    bounds: &Bounds,
    n_starts: usize,
    seed: u64,
    gamma: f64,
) -> Result<OptResult> {
    bounds.validate()?;
    if n_starts == 0 {
        return Err(Error::InvalidParams("need at least one optimizer start".into()));
    }
    let objective = |x: &[f64; 4]| -> f64 {
        match params_from(x, gamma).and_then(|p| steady_negativity(&p)) {
            Ok(n) => n,
            Err(e) => {
                log::debug!("optimizer penalty at {x:?}: {e}");
                f64::NEG_INFINITY
            }
        }
    };

    let starts = halton_starts(bounds, n_starts, seed);
    let history: Vec<StartRecord> = starts
        .par_iter()
        .map(|start| {
            let run = nelder_mead_max(&objective, bounds, *start);
            StartRecord {
                seed_params: params_from(start, gamma).expect("start point is inside the box"),
                converged_params: params_from(&run.x, gamma)
                    .expect("converged point is inside the box"),
                value: run.value,
                evaluations: run.evaluations,
            }
        })
        .collect();

    let best =
        history.iter().max_by(|a, b| a.value.total_cmp(&b.value)).expect("at least one start");
    Ok(OptResult {
        best_params: best.converged_params,
        best_n: best.value,
        evaluations: history.iter().map(|r| r.evaluations).sum(),
        starts: n_starts,
        history,
    })
}

fn params_from(x: &[f64; 4], gamma: f64) -> Result<ModelParams> {
    ModelParams::new(x[2], x[0], x[1], gamma, x[3])
}

/// Halton points (bases 2, 3, 5, 7) with a seeded rotation, mapped into the box.
fn halton_starts(bounds: &Bounds, n: usize, seed: u64) -> Vec<[f64; 4]> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let bases = [2u32, 3, 5, 7];
    let box_ = bounds.as_array();
    (0..n)
        .map(|k| {
            let mut x = [0.0; 4];
            for d in 0..4 {
                let u = (halton(k as u32 + 1, bases[d]) + shift[d]).fract();
                let (lo, hi) = box_[d];
                x[d] = lo + u * (hi - lo);
            }
            x
        })
        .collect()
}

fn halton(mut index: u32, base: u32) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

struct NelderMeadRun {
    x: [f64; 4],
    value: f64,
    evaluations: usize,
}

/// Standard Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½)
/// maximizing `f` with every trial point clipped into the box.
fn nelder_mead_max(
    f: &dyn Fn(&[f64; 4]) -> f64,
    bounds: &Bounds,
    start: [f64; 4],
) -> NelderMeadRun {
    const MAX_ITER: usize = 400;
    const X_TOL: f64 = 1e-6;
    const F_TOL: f64 = 1e-10;
    let dim = 4;
    let box_ = bounds.as_array();

    let mut evaluations = 0usize;
    let mut eval = |x: &mut [f64; 4]| {
        bounds.clip(x);
        evaluations += 1;
        f(x)
    };

    // initial simplex: the start plus one step of 15% of the box per axis
    let mut simplex: Vec<([f64; 4], f64)> = Vec::with_capacity(dim + 1);
    let mut x0 = start;
    let f0 = eval(&mut x0);
    simplex.push((x0, f0));
    for d in 0..dim {
        let (lo, hi) = box_[d];
        let span = hi - lo;
        let mut x = x0;
        if span == 0.0 {
            // collapsed axis: the simplex stays degenerate along it
            simplex.push((x, f0));
            continue;
        }
        let step = 0.15 * span;
        x[d] = if x[d] + step <= hi { x[d] + step } else { x[d] - step };
        let v = eval(&mut x);
        simplex.push((x, v));
    }

    for _ in 0..MAX_ITER {
        // best first (maximization)
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let spread = simplex
            .iter()
            .skip(1)
            .map(|(x, _)| {
                x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        let f_spread = simplex[0].1 - simplex[dim].1;
        if spread < X_TOL && (f_spread.abs() < F_TOL || !f_spread.is_finite()) {
            break;
        }

        let worst = simplex[dim];
        let mut centroid = [0.0; 4];
        for (x, _) in simplex.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += x[d] / dim as f64;
            }
        }

        let shifted = |t: f64| {
            let mut x = [0.0; 4];
            for d in 0..dim {
                x[d] = centroid[d] + t * (centroid[d] - worst.0[d]);
            }
            x
        };

        let mut reflected = shifted(1.0);
        let f_reflected = eval(&mut reflected);
        if f_reflected > simplex[0].1 {
            let mut expanded = shifted(2.0);
            let f_expanded = eval(&mut expanded);
            simplex[dim] = if f_expanded > f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected > simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
            continue;
        }
        let mut contracted = if f_reflected > worst.1 { shifted(0.5) } else { shifted(-0.5) };
        let f_contracted = eval(&mut contracted);
        if f_contracted > f_reflected.max(worst.1) {
            simplex[dim] = (contracted, f_contracted);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            let mut x = [0.0; 4];
            for d in 0..dim {
                x[d] = best[d] + 0.5 * (vertex.0[d] - best[d]);
            }
            let v = eval(&mut x);
            *vertex = (x, v);
        }
    }

    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    debug_assert!(bounds.contains(&simplex[0].0));
    NelderMeadRun { x: simplex[0].0, value: simplex[0].1, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3_template() -> ModelParams {
        ModelParams::new(0.55, -0.62, 0.01, 1e-3, 1e-3).unwrap()
    }

    #[test]
    fn linspace_and_logspace_endpoints() {
        let xs = linspace(-1.0, 1.0, 5);
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let ys = logspace(1e-3, 1.0, 4);
        assert!((ys[0] - 1e-3).abs() < 1e-18);
        assert!((ys[3] - 1.0).abs() < 1e-12);
        assert!((ys[1] / ys[0] - ys[2] / ys[1]).abs() < 1e-12);
    }

    #[test]
    fn small_sweep_is_deterministic_and_bounded() {
        let grid = sweep_2d(&fig3_template(), (0.4, 0.7), (0.005, 0.02), (4, 3)).unwrap();
        assert_eq!(grid.values.len(), 4);
        assert_eq!(grid.values[0].len(), 3);
        assert!(grid.failures.is_empty());
        for row in &grid.values {
            for &v in row {
                assert!((0.0..=0.5).contains(&v), "negativity {v} out of range");
            }
        }
        let again = sweep_2d(&fig3_template(), (0.4, 0.7), (0.005, 0.02), (4, 3)).unwrap();
        assert_eq!(grid.values, again.values);

        let mut csv_a = Vec::new();
        let mut csv_b = Vec::new();
        grid.write_csv(&mut csv_a).unwrap();
        again.write_csv(&mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);
    }

    #[test]
    fn sweep_rejects_degenerate_resolution() {
        assert!(sweep_2d(&fig3_template(), (0.0, 1.0), (0.0, 1.0), (1, 5)).is_err());
    }

    #[test]
    fn failed_points_become_nan_without_aborting() {
        // gamma = 0 makes every steady solve fail its uniqueness precondition
        let mut template = fig3_template();
        template.gamma = 0.0;
        let grid = sweep_2d(&template, (0.0, 1.0), (0.0, 0.1), (2, 2)).unwrap();
        assert_eq!(grid.failures.len(), 4);
        assert!(grid.values.iter().flatten().all(|v| v.is_nan()));
        assert!(grid.max_point().is_none());

        let mut csv = Vec::new();
        grid.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 5);
    }

    #[test]
    fn scan_reports_points_in_order() {
        let scan = scan_gamma_c(&fig3_template(), &[0.01, 0.04, 0.1]).unwrap();
        assert_eq!(scan.points.len(), 3);
        assert!(scan.failures.is_empty());
        assert_eq!(scan.points[1].0, 0.04);
        assert!(scan_gamma_c(&fig3_template(), &[0.0]).is_err());
    }

    #[test]
    fn crossover_contract() {
        // bracket that does not enclose the reference value
        let err = find_crossover(&fig3_template(), (0.3, 0.4), 0.9);
        assert!(matches!(err, Err(Error::BracketInvalid(_))));
    }

    #[test]
    fn halton_starts_are_reproducible_and_inside() {
        let bounds = Bounds::default();
        let a = halton_starts(&bounds, 8, 42);
        let b = halton_starts(&bounds, 8, 42);
        assert_eq!(a, b);
        let c = halton_starts(&bounds, 8, 43);
        assert_ne!(a, c);
        for x in &a {
            assert!(bounds.contains(x));
        }
    }

    #[test]
    fn nelder_mead_finds_a_quadratic_maximum() {
        let bounds =
            Bounds { j: (-1.0, 0.0), j_c: (0.0, 1.0), omega_c: (-1.0, 1.0), gamma_c: (1e-6, 1.0) };
        let target = [-0.4, 0.3, 0.2, 0.5];
        let f = |x: &[f64; 4]| -> f64 {
            -x.iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        };
        let run = nelder_mead_max(&f, &bounds, [-0.9, 0.9, -0.9, 0.9]);
        for (got, want) in run.x.iter().zip(&target) {
            assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        }
    }

    #[test]
    fn degenerate_bounds_return_the_single_point() {
        let bounds = Bounds {
            j: (-0.62, -0.62),
            j_c: (0.01, 0.01),
            omega_c: (0.55, 0.55),
            gamma_c: (1e-3, 1e-3),
        };
        let result = maximize_entanglement(&bounds, 2, 1).unwrap();
        assert_eq!(result.best_params.j, -0.62);
        assert_eq!(result.best_params.j_c, 0.01);
        assert_eq!(result.best_params.omega_c, 0.55);
        assert_eq!(result.best_params.gamma_c, 1e-3);
        let direct = steady_negativity(&result.best_params).unwrap();
        assert!((result.best_n - direct).abs() < 1e-9);
    }
}
