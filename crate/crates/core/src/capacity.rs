//! Logarithmic capacity of finite unions of closed arcs.
//!
//! The energy `int int log(2/|1 - conj(w) z|) dnu dnu` is minimized over
//! probability measures that are piecewise uniform on a family of cells. Each
//! proper arc is split at Chebyshev-Lobatto points (so cells cluster at the
//! endpoints, where the equilibrium density blows up); the full circle uses
//! uniform cells. Doubling the per-arc count refines every cell into two, so
//! the discrete minimum energy is nonincreasing under refinement.
//!
//! Cells store their arc's center and an offset from it, which keeps arcs of
//! length far below the spacing of representable angles separable.

use std::f64::consts::{LN_2, PI, TAU};
use std::io::Write;

use faer::prelude::*;
use faer::{Col, Mat, Parallelism, Side};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{log_chord, normalize_angle, reduce_angle, Arc, ArcSet};

/// Smallest cell count per arc.
const MIN_CELLS_PER_ARC: usize = 4;
/// Weights below `-CLAMP_TOL` reject the linear equilibrium solution.
const CLAMP_TOL: f64 = 1e-12;
const PG_TOL: f64 = 1e-10;
const PG_MAX_ITERS: usize = 100_000;
/// Relative capacity change between the two resolutions accepted as converged.
const CONVERGENCE_TOL: f64 = 0.01;

/// How off-diagonal entries of the energy matrix are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OffDiagonalRule {
    /// Exact average of the kernel over both cells.
    #[default]
    CellAverage,
    /// Kernel at the two cell midpoints.
    Midpoint,
}

/// A sub-arc carrying a uniform measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    anchor: f64,
    offset: f64,
    width: f64,
}

impl Cell {
    /// Midpoint angle in `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        normalize_angle(self.anchor + self.offset)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn arc(&self) -> Arc {
        Arc::new(self.angle(), self.width.min(TAU)).expect("cell widths are positive")
    }

    /// Signed angular separation of the midpoints, reduced to `[-pi, pi]`.
    fn separation(&self, other: &Cell) -> f64 {
        let d = reduce_angle(self.anchor - other.anchor) + (self.offset - other.offset);
        if d.abs() > PI {
            reduce_angle(d)
        } else {
            d
        }
    }
}

fn arc_cells(arc: &Arc, n: usize, out: &mut Vec<Cell>) {
    let anchor = arc.center();
    if arc.is_full() {
        let width = TAU / n as f64;
        out.extend((0..n).map(|j| Cell { anchor, offset: (j as f64 + 0.5) * width, width }));
        return;
    }
    // boundaries -L/2 cos(pi j / n), written with half-angle products
    let half = 0.5 * arc.length();
    let step = PI / (2.0 * n as f64);
    let (s, c) = step.sin_cos();
    out.extend((0..n).map(|j| {
        let mid = (2 * j + 1) as f64 * step;
        Cell { anchor, offset: -half * mid.cos() * c, width: 2.0 * half * mid.sin() * s }
    }));
}

/// Cells per arc: proportional to length share, at least four.
fn cell_counts(set: &ArcSet, resolution: f64) -> Vec<usize> {
    let total = set.total_length();
    set.arcs()
        .iter()
        .map(|a| ((resolution * a.length() / total).round() as usize).max(MIN_CELLS_PER_ARC))
        .collect()
}

fn layout(set: &ArcSet, counts: &[usize]) -> Vec<Cell> {
    let mut cells = Vec::with_capacity(counts.iter().sum());
    for (arc, &n) in set.arcs().iter().zip(counts) {
        arc_cells(arc, n, &mut cells);
    }
    cells
}

/// `H'' = ln|x|`.
fn h(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        0.5 * x * x * (x.abs().ln() - 1.5)
    }
}

/// `g(u) = ln(sin(u/2) / (u/2))`, so that `ln|2 sin(u/2)| = ln|u| + g(u)`.
fn g(u: f64) -> f64 {
    if u.abs() < 0.25 {
        let u2 = u * u;
        -u2 * (1.0 / 24.0 + u2 * (1.0 / 2880.0 + u2 * (1.0 / 181_440.0 + u2 / 9_676_800.0)))
    } else {
        let x = 0.5 * u;
        (x.sin() / x).ln()
    }
}

fn g2(u: f64) -> f64 {
    if u.abs() < 0.5 {
        let u2 = u * u;
        -(1.0 / 12.0 + u2 * (1.0 / 240.0 + u2 * (1.0 / 6048.0 + u2 / 172_800.0)))
    } else {
        let s = (0.5 * u).sin();
        -0.25 / (s * s) + 1.0 / (u * u)
    }
}

fn g4(u: f64) -> f64 {
    if u.abs() < 0.5 {
        let u2 = u * u;
        -(1.0 / 120.0 + u2 * (1.0 / 504.0 + u2 / 5760.0))
    } else {
        let s = (0.5 * u).sin();
        let csc2 = 1.0 / (s * s);
        let cot = (0.5 * u).cos() / s;
        -0.25 * csc2 * (cot * cot + 0.5 * csc2) + 6.0 / u.powi(4)
    }
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Moments `E s^2, E s^4, E s^6, E s^8` of the uniform law on `[-a, a]`.
fn uniform_moments(a: f64) -> [f64; 4] {
    let a2 = a * a;
    [a2 / 3.0, a2 * a2 / 5.0, a2 * a2 * a2 / 7.0, a2 * a2 * a2 * a2 / 9.0]
}

/// Average of `ln|2 sin(u/2)|` over `u = d + s - t`, `s ~ U[-a, a]`, `t ~ U[-b, b]`.
fn mean_log_chord(d: f64, a: f64, b: f64) -> f64 {
    let spread = a + b;
    if spread < 0.05 * d.abs() && spread < 0.05 {
        far_average(d, a, b)
    } else {
        near_average(d, a, b)
    }
}

/// Moment expansion; the truncation error is below `(spread / d)^10 / 10`.
fn far_average(d: f64, a: f64, b: f64) -> f64 {
    let [a2, a4, a6, a8] = uniform_moments(a);
    let [b2, b4, b6, b8] = uniform_moments(b);
    let v2 = a2 + b2;
    let v4 = a4 + 6.0 * a2 * b2 + b4;
    let v6 = a6 + 15.0 * (a4 * b2 + a2 * b4) + b6;
    let v8 = a8 + 28.0 * (a6 * b2 + a2 * b6) + 70.0 * a4 * b4 + b8;
    let r = 1.0 / (d * d);
    let log_part = d.abs().ln() - r * (v2 / 2.0 + r * (v4 / 4.0 + r * (v6 / 6.0 + r * v8 / 8.0)));
    log_part + g(d) + g2(d) * v2 / 2.0 + g4(d) * v4 / 24.0
}

/// Exact average of `ln|u|` plus a tensor Gauss-Legendre average of the smooth part.
fn near_average(d: f64, a: f64, b: f64) -> f64 {
    let log_part = (h(d + a + b) - h(d + a - b) - h(d - a + b) + h(d - a - b)) / (4.0 * a * b);
    let mut g_part = 0.0;
    for (xi, wi) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let mut row = 0.0;
        for (xj, wj) in GL_NODES.iter().zip(GL_WEIGHTS) {
            row += wj * g(d + a * xi - b * xj);
        }
        g_part += wi * row;
    }
    log_part + 0.25 * g_part
}

/// Symmetric energy matrix over a cell family.
#[derive(Debug, Clone)]
pub struct EnergyMatrix {
    cells: Vec<Cell>,
    values: Mat<f64>,
}

impl EnergyMatrix {
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// `x^T K x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let kx = self.apply(x);
        x.iter().zip(&kx).map(|(a, b)| a * b).sum()
    }

    /// `K x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n())
            .into_par_iter()
            .map(|i| (0..self.n()).map(|j| self.values[(i, j)] * x[j]).sum())
            .collect()
    }

    fn max_row_sum(&self) -> f64 {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.values[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Energy matrix of `set` with about `resolution` cells (at least four per arc).
pub fn energy_matrix(set: &ArcSet, resolution: usize) -> Result<EnergyMatrix> {
    energy_matrix_with(set, resolution, OffDiagonalRule::default())
}

pub fn energy_matrix_with(set: &ArcSet, resolution: usize, rule: OffDiagonalRule) -> Result<EnergyMatrix> {
    if set.is_empty() {
        return Err(Error::validation("capacity of the empty set"));
    }
    if resolution < MIN_CELLS_PER_ARC {
        return Err(Error::validation(format!("resolution {resolution} below the minimum 4")));
    }
    let counts = cell_counts(set, resolution as f64);
    Ok(assemble(layout(set, &counts), rule))
}

fn assemble(cells: Vec<Cell>, rule: OffDiagonalRule) -> EnergyMatrix {
    let lower: Vec<Vec<f64>> = (0..cells.len())
        .into_par_iter()
        .map(|i| {
            let p = &cells[i];
            (0..=i)
                .map(|j| {
                    let q = &cells[j];
                    if i == j {
                        LN_2 - mean_log_chord(0.0, 0.5 * p.width, 0.5 * p.width)
                    } else {
                        let d = p.separation(q);
                        match rule {
                            OffDiagonalRule::CellAverage => {
                                LN_2 - mean_log_chord(d, 0.5 * p.width, 0.5 * q.width)
                            }
                            OffDiagonalRule::Midpoint => LN_2 - log_chord(d).unwrap_or(f64::NEG_INFINITY),
                        }
                    }
                })
                .collect()
        })
        .collect();
    let n = cells.len();
    let values = Mat::from_fn(n, n, |i, j| if j <= i { lower[i][j] } else { lower[j][i] });
    EnergyMatrix { cells, values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    LinearSystem,
    ProjectedGradient,
}

/// Minimizer of `x^T K x` over the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyMinimum {
    pub weights: Vec<f64>,
    pub energy: f64,
    pub method: Method,
    pub iterations: usize,
    pub converged: bool,
}

/// Solves `K y = 1` and normalizes; falls back to projected gradient when the
/// solution leaves the simplex.
pub fn minimize_energy(k: &EnergyMatrix) -> EnergyMinimum {
    let n = k.n();
    // serial factorization keeps results independent of the thread count
    faer::set_global_parallelism(Parallelism::None);
    let ones = Col::<f64>::from_fn(n, |_| 1.0);
    let y = match k.values.cholesky(Side::Lower) {
        Ok(chol) => chol.solve(&ones),
        Err(_) => k.values.partial_piv_lu().solve(&ones),
    };
    let total: f64 = (0..n).map(|i| y[i]).sum();
    if total.is_finite() && total > 0.0 {
        let x: Vec<f64> = (0..n).map(|i| y[i] / total).collect();
        if x.iter().all(|&v| v >= -CLAMP_TOL) {
            let clamped: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
            let s: f64 = clamped.iter().sum();
            let weights: Vec<f64> = clamped.iter().map(|v| v / s).collect();
            let energy = k.quadratic_form(&weights);
            return EnergyMinimum { weights, energy, method: Method::LinearSystem, iterations: 0, converged: true };
        }
    }
    projected_gradient(k)
}

/// Euclidean projection onto the probability simplex (sorting method).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn projected_gradient(k: &EnergyMatrix) -> EnergyMinimum {
    let n = k.n();
    let lipschitz = 2.0 * k.max_row_sum();
    let mut x = vec![1.0 / n as f64; n];
    let mut kx = k.apply(&x);
    let mut energy: f64 = x.iter().zip(&kx).map(|(a, b)| a * b).sum();
    let mut best = (energy, x.clone());
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..PG_MAX_ITERS {
        iterations = it + 1;
        let eta = 1.0 / (lipschitz * (1.0 + it as f64 / 100.0).sqrt());
        let step: Vec<f64> = x.iter().zip(&kx).map(|(xi, gi)| xi - eta * 2.0 * gi).collect();
        x = project_simplex(&step);
        kx = k.apply(&x);
        let next: f64 = x.iter().zip(&kx).map(|(a, b)| a * b).sum();
        if next < best.0 {
            best = (next, x.clone());
        }
        let decrease = (energy - next).abs() / next.abs().max(f64::MIN_POSITIVE);
        energy = next;
        if decrease < PG_TOL {
            converged = true;
            break;
        }
    }
    EnergyMinimum { weights: best.1, energy: best.0, method: Method::ProjectedGradient, iterations, converged }
}

/// One cell of the discrete equilibrium measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedCell {
    pub arc: Arc,
    pub angle: f64,
    pub weight: f64,
}

/// Discrete equilibrium measure: nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumWeights {
    pub cells: Vec<WeightedCell>,
}

impl EquilibriumWeights {
    fn new(cells: &[Cell], weights: &[f64]) -> Self {
        let cells = cells
            .iter()
            .zip(weights)
            .map(|(c, &weight)| WeightedCell { arc: c.arc(), angle: c.angle(), weight })
            .collect();
        EquilibriumWeights { cells }
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().map(|c| c.weight).sum()
    }

    /// CSV with columns `angle,weight`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["angle", "weight"])?;
        for c in &self.cells {
            w.write_record([c.angle.to_string(), c.weight.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementStep {
    pub resolution: usize,
    pub capacity: f64,
}

/// Capacity estimate with the refinement evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityEstimate {
    pub capacity: f64,
    pub energy: f64,
    pub resolution: usize,
    pub converged: bool,
    pub history: Vec<RefinementStep>,
    #[serde(skip)]
    pub weights: EquilibriumWeights,
}

/// Capacity of `set`, solved at about `resolution / 2` cells and at the nested
/// refinement with twice as many; the finer value is reported.
pub fn capacity(set: &ArcSet, resolution: usize) -> Result<CapacityEstimate> {
    capacity_with(set, resolution, OffDiagonalRule::default())
}

pub fn capacity_with(set: &ArcSet, resolution: usize, rule: OffDiagonalRule) -> Result<CapacityEstimate> {
    if set.is_empty() {
        return Err(Error::validation("capacity of the empty set"));
    }
    if resolution < 2 * MIN_CELLS_PER_ARC {
        return Err(Error::validation(format!("resolution {resolution} below the minimum 8")));
    }
    let coarse_counts = cell_counts(set, 0.5 * resolution as f64);
    let fine_counts: Vec<usize> = coarse_counts.iter().map(|n| 2 * n).collect();
    let mut history = Vec::with_capacity(2);
    let mut last = None;
    for counts in [coarse_counts, fine_counts] {
        let k = assemble(layout(set, &counts), rule);
        let min = minimize_energy(&k);
        history.push(RefinementStep { resolution: k.n(), capacity: 1.0 / min.energy });
        last = Some((k, min));
    }
    let (k, min) = last.expect("two resolutions were solved");
    let (coarse, fine) = (history[0].capacity, history[1].capacity);
    let converged = min.converged && ((fine - coarse) / fine).abs() < CONVERGENCE_TOL;
    Ok(CapacityEstimate {
        capacity: fine,
        energy: min.energy,
        resolution: k.n(),
        converged,
        history,
        weights: EquilibriumWeights::new(k.cells(), &min.weights),
    })
}

/// `1 / sum_{n <= m} 2^{-n} lambda_n`, the truncated Cantor capacity surrogate.
pub fn cantor_surrogate(lambdas: &[f64], m: usize) -> Result<f64> {
    let logs: Vec<f64> = lambdas.iter().map(|&l| if l > 0.0 { l.ln() } else { f64::NEG_INFINITY }).collect();
    if lambdas.iter().any(|&l| !(l >= 0.0)) {
        return Err(Error::validation("lambda_n must be nonnegative"));
    }
    cantor_surrogate_log(&logs, m)
}

/// The surrogate from `nu_n = ln lambda_n`, for `lambda_n` beyond double range.
pub fn cantor_surrogate_log(log_lambdas: &[f64], m: usize) -> Result<f64> {
    if m >= log_lambdas.len() {
        return Err(Error::validation(format!(
            "surrogate depth {m} needs {} lambdas, got {}",
            m + 1,
            log_lambdas.len()
        )));
    }
    let sum: f64 = log_lambdas[..=m]
        .iter()
        .enumerate()
        .map(|(n, &nu)| (nu - n as f64 * LN_2).exp())
        .sum();
    Ok(if sum > 0.0 { 1.0 / sum } else { f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(c: f64, l: f64) -> Arc {
        Arc::new(c, l).unwrap()
    }

    #[test]
    fn full_circle_four_cell_midpoint_pattern() {
        let k = energy_matrix_with(&ArcSet::full_circle(), 4, OffDiagonalRule::Midpoint).unwrap();
        let near = LN_2 - log_chord(PI / 2.0).unwrap();
        let far = LN_2 - log_chord(PI).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = match (i as i32 - j as i32).rem_euclid(4) {
                    0 => continue,
                    2 => far,
                    _ => near,
                };
                assert!((k.get(i, j) - expected).abs() < 1e-14, "({i},{j})");
            }
        }
        assert!(far.abs() < 1e-15);
    }

    #[test]
    fn diagonal_small_cell() {
        let d = LN_2 - mean_log_chord(0.0, 0.005, 0.005);
        let leading = LN_2 + 1.5 - 0.01f64.ln();
        assert!((d - leading).abs() < 1e-5);
        assert!((d - 6.798).abs() < 1e-3);
    }

    #[test]
    fn diagonal_matches_brute_force() {
        // midpoint rule on a 10^4 x 10^4 grid over one cell, diagonal of the grid excluded
        let h = 0.3;
        let n = 10_000;
        let step = h / n as f64;
        // Toeplitz structure: offset k occurs 2 (n - k) times
        let sum: f64 = (1..n)
            .map(|k| -2.0 * (n - k) as f64 * log_chord(k as f64 * step).unwrap())
            .sum();
        // the self term of each sub-square contributes its own exact average, ln step - 3/2
        let brute = LN_2 + (sum + n as f64 * (1.5 - step.ln())) / (n * n) as f64;
        let exact = LN_2 - mean_log_chord(0.0, 0.5 * h, 0.5 * h);
        assert!((brute - exact).abs() < 1e-3, "{brute} vs {exact}");
    }

    #[test]
    fn near_and_far_averages_match_quadrature_oracle() {
        // 30-digit quadrature of ln|2 sin(u/2)| against the trapezoidal density of u = x - y
        let (a, b, d) = (0.001, 0.0015, 0.02);
        let oracle = -3.913_398_146_064_605_2;
        assert!((near_average(d, a, b) - oracle).abs() < 2e-13, "{}", near_average(d, a, b));
        // spread / d = 1/8 is outside the far regime; the truncation bound (1/8)^10 / 10 still holds
        assert!((far_average(d, a, b) - oracle).abs() < 1e-10, "{}", far_average(d, a, b));
        for (d, a, b, oracle) in [
            (0.1, 0.001, 0.0015, -2.303_056_012_999_346_180_3),
            (2.5, 0.03, 0.02, 0.640_724_342_531_112_833_4),
            (0.02, 0.01, 0.005, -3.971_702_088_489_606_355_6),
            (0.3, 0.2, 0.15, -1.397_327_258_771_705_069_2),
        ] {
            assert!((mean_log_chord(d, a, b) - oracle).abs() < 2e-13, "{d}: {}", mean_log_chord(d, a, b));
        }
    }

    #[test]
    fn antipodal_point_cells_nearly_zero() {
        let set = ArcSet::new(vec![arc(0.0, 1e-6), arc(PI, 1e-6)]).unwrap();
        let k = energy_matrix(&set, 8).unwrap();
        assert!(k.get(0, 4).abs() < 1e-12);
    }

    #[test]
    fn matrix_is_symmetric() {
        let set = ArcSet::new(vec![arc(0.2, 0.5), arc(2.0, 0.1), arc(4.0, 1.0)]).unwrap();
        let k = energy_matrix(&set, 64).unwrap();
        for i in 0..k.n() {
            for j in 0..k.n() {
                assert_eq!(k.get(i, j), k.get(j, i));
            }
        }
    }

    #[test]
    fn full_circle_capacity() {
        let est = capacity(&ArcSet::full_circle(), 512).unwrap();
        assert!((est.capacity * LN_2 - 1.0).abs() < 1e-3, "{}", est.capacity);
        assert!(est.converged);
        assert!((est.weights.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn arc_capacity_matches_classical_value() {
        let est = capacity(&ArcSet::single(arc(1.0, 0.01)), 512).unwrap();
        let exact = 1.0 / (2.0 / (0.0025f64).sin()).ln();
        assert!((est.capacity / exact - 1.0).abs() < 0.02, "{} vs {exact}", est.capacity);
    }

    #[test]
    fn refinement_is_monotone() {
        let set = ArcSet::new(vec![arc(0.0, 0.3), arc(1.0, 0.05)]).unwrap();
        let est = capacity(&set, 128).unwrap();
        assert!(est.history[1].capacity >= est.history[0].capacity - 1e-9);
    }

    #[test]
    fn equilibrium_potential_is_nearly_constant() {
        let set = ArcSet::new(vec![arc(0.0, 0.8), arc(2.0, 0.1), arc(4.0, 1.5)]).unwrap();
        let k = energy_matrix(&set, 256).unwrap();
        let min = minimize_energy(&k);
        let pot = k.apply(&min.weights);
        let mean: f64 = pot.iter().zip(&min.weights).map(|(p, x)| p * x).sum();
        for (p, &x) in pot.iter().zip(&min.weights) {
            if x >= 1e-6 {
                assert!((p - mean).abs() <= 0.05 * mean, "{p} vs {mean}");
            }
        }
        assert!((mean - min.energy).abs() < 1e-9 * min.energy);
    }

    #[test]
    fn nested_sets_have_ordered_capacities() {
        let inner = vec![arc(0.0, 0.2), arc(3.0, 0.01)];
        let outer = vec![arc(0.0, 0.5), arc(3.0, 0.01), arc(5.0, 0.3)];
        let a = capacity(&ArcSet::new(inner.clone()).unwrap(), 256).unwrap().capacity;
        let b = capacity(&ArcSet::new(outer).unwrap(), 256).unwrap().capacity;
        let c = capacity(&ArcSet::new(inner[..1].to_vec()).unwrap(), 256).unwrap().capacity;
        assert!(c <= a + 1e-6 && a <= b + 1e-6, "{c} {a} {b}");
    }

    #[test]
    fn tiny_arcs_resolve() {
        let l = (-63.0f64).exp();
        let est = capacity(&ArcSet::single(arc(0.4, l)), 64).unwrap();
        let exact = 1.0 / (2.0 / (l / 4.0).sin()).ln();
        assert!((est.capacity / exact - 1.0).abs() < 0.01, "{} vs {exact}", est.capacity);
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
        let p = project_simplex(&[2.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn projected_gradient_agrees_with_linear_solve() {
        let set = ArcSet::new(vec![arc(0.0, 0.4), arc(2.5, 0.2)]).unwrap();
        let k = energy_matrix(&set, 16).unwrap();
        let direct = minimize_energy(&k);
        let pg = projected_gradient(&k);
        assert!((pg.energy - direct.energy).abs() < 1e-4 * direct.energy);
        assert!(pg.energy >= direct.energy - 1e-12);
    }

    #[test]
    fn surrogate_examples() {
        let lambdas: Vec<f64> = (0..12).map(|n| 2f64.powi(n) - 1.0).collect();
        assert!((cantor_surrogate(&lambdas, 4).unwrap() - 1.0 / 3.0625).abs() < 1e-15);
        assert!((cantor_surrogate(&lambdas, 3).unwrap() - 1.0 / 2.125).abs() < 1e-15);
        let constant = vec![3.0; 60];
        assert!((cantor_surrogate(&constant, 59).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(cantor_surrogate(&[0.0, 0.0], 1).unwrap(), f64::INFINITY);
        assert!(cantor_surrogate(&lambdas, 12).is_err());
    }
}
