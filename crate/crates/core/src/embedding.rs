//! Potentials, quadratic-form bounds and box suprema for atomic measures.
//!
//! Suprema over all arcs are replaced by the dyadic family: lengths
//! `2 pi 2^{-j}`, with arcs starting at `k L` and at `(k + 1/2) L`. Every arc
//! lies in a family arc at most four times longer.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::capacity;
use crate::error::{Error, Result};
use crate::gauges::Gauge;
use crate::geometry::{box_contains, log_kernel_interior, repr_kernel, Arc, ArcSet, DiskPoint, KernelPoint};
use crate::measures::AtomicMeasure;

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 10_000;
/// Above this atom count the Perron matrix is applied without being stored.
const DENSE_LIMIT: usize = 4096;
/// Radii `1 - 2^{-j}` of the potential grid stop at this `j`.
const MAX_RADIAL_LEVEL: usize = 39;

/// `int L(w, z) dmu(z)`.
pub fn potential(mu: &AtomicMeasure, w: impl Into<KernelPoint>) -> f64 {
    let w = w.into();
    mu.atoms().iter().fold(0.0, |acc, a| acc + a.mass * log_kernel_interior(&w, &a.point))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSup {
    pub value: f64,
    pub argmax: DiskPoint,
}

/// Maximum of the potential over a polar grid (radii `1 - 2^{-j}`, `8 grid`
/// angles) together with the atom locations.
pub fn potential_sup(mu: &AtomicMeasure, grid: usize) -> Result<PotentialSup> {
    if grid < 8 {
        return Err(Error::validation(format!("potential grid {grid} below the minimum 8")));
    }
    let angles = 8 * grid;
    let levels = grid.min(MAX_RADIAL_LEVEL);
    let mut points = vec![DiskPoint::origin()];
    for j in 1..=levels {
        let r = 1.0 - 0.5f64.powi(j as i32);
        for k in 0..angles {
            points.push(DiskPoint::from_polar(r, TAU * k as f64 / angles as f64)?);
        }
    }
    points.extend(mu.atoms().iter().map(|a| a.point));
    let values: Vec<f64> = points.par_iter().map(|&p| potential(mu, p)).collect();
    let (idx, value) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    Ok(PotentialSup { value, argmax: points[idx] })
}

/// Perron eigenvalue of `M_ij = sqrt(m_i m_j) L(z_i, z_j)` and the Schur bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerronReport {
    pub perron_bound: f64,
    pub schur_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn require_nonzero(mu: &AtomicMeasure) -> Result<()> {
    if mu.is_empty() {
        Err(Error::validation("the zero measure has no spectrum"))
    } else {
        Ok(())
    }
}

/// Power iteration from the uniform vector; `apply` computes `M v`.
fn power_iteration(n: usize, apply: impl Fn(&[f64]) -> Vec<f64>) -> (f64, Vec<f64>, usize, bool) {
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut rayleigh = 0.0;
    for it in 1..=POWER_MAX_ITERS {
        let mv = apply(&v);
        let next: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        let norm = mv.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return (0.0, v, it, true);
        }
        v = mv.into_iter().map(|x| x / norm).collect();
        if (next - rayleigh).abs() <= POWER_TOL * next.abs() {
            return (next, v, it, true);
        }
        rayleigh = next;
    }
    (rayleigh, v, POWER_MAX_ITERS, false)
}

pub fn perron_bound(mu: &AtomicMeasure) -> Result<PerronReport> {
    require_nonzero(mu)?;
    let atoms = mu.atoms();
    let n = atoms.len();
    let roots: Vec<f64> = atoms.iter().map(|a| a.mass.sqrt()).collect();
    let entry = |i: usize, j: usize| {
        roots[i] * roots[j] * log_kernel_interior(&KernelPoint::Interior(atoms[i].point), &atoms[j].point)
    };
    let (perron, _, iterations, converged) = if n <= DENSE_LIMIT {
        let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
        power_iteration(n, |v| {
            rows.par_iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
        })
    } else {
        power_iteration(n, |v| {
            (0..n).into_par_iter().map(|i| (0..n).map(|j| entry(i, j) * v[j]).sum()).collect()
        })
    };
    let schur = atoms
        .par_iter()
        .map(|a| potential(mu, a.point))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PerronReport { perron_bound: perron, schur_bound: schur, iterations, converged })
}

/// A unit vector of `L^2(mu)`: `sum_i m_i |g_i|^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWitness {
    pub weights: Vec<Complex64>,
}

impl DualWitness {
    pub fn l2_norm_sqr(&self, mu: &AtomicMeasure) -> f64 {
        mu.atoms().iter().zip(&self.weights).map(|(a, g)| a.mass * g.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualNorm {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub witness: DualWitness,
}

/// Operator norm of `A_ij = sqrt(m_i m_j) k(z_j, z_i)` by power iteration on `A^H A`.
pub fn dual_norm(mu: &AtomicMeasure) -> Result<DualNorm> {
    require_nonzero(mu)?;
    let atoms = mu.atoms();
    let n = atoms.len();
    let roots: Vec<f64> = atoms.iter().map(|a| a.mass.sqrt()).collect();
    let a: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| roots[i] * roots[j] * repr_kernel(&atoms[j].point, &atoms[i].point)).collect())
        .collect();
    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        a.par_iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    };
    let apply_adjoint = |v: &[Complex64]| -> Vec<Complex64> {
        (0..n).into_par_iter().map(|j| (0..n).map(|i| a[i][j].conj() * v[i]).sum()).collect()
    };
    let norm = |v: &[Complex64]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let mut v = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut sigma_sqr = 0.0;
    let mut converged = false;
    let mut iterations = POWER_MAX_ITERS;
    for it in 1..=POWER_MAX_ITERS {
        let av = apply(&v);
        let next = av.iter().map(|x| x.norm_sqr()).sum::<f64>();
        let w = apply_adjoint(&av);
        let wn = norm(&w);
        if wn == 0.0 {
            sigma_sqr = next;
            converged = true;
            iterations = it;
            break;
        }
        v = w.into_iter().map(|x| x / wn).collect();
        if (next - sigma_sqr).abs() <= POWER_TOL * next {
            sigma_sqr = next;
            converged = true;
            iterations = it;
            break;
        }
        sigma_sqr = next;
    }
    let weights = v.iter().zip(&roots).map(|(x, r)| x / r).collect();
    Ok(DualNorm { value: sigma_sqr.sqrt(), iterations, converged, witness: DualWitness { weights } })
}

/// Perron, Schur and dual-norm constants of one measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub perron_bound: f64,
    pub schur_bound: f64,
    pub dual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn embedding_report(mu: &AtomicMeasure) -> Result<EmbeddingReport> {
    let perron = perron_bound(mu)?;
    let dual = dual_norm(mu)?;
    Ok(EmbeddingReport {
        perron_bound: perron.perron_bound,
        schur_bound: perron.schur_bound,
        dual_norm: dual.value,
        iterations: perron.iterations.max(dual.iterations),
        converged: perron.converged && dual.converged,
    })
}

/// Identifies a dyadic arc: level `j` (length `2 pi 2^{-j}`), half-shift flag, index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DyadicIndex {
    pub level: u32,
    pub shifted: bool,
    pub index: u64,
}

impl DyadicIndex {
    pub fn length(&self) -> f64 {
        TAU * 0.5f64.powi(self.level as i32)
    }

    pub fn arc(&self) -> Arc {
        let len = self.length();
        if self.level == 0 {
            return Arc::full_circle();
        }
        let start = if self.shifted { self.index as f64 + 0.5 } else { self.index as f64 };
        Arc::new((start + 0.5) * len, len).expect("dyadic arcs are valid")
    }
}

/// Nonzero box masses `mu(S(I))` over the dyadic family up to `depth`.
pub fn dyadic_box_masses(mu: &AtomicMeasure, depth: u32) -> BTreeMap<DyadicIndex, f64> {
    dyadic_masses(mu, depth, |arc, z| box_contains(arc, z))
}

/// Nonzero angular masses `mu({arg z in I})` over the dyadic family up to `depth`.
pub fn dyadic_arc_masses(mu: &AtomicMeasure, depth: u32) -> BTreeMap<DyadicIndex, f64> {
    dyadic_masses(mu, depth, |arc, z| arc.contains_angle(z.arg()))
}

fn dyadic_masses(
    mu: &AtomicMeasure,
    depth: u32,
    member: impl Fn(&Arc, &DiskPoint) -> bool,
) -> BTreeMap<DyadicIndex, f64> {
    let mut masses = BTreeMap::new();
    for atom in mu.atoms() {
        let theta = atom.point.arg();
        let full = DyadicIndex { level: 0, shifted: false, index: 0 };
        if member(&full.arc(), &atom.point) {
            *masses.entry(full).or_insert(0.0) += atom.mass;
        }
        for level in 1..=depth {
            let count = 1u64 << level;
            let len = TAU / count as f64;
            for shifted in [false, true] {
                let base = (theta / len - if shifted { 0.5 } else { 0.0 }).floor() as i64;
                let mut candidates = [base - 1, base, base + 1].map(|k| k.rem_euclid(count as i64) as u64);
                candidates.sort_unstable();
                let mut previous = None;
                for k in candidates {
                    if previous == Some(k) {
                        continue;
                    }
                    previous = Some(k);
                    let idx = DyadicIndex { level, shifted, index: k };
                    if member(&idx.arc(), &atom.point) {
                        *masses.entry(idx).or_insert(0.0) += atom.mass;
                    }
                }
            }
        }
    }
    masses
}

/// The largest value of `mass / phi(|I|)` with the arc attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneBoxSup {
    pub value: f64,
    pub witness: Option<Arc>,
}

fn sup_ratio(masses: &BTreeMap<DyadicIndex, f64>, phi: &Gauge) -> OneBoxSup {
    let mut best = OneBoxSup { value: 0.0, witness: None };
    for (idx, &m) in masses {
        let ratio = m / phi.eval_log(-idx.length().ln());
        if ratio > best.value {
            best = OneBoxSup { value: ratio, witness: Some(idx.arc()) };
        }
    }
    best
}

/// `sup mu(S(I)) / phi(|I|)` over the dyadic family to `depth`.
pub fn one_box_sup(mu: &AtomicMeasure, phi: &Gauge, depth: u32) -> Result<OneBoxSup> {
    if depth < 1 {
        return Err(Error::validation("one-box depth must be at least 1"));
    }
    Ok(sup_ratio(&dyadic_box_masses(mu, depth), phi))
}

/// `sup mu(arg z in I) / phi(|I|)` over the dyadic family to `depth`.
pub fn one_arc_sup(mu: &AtomicMeasure, phi: &Gauge, depth: u32) -> Result<OneBoxSup> {
    if depth < 1 {
        return Err(Error::validation("one-arc depth must be at least 1"));
    }
    Ok(sup_ratio(&dyadic_arc_masses(mu, depth), phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub length: f64,
    pub value: f64,
}

/// For each dyadic length, `max_I mu(S(I)) log(1/|I|)` over arcs carrying mass (0 if none).
pub fn onearc_necessity_profile(mu: &AtomicMeasure, depth: u32) -> Result<Vec<ProfilePoint>> {
    if depth < 2 {
        return Err(Error::validation("profile depth must be at least 2"));
    }
    let masses = dyadic_box_masses(mu, depth);
    let mut best: Vec<Option<f64>> = vec![None; depth as usize + 1];
    for (idx, &m) in &masses {
        let value = m * (1.0 / idx.length()).ln();
        let slot = &mut best[idx.level as usize];
        *slot = Some(slot.map_or(value, |b: f64| b.max(value)));
    }
    Ok(best
        .into_iter()
        .enumerate()
        .map(|(j, v)| ProfilePoint { length: TAU * 0.5f64.powi(j as i32), value: v.unwrap_or(0.0) })
        .collect())
}

/// `mu(union S(I_k))` against `c(union I_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StegengaRatio {
    pub box_mass: f64,
    pub capacity: f64,
    pub ratio: f64,
    pub converged: bool,
}

pub fn stegenga_ratio(mu: &AtomicMeasure, set: &ArcSet, resolution: usize) -> Result<StegengaRatio> {
    let box_mass = mu.box_mass(set);
    let cap = capacity(set, resolution)?;
    Ok(StegengaRatio {
        box_mass,
        capacity: cap.capacity,
        ratio: box_mass / cap.capacity,
        converged: cap.converged,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{LN_2, PI};

    use super::*;
    use crate::geometry::log_kernel;
    use crate::measures::circle_measure;

    fn p(x: f64, y: f64) -> DiskPoint {
        DiskPoint::new(x, y).unwrap()
    }

    #[test]
    fn potential_examples() {
        let origin = AtomicMeasure::dirac(DiskPoint::origin(), 1.0).unwrap();
        assert!((potential(&origin, p(0.3, -0.2)) - LN_2).abs() < 1e-15);
        assert_eq!(potential(&AtomicMeasure::zero(), p(0.1, 0.1)), 0.0);
        let mu = AtomicMeasure::dirac(p(0.9, 0.0), 2.0).unwrap();
        assert!((potential(&mu, p(0.9, 0.0)) - 2.0 * (2.0f64 / 0.19).ln()).abs() < 1e-13);
        assert!((potential(&mu, KernelPoint::Boundary(PI)) - 2.0 * (2.0f64 / 1.9).ln()).abs() < 1e-13);
    }

    #[test]
    fn potential_sup_examples() {
        let origin = AtomicMeasure::dirac(DiskPoint::origin(), 1.0).unwrap();
        assert!((potential_sup(&origin, 8).unwrap().value - LN_2).abs() < 1e-15);
        // L(w, 0.9) grows as w -> 1, so the maximum sits on the outermost grid radius at angle 0
        let mu = AtomicMeasure::dirac(p(0.9, 0.0), 1.0).unwrap();
        let sup = potential_sup(&mu, 16).unwrap();
        let r = 1.0 - 0.5f64.powi(16);
        assert!((sup.argmax.x - r).abs() < 1e-15 && sup.argmax.y == 0.0, "{:?}", sup.argmax);
        assert!((sup.value - (2.0 / (1.0 - 0.9 * r)).ln()).abs() < 1e-13);
        let ring = circle_measure(&ArcSet::full_circle(), &[1.0], 0.5, 64).unwrap();
        let sup = potential_sup(&ring, 16).unwrap().value;
        assert!(sup >= LN_2 && sup <= 4f64.ln(), "{sup}");
        assert!(potential_sup(&mu, 7).is_err());
    }

    #[test]
    fn perron_examples() {
        let m = 0.7;
        let r = perron_bound(&AtomicMeasure::dirac(DiskPoint::origin(), m).unwrap()).unwrap();
        assert!((r.perron_bound - m * LN_2).abs() < 1e-15);
        let mu = AtomicMeasure::from_pairs([(p(0.5, 0.0), 0.5), (p(-0.5, 0.0), 0.5)]).unwrap();
        let d = log_kernel(p(0.5, 0.0), p(0.5, 0.0)).unwrap();
        let o = log_kernel(p(0.5, 0.0), p(-0.5, 0.0)).unwrap();
        let r = perron_bound(&mu).unwrap();
        assert!((r.perron_bound - 0.5 * (d + o)).abs() < 1e-12);
        assert!(r.perron_bound <= r.schur_bound + 1e-9);
        assert!(perron_bound(&AtomicMeasure::zero()).is_err());
    }

    #[test]
    fn dual_norm_examples() {
        let r = dual_norm(&AtomicMeasure::dirac(DiskPoint::origin(), 1.0).unwrap()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        let r = dual_norm(&AtomicMeasure::dirac(p(0.9, 0.0), 1.0).unwrap()).unwrap();
        assert!((r.value - 2.660_731).abs() < 1e-6);
        assert!((r.witness.l2_norm_sqr(&AtomicMeasure::dirac(p(0.9, 0.0), 1.0).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dual_norm_two_atoms_matches_closed_form() {
        // symmetric pair: A = m [[k(z,z), k(z,-z)], [k(-z,z), k(-z,-z)]] with k real here
        let z = p(0.6, 0.0);
        let mz = p(-0.6, 0.0);
        let mu = AtomicMeasure::from_pairs([(z, 0.3), (mz, 0.3)]).unwrap();
        let diag = repr_kernel(&z, &z).re;
        let off = repr_kernel(&z, &mz).re;
        let expected = 0.3 * (diag + off.abs());
        let r = dual_norm(&mu).unwrap();
        assert!((r.value - expected).abs() < 1e-10, "{} vs {expected}", r.value);
    }

    #[test]
    fn one_box_examples() {
        let phi = Gauge::power(1.0).unwrap();
        assert_eq!(one_box_sup(&AtomicMeasure::zero(), &phi, 8).unwrap().value, 0.0);
        let mu = AtomicMeasure::dirac(p(0.9, 0.0), 1.0).unwrap();
        let sup = one_box_sup(&mu, &phi, 8).unwrap();
        assert!((sup.value - 32.0 / TAU).abs() < 1e-12, "{}", sup.value);
        assert!((sup.witness.unwrap().length() - TAU / 32.0).abs() < 1e-15);
    }

    #[test]
    fn full_arc_in_family() {
        let phi = Gauge::log(std::f64::consts::E).unwrap();
        let mu = AtomicMeasure::dirac(p(0.0, 0.2), 3.0).unwrap();
        let sup = one_box_sup(&mu, &phi, 2).unwrap();
        assert!((sup.value - 3.0 / phi.eval(TAU).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn profile_examples() {
        let zero = onearc_necessity_profile(&AtomicMeasure::zero(), 5).unwrap();
        assert!(zero.iter().all(|p| p.value == 0.0));
        let mu = AtomicMeasure::dirac(p(0.99, 0.0), 1.0).unwrap();
        let profile = onearc_necessity_profile(&mu, 12).unwrap();
        // the box of an arc of length L holds the atom iff L > 0.01
        for pt in &profile {
            let expected = if pt.length > 0.01 { (1.0 / pt.length).ln() } else { 0.0 };
            assert!((pt.value - expected).abs() < 1e-12, "{pt:?}");
        }
    }

    #[test]
    fn stegenga_examples() {
        let ring = circle_measure(&ArcSet::full_circle(), &[1.0], 0.5, 32).unwrap();
        let r = stegenga_ratio(&ring, &ArcSet::full_circle(), 512).unwrap();
        assert!((r.ratio - LN_2).abs() < 1e-3 * LN_2);
        let r = stegenga_ratio(&AtomicMeasure::zero(), &ArcSet::full_circle(), 64).unwrap();
        assert_eq!(r.ratio, 0.0);
    }
}
