//! Finite positive measures on the disk, stored as weighted atoms.
//!
//! Sums over atoms always run left to right so results do not depend on
//! thread count.

use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{box_contains, cross_distance, Arc, ArcSet, DiskPoint, KernelPoint, MAX_RADIUS};

/// Slack on the radius cap for points built from polar coordinates.
const RADIUS_SLACK: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(flatten)]
    pub point: DiskPoint,
    pub mass: f64,
}

/// A finite positive measure `sum_i m_i delta_{z_i}` on the open disk.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    atoms: Vec<RawAtom>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    x: f64,
    y: f64,
    mass: f64,
}

impl TryFrom<RawMeasure> for AtomicMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        let mut atoms = Vec::with_capacity(raw.atoms.len());
        for (i, a) in raw.atoms.into_iter().enumerate() {
            let point = DiskPoint::new(a.x, a.y)
                .map_err(|e| Error::validation(format!("atom {i}: {e}")))?;
            atoms.push(Atom { point, mass: a.mass });
        }
        AtomicMeasure::new(atoms)
    }
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (i, atom) in atoms.iter().enumerate() {
            if !(atom.mass.is_finite() && atom.mass > 0.0) {
                return Err(Error::validation(format!(
                    "atom {i}: mass must be positive and finite, got {}",
                    atom.mass
                )));
            }
            let r = atom.point.modulus();
            if r > MAX_RADIUS + RADIUS_SLACK {
                return Err(Error::validation(format!(
                    "atom {i}: modulus {r} exceeds the cap 1 - 1e-12"
                )));
            }
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (DiskPoint, f64)>) -> Result<Self> {
        AtomicMeasure::new(pairs.into_iter().map(|(point, mass)| Atom { point, mass }).collect())
    }

    /// Point mass `mass * delta_z`.
    pub fn dirac(z: DiskPoint, mass: f64) -> Result<Self> {
        AtomicMeasure::new(vec![Atom { point: z, mass }])
    }

    pub fn zero() -> Self {
        AtomicMeasure::default()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().fold(0.0, |acc, a| acc + a.mass)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::validation(format!("scale factor {factor} must be positive")));
        }
        Ok(AtomicMeasure {
            atoms: self.atoms.iter().map(|a| Atom { point: a.point, mass: a.mass * factor }).collect(),
        })
    }

    /// Sum of the two measures (concatenated atom lists).
    pub fn union(&self, other: &AtomicMeasure) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        AtomicMeasure { atoms }
    }

    pub fn push(&mut self, atom: Atom) -> Result<()> {
        let mut single = AtomicMeasure::new(vec![atom])?;
        self.atoms.append(&mut single.atoms);
        Ok(())
    }

    /// `mu(union of S(I) for I in E)`.
    pub fn box_mass(&self, set: &ArcSet) -> f64 {
        self.atoms
            .iter()
            .filter(|a| set.arcs().iter().any(|arc| box_contains(arc, &a.point)))
            .fold(0.0, |acc, a| acc + a.mass)
    }

    /// `mu(S(I))` for one arc.
    pub fn box_mass_arc(&self, arc: &Arc) -> f64 {
        self.atoms
            .iter()
            .filter(|a| box_contains(arc, &a.point))
            .fold(0.0, |acc, a| acc + a.mass)
    }

    /// Angular mass: total mass of atoms whose argument lies in `arc`.
    pub fn arc_mass(&self, arc: &Arc) -> f64 {
        self.atoms
            .iter()
            .filter(|a| arc.contains_angle(a.point.arg()))
            .fold(0.0, |acc, a| acc + a.mass)
    }

    /// `mu({ z : |1 - conj(w) z| <= t })`.
    pub fn levelset_mass(&self, w: impl Into<KernelPoint>, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::validation(format!("level {t} must be positive")));
        }
        let w = w.into();
        Ok(self
            .atoms
            .iter()
            .filter(|a| cross_distance(&w, &KernelPoint::Interior(a.point)) <= t)
            .fold(0.0, |acc, a| acc + a.mass))
    }

    /// The exact level-set profile `t -> mu({|1 - conj(w) z| <= t})`.
    pub fn fubini_profile(&self, w: impl Into<KernelPoint>) -> FubiniProfile {
        let w = w.into();
        let mut pairs: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (cross_distance(&w, &KernelPoint::Interior(a.point)), a.mass))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut thresholds: Vec<f64> = Vec::new();
        let mut masses: Vec<f64> = Vec::new();
        let mut cumulative = 0.0;
        for (t, m) in pairs {
            cumulative += m;
            if thresholds.last() == Some(&t) {
                *masses.last_mut().unwrap() = cumulative;
            } else {
                thresholds.push(t);
                masses.push(cumulative);
            }
        }
        FubiniProfile { thresholds, masses }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Atoms spread over the arcs of `support` on the circle `|z| = radius`.
///
/// Each arc gets `atoms_per_arc` equally spaced atoms sharing its weight. On a
/// proper arc the atoms sit at the midpoints of equal sub-arcs; on the full
/// circle they sit at `center + 2 pi k / n`.
pub fn circle_measure(
    support: &ArcSet,
    weights: &[f64],
    radius: f64,
    atoms_per_arc: usize,
) -> Result<AtomicMeasure> {
    if weights.len() != support.len() {
        return Err(Error::validation(format!(
            "{} weights for {} arcs",
            weights.len(),
            support.len()
        )));
    }
    if !(radius > 0.0 && radius <= MAX_RADIUS) {
        return Err(Error::validation(format!("radius {radius} outside (0, 1 - 1e-12]")));
    }
    if atoms_per_arc == 0 {
        return Err(Error::validation("atoms_per_arc must be at least 1"));
    }
    let mut atoms = Vec::with_capacity(support.len() * atoms_per_arc);
    let n = atoms_per_arc as f64;
    for (arc, &weight) in support.arcs().iter().zip(weights) {
        let mass = weight / n;
        for k in 0..atoms_per_arc {
            let offset = if arc.is_full() {
                TAU * k as f64 / n
            } else {
                arc.length() * ((k as f64 + 0.5) / n - 0.5)
            };
            let point = DiskPoint::from_polar(radius, arc.center() + offset)?;
            atoms.push(Atom { point, mass });
        }
    }
    AtomicMeasure::new(atoms)
}

/// Smallest level `t` of the radial grid; atoms then sit at modulus `1 - 1e-12`.
const RADIAL_T_MIN: f64 = 1e-12;

/// Discretizes a measure on `[0, 1)` given by `F(t) = mu([1 - t, 1))`, `t in [0, 1]`.
///
/// Uses the geometric grid `t_j = t_min^{j / (n - 1)}` from `t_0 = 1` down to
/// `t_min = 1e-12`; atom `j` sits at `1 - t_j` with mass `F(t_j) - F(t_{j+1})`
/// and the last atom carries the remainder `F(t_min)`, so the total mass is `F(1)`.
pub fn radial_discretize(cdf: impl Fn(f64) -> f64, n: usize) -> Result<AtomicMeasure> {
    if n < 2 {
        return Err(Error::validation("radial_discretize needs at least 2 grid points"));
    }
    let log_min = RADIAL_T_MIN.ln();
    let grid: Vec<f64> = (0..n)
        .map(|j| if j == 0 { 1.0 } else if j == n - 1 { RADIAL_T_MIN } else { (log_min * j as f64 / (n - 1) as f64).exp() })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&t| cdf(t)).collect();
    let mut atoms = Vec::with_capacity(n);
    for j in 0..n {
        let mass = if j + 1 < n { values[j] - values[j + 1] } else { values[j] };
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::validation(format!(
                "radial cdf is not nondecreasing near t = {} (increment {mass})",
                grid[j]
            )));
        }
        if mass > 0.0 {
            atoms.push(Atom { point: DiskPoint::new(1.0 - grid[j], 0.0)?, mass });
        }
    }
    AtomicMeasure::new(atoms)
}

/// Step function `t -> mu({|1 - conj(w) z| <= t})`, exact at the atom levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FubiniProfile {
    pub thresholds: Vec<f64>,
    pub masses: Vec<f64>,
}

impl FubiniProfile {
    /// `int_0^2 M(t) dt / t` for the step function `M`.
    pub fn integral(&self) -> f64 {
        let n = self.thresholds.len();
        let mut total = 0.0;
        for k in 0..n {
            let upper = if k + 1 < n { self.thresholds[k + 1] } else { 2.0 };
            total += self.masses[k] * (upper.ln() - self.thresholds[k].ln());
        }
        total
    }

    /// Mass at `t` read off the step function.
    pub fn mass_at(&self, t: f64) -> f64 {
        let idx = self.thresholds.partition_point(|&s| s <= t);
        if idx == 0 {
            0.0
        } else {
            self.masses[idx - 1]
        }
    }

    /// The profile sampled at `levels` log-spaced points of `(t_min, 2]`.
    pub fn sampled(&self, levels: usize) -> Result<FubiniProfile> {
        if levels < 2 {
            return Err(Error::validation("profile sampling needs at least 2 levels"));
        }
        let lo = self.thresholds.first().copied().unwrap_or(1.0).min(1.0).ln();
        let hi = 2f64.ln();
        let thresholds: Vec<f64> = (0..levels)
            .map(|k| (lo + (hi - lo) * k as f64 / (levels - 1) as f64).exp())
            .collect();
        let masses = thresholds.iter().map(|&t| self.mass_at(t)).collect();
        Ok(FubiniProfile { thresholds, masses })
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "mass"])?;
        for (t, m) in self.thresholds.iter().zip(&self.masses) {
            w.write_record([t.to_string(), m.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, LN_2, PI};

    use super::*;

    fn p(x: f64, y: f64) -> DiskPoint {
        DiskPoint::new(x, y).unwrap()
    }

    #[test]
    fn box_mass_examples() {
        let mu = AtomicMeasure::dirac(p(0.3, 0.4), 1.0).unwrap();
        assert_eq!(mu.box_mass(&ArcSet::full_circle()), 1.0);
        assert_eq!(AtomicMeasure::zero().box_mass(&ArcSet::full_circle()), 0.0);

        let ring = circle_measure(&ArcSet::full_circle(), &[1.0], 0.95, 4).unwrap();
        // atoms at angles 0, pi/2, pi, 3pi/2; an arc of length pi/2 centred at pi/4
        // holds the directions 0 and pi/2 on its endpoints, so shift it slightly.
        let arc = Arc::new(FRAC_PI_2 * 0.5 + 0.1, FRAC_PI_2).unwrap();
        let by_hand: f64 = ring
            .atoms()
            .iter()
            .filter(|a| arc.contains_angle(a.point.arg()) && a.point.modulus() > 1.0 - arc.length())
            .map(|a| a.mass)
            .sum();
        assert_eq!(by_hand, 0.25);
        assert_eq!(ring.box_mass(&ArcSet::single(arc)), 0.25);
    }

    #[test]
    fn levelset_examples() {
        let mu = AtomicMeasure::from_pairs([(p(0.2, 0.1), 1.5), (p(-0.7, 0.6), 0.5)]).unwrap();
        assert_eq!(mu.levelset_mass(DiskPoint::origin(), 2.0).unwrap(), 2.0);
        let d = AtomicMeasure::dirac(p(0.9, 0.0), 1.0).unwrap();
        assert_eq!(d.levelset_mass(p(0.9, 0.0), 0.1).unwrap(), 0.0);
        assert_eq!(d.levelset_mass(p(0.9, 0.0), 0.2).unwrap(), 1.0);
        assert!(d.levelset_mass(p(0.9, 0.0), 0.0).is_err());
    }

    #[test]
    fn circle_measure_examples() {
        let mu = circle_measure(&ArcSet::full_circle(), &[1.0], 0.5, 4).unwrap();
        for (k, a) in mu.atoms().iter().enumerate() {
            assert_eq!(a.mass, 0.25);
            let expected = DiskPoint::from_polar(0.5, k as f64 * FRAC_PI_2).unwrap();
            assert!((a.point.x - expected.x).abs() < 1e-15 && (a.point.y - expected.y).abs() < 1e-15);
        }
        let two = ArcSet::new(vec![Arc::new(0.5, 0.2).unwrap(), Arc::new(2.0, 0.2).unwrap()]).unwrap();
        let mu = circle_measure(&two, &[0.5, 0.5], 0.8, 1).unwrap();
        assert_eq!(mu.len(), 2);
        assert!((mu.atoms()[0].point.arg() - 0.5).abs() < 1e-15);
        assert!((mu.atoms()[1].point.arg() - 2.0).abs() < 1e-15);
        assert!(circle_measure(&two, &[0.5, 0.5], 1.0, 1).is_err());
        assert!(circle_measure(&two, &[0.5], 0.5, 1).is_err());
    }

    #[test]
    fn radial_examples() {
        let mu = radial_discretize(|t| t, 200).unwrap();
        assert!((mu.total_mass() - 1.0).abs() < 1e-14);
        let radial = radial_discretize(|t: f64| if t > 0.0 { 1.0 / (2.0 / t).ln() } else { 0.0 }, 1000).unwrap();
        assert!((radial.total_mass() - 1.0 / LN_2).abs() < 1e-3);
        assert!(radial_discretize(|_| 0.0, 10).unwrap().is_empty());
        assert!(radial_discretize(|t| 1.0 - t, 10).is_err());
        assert!(radial.atoms().iter().all(|a| a.point.modulus() <= MAX_RADIUS));
    }

    #[test]
    fn fubini_examples() {
        let mu = AtomicMeasure::dirac(DiskPoint::origin(), 1.0).unwrap();
        let prof = mu.fubini_profile(p(0.5, 0.0));
        assert_eq!(prof.thresholds, vec![1.0]);
        assert!((prof.integral() - LN_2).abs() < 1e-15);
        assert_eq!(AtomicMeasure::zero().fubini_profile(p(0.1, 0.1)).integral(), 0.0);
    }

    #[test]
    fn json_reader_names_bad_atom() {
        let err = AtomicMeasure::from_json(
            r#"{"atoms":[{"x":0.1,"y":0.0,"mass":1.0},{"x":0.2,"y":0.0,"mass":-1.0}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("atom 1"), "{err}");
        let err = AtomicMeasure::from_json(r#"{"atoms":[{"x":1.0,"y":0.0,"mass":1.0}]}"#).unwrap_err();
        assert!(err.to_string().contains("atom 0"), "{err}");
        let ok = AtomicMeasure::from_json(r#"{"atoms":[{"x":0.1,"y":-0.3,"mass":2.0}]}"#).unwrap();
        assert_eq!(AtomicMeasure::from_json(&ok.to_json().unwrap()).unwrap(), ok);
        let _ = PI;
    }
}
