//! Circle and disk geometry: angles, arcs, Carleson boxes and the two kernels.
//!
//! Every boundary-to-boundary distance goes through [`log_chord`]; interior
//! distances use the identity
//! `|1 - conj(w) z|^2 = |w - z|^2 + (1 - |w|^2)(1 - |z|^2)`,
//! which avoids the cancellation in `1 - conj(w) z` near the boundary and is
//! bitwise symmetric in `w` and `z`.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus allowed for atoms of a measure.
pub const MAX_RADIUS: f64 = 1.0 - 1e-12;

/// Reduces an angle to `(-pi, pi]`. Odd: `reduce_angle(-t) == -reduce_angle(t)` away from `±pi`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta - TAU * (theta / TAU).round();
    if r <= -PI {
        r + TAU
    } else if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Maps an angle to `[0, 2pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `log|1 - e^{i theta}| = log(2 |sin(theta / 2)|)`, evaluated through the sine so
/// that tiny angles keep full relative accuracy.
pub fn log_chord(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::domain(format!("log_chord: non-finite angle {theta}")));
    }
    let r = reduce_angle(theta).abs();
    if r == 0.0 {
        return Err(Error::domain("log_chord: angle is a multiple of 2pi (zero chord)"));
    }
    Ok((2.0 * (0.5 * r).sin()).ln())
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for DiskPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        DiskPoint::new(raw.x, raw.y)
    }
}

impl DiskPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::validation(format!("point ({x}, {y}) is not finite")));
        }
        if x.hypot(y) >= 1.0 {
            return Err(Error::validation(format!(
                "point ({x}, {y}) is not inside the open unit disk"
            )));
        }
        Ok(DiskPoint { x, y })
    }

    pub fn from_polar(radius: f64, angle: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&radius) {
            return Err(Error::validation(format!("radius {radius} outside [0, 1)")));
        }
        DiskPoint::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn origin() -> Self {
        DiskPoint { x: 0.0, y: 0.0 }
    }

    pub fn modulus(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Argument in `[0, 2pi)`; the origin is assigned angle 0.
    pub fn arg(&self) -> f64 {
        if self.x == 0.0 && self.y == 0.0 {
            0.0
        } else {
            normalize_angle(self.y.atan2(self.x))
        }
    }

    /// `1 - |z|^2`, computed as `(1 - r)(1 + r)`.
    pub fn one_minus_norm_sqr(&self) -> f64 {
        let r = self.modulus();
        (1.0 - r) * (1.0 + r)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// A kernel argument: either inside the disk or on the unit circle (given by its angle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelPoint {
    Interior(DiskPoint),
    Boundary(f64),
}

impl From<DiskPoint> for KernelPoint {
    fn from(p: DiskPoint) -> Self {
        KernelPoint::Interior(p)
    }
}

impl KernelPoint {
    fn coords(&self) -> (f64, f64, f64) {
        match *self {
            KernelPoint::Interior(p) => (p.x, p.y, p.one_minus_norm_sqr()),
            KernelPoint::Boundary(a) => (a.cos(), a.sin(), 0.0),
        }
    }
}

/// `log|1 - conj(w) z|`. Fails only for coincident boundary points.
pub fn log_cross_distance(w: &KernelPoint, z: &KernelPoint) -> Result<f64> {
    if let (KernelPoint::Boundary(a), KernelPoint::Boundary(b)) = (w, z) {
        return log_chord(b - a);
    }
    let (wx, wy, wd) = w.coords();
    let (zx, zy, zd) = z.coords();
    let dx = wx - zx;
    let dy = wy - zy;
    let sq = dx * dx + dy * dy + wd * zd;
    if sq <= 0.0 {
        return Err(Error::domain("coincident points on the unit circle"));
    }
    Ok(0.5 * sq.ln())
}

/// `|1 - conj(w) z|`.
pub fn cross_distance(w: &KernelPoint, z: &KernelPoint) -> f64 {
    match (w, z) {
        (KernelPoint::Boundary(a), KernelPoint::Boundary(b)) => {
            2.0 * (0.5 * reduce_angle(b - a).abs()).sin()
        }
        _ => {
            let (wx, wy, wd) = w.coords();
            let (zx, zy, zd) = z.coords();
            let dx = wx - zx;
            let dy = wy - zy;
            (dx * dx + dy * dy + wd * zd).sqrt()
        }
    }
}

/// The log-kernel `L(w, z) = log(2 / |1 - conj(w) z|)`.
pub fn log_kernel(w: impl Into<KernelPoint>, z: impl Into<KernelPoint>) -> Result<f64> {
    Ok(LN_2 - log_cross_distance(&w.into(), &z.into())?)
}

/// Log-kernel between an arbitrary point and an interior point; never fails.
pub(crate) fn log_kernel_interior(w: &KernelPoint, z: &DiskPoint) -> f64 {
    let (wx, wy, wd) = w.coords();
    let dx = wx - z.x;
    let dy = wy - z.y;
    LN_2 - 0.5 * (dx * dx + dy * dy + wd * z.one_minus_norm_sqr()).ln()
}

/// The reproducing kernel `k(z, w) = 1 + log(1 / (1 - conj(w) z))`, principal branch.
pub fn repr_kernel(z: &DiskPoint, w: &DiskPoint) -> Complex64 {
    let re = 1.0 - (w.x * z.x + w.y * z.y);
    let im = -(w.x * z.y - w.y * z.x);
    let dx = w.x - z.x;
    let dy = w.y - z.y;
    let log_mod = 0.5 * (dx * dx + dy * dy + w.one_minus_norm_sqr() * z.one_minus_norm_sqr()).ln();
    Complex64::new(1.0 - log_mod, -im.atan2(re))
}

/// A closed arc of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArc")]
pub struct Arc {
    center: f64,
    length: f64,
}

#[derive(Deserialize)]
struct RawArc {
    center: f64,
    length: f64,
}

impl TryFrom<RawArc> for Arc {
    type Error = Error;

    fn try_from(raw: RawArc) -> Result<Self> {
        Arc::new(raw.center, raw.length)
    }
}

impl Arc {
    /// Arc of the given angular length centred at `center` (normalized to `[0, 2pi)`).
    pub fn new(center: f64, length: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::validation(format!("arc center {center} is not finite")));
        }
        if !(length > 0.0 && length <= TAU) {
            return Err(Error::validation(format!("arc length {length} outside (0, 2pi]")));
        }
        Ok(Arc { center: normalize_angle(center), length })
    }

    pub fn full_circle() -> Self {
        Arc { center: 0.0, length: TAU }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_full(&self) -> bool {
        self.length >= TAU
    }

    /// Left endpoint in `[0, 2pi)`.
    pub fn left(&self) -> f64 {
        normalize_angle(self.center - 0.5 * self.length)
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        self.is_full() || reduce_angle(theta - self.center).abs() <= 0.5 * self.length
    }

    /// `self ⊆ other` as closed arcs.
    pub fn is_within(&self, other: &Arc) -> bool {
        other.is_full()
            || (!self.is_full()
                && reduce_angle(self.center - other.center).abs() + 0.5 * self.length
                    <= 0.5 * other.length)
    }

    pub fn rotated(&self, angle: f64) -> Arc {
        Arc { center: normalize_angle(self.center + angle), length: self.length }
    }

    fn grown(&self, delta: f64) -> Arc {
        Arc { center: self.center, length: (self.length + 2.0 * delta).min(TAU) }
    }
}

/// Membership in the Carleson box `S(I) = { r e^{it} : 1 - |I| < r < 1, e^{it} in I }`.
pub fn box_contains(arc: &Arc, z: &DiskPoint) -> bool {
    let r = z.modulus();
    1.0 - arc.length < r && r < 1.0 && arc.contains_angle(z.arg())
}

/// A finite union of pairwise disjoint closed arcs, sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArcSet")]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArcSet {
    arcs: Vec<Arc>,
}

impl TryFrom<RawArcSet> for ArcSet {
    type Error = Error;

    fn try_from(raw: RawArcSet) -> Result<Self> {
        ArcSet::new(raw.arcs)
    }
}

/// Rounding slack for touching endpoints when merging: a few ulps of angles near `2 pi`.
const MERGE_SLACK: f64 = 4.0 * f64::EPSILON * TAU;

fn sort_by_left(arcs: &mut [Arc]) {
    arcs.sort_by(|a, b| a.left().total_cmp(&b.left()).then(a.length.total_cmp(&b.length)));
}

/// Extends `a` by an arc `b` whose left endpoint lies `offset >= 0` past that of `a`.
fn extend(a: &Arc, offset: f64, b: &Arc) -> Arc {
    let length = a.length.max(offset + b.length);
    if length >= TAU {
        return Arc::full_circle();
    }
    Arc { center: normalize_angle(a.center + 0.5 * (length - a.length)), length }
}

impl ArcSet {
    /// Validating constructor: rejects arcs that intersect (including touching endpoints).
    pub fn new(arcs: Vec<Arc>) -> Result<Self> {
        let mut arcs = arcs;
        sort_by_left(&mut arcs);
        let n = arcs.len();
        if n > 1 {
            if arcs.iter().any(Arc::is_full) {
                return Err(Error::validation("a full-circle arc cannot be combined with others"));
            }
            for i in 0..n {
                let (a, b) = (&arcs[i], &arcs[(i + 1) % n]);
                let offset = if i + 1 < n { b.left() - a.left() } else { b.left() + TAU - a.left() };
                if offset <= a.length {
                    return Err(Error::validation(format!(
                        "arcs overlap: (center {}, length {}) and (center {}, length {})",
                        a.center, a.length, b.center, b.length
                    )));
                }
            }
        }
        Ok(ArcSet { arcs })
    }

    /// Normalized union of arbitrary arcs: overlapping or touching arcs are merged.
    pub fn union(arcs: impl IntoIterator<Item = Arc>) -> Self {
        let mut items: Vec<Arc> = arcs.into_iter().collect();
        if items.iter().any(Arc::is_full) {
            return ArcSet::full_circle();
        }
        sort_by_left(&mut items);
        let mut merged: Vec<Arc> = Vec::with_capacity(items.len());
        for arc in items {
            if let Some(last) = merged.last_mut() {
                let offset = arc.left() - last.left();
                if offset <= last.length + MERGE_SLACK {
                    *last = extend(last, offset, &arc);
                    if last.is_full() {
                        return ArcSet::full_circle();
                    }
                    continue;
                }
            }
            merged.push(arc);
        }
        while merged.len() > 1 {
            let last = merged[merged.len() - 1];
            let first = merged[0];
            let offset = first.left() + TAU - last.left();
            if offset > last.length + MERGE_SLACK {
                break;
            }
            let joined = extend(&last, offset, &first);
            if joined.is_full() {
                return ArcSet::full_circle();
            }
            merged.pop();
            merged.remove(0);
            merged.push(joined);
        }
        sort_by_left(&mut merged);
        ArcSet { arcs: merged }
    }

    pub fn single(arc: Arc) -> Self {
        ArcSet { arcs: vec![arc] }
    }

    pub fn full_circle() -> Self {
        ArcSet::single(Arc::full_circle())
    }

    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(Arc::length).sum()
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains_angle(theta))
    }

    /// Every arc of `self` lies inside some arc of `other`.
    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        self.arcs.iter().all(|a| other.arcs.iter().any(|b| a.is_within(b)))
    }

    pub fn rotated(&self, angle: f64) -> ArcSet {
        ArcSet::union(self.arcs.iter().map(|a| a.rotated(angle)))
    }

    /// `E_delta = { zeta : d(zeta, E) <= delta }` in arclength distance.
    pub fn dilate(&self, delta: f64) -> Result<ArcSet> {
        if !(delta > 0.0) {
            return Err(Error::validation(format!("dilation radius {delta} must be positive")));
        }
        Ok(ArcSet::union(self.arcs.iter().map(|a| a.grown(delta))))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> DiskPoint {
        DiskPoint::new(x, y).unwrap()
    }

    #[test]
    fn log_chord_anchors() {
        assert!((log_chord(PI).unwrap() - LN_2).abs() < 1e-15);
        assert!((log_chord(TAU / 3.0).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        let tiny = log_chord(1e-200).unwrap();
        assert!((tiny - (-200.0 * 10f64.ln())).abs() / 460.517 < 1e-13);
        let tinier = log_chord(1e-300).unwrap();
        assert!((tinier - 1e-300f64.ln()).abs() / tinier.abs() < 1e-13);
    }

    #[test]
    fn log_chord_zero_is_domain_error() {
        assert!(matches!(log_chord(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_chord(TAU * 3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn log_kernel_anchors() {
        let z = p(0.3, -0.2);
        assert!((log_kernel(DiskPoint::origin(), z).unwrap() - LN_2).abs() < 1e-15);
        let w = p(0.9, 0.0);
        assert!((log_kernel(w, w).unwrap() - (2.0f64 / 0.19).ln()).abs() < 1e-12);
        let anti = log_kernel(KernelPoint::Boundary(PI), KernelPoint::Boundary(0.0)).unwrap();
        assert!(anti.abs() < 1e-15);
        assert!(log_kernel(KernelPoint::Boundary(1.0), KernelPoint::Boundary(1.0)).is_err());
    }

    #[test]
    fn repr_kernel_anchors() {
        let k = repr_kernel(&p(0.7, 0.1), &DiskPoint::origin());
        assert_eq!(k, Complex64::new(1.0, 0.0));
        let k = repr_kernel(&p(0.5, 0.0), &p(0.5, 0.0));
        assert!((k.re - (1.0 + (1.0f64 / 0.75).ln())).abs() < 1e-14);
        assert!(k.im.abs() < 1e-16);
        // oracle: principal log of 1 - conj(w) z with plain complex arithmetic
        let (z, w) = (p(0.5, 0.0), p(0.0, 0.5));
        let zeta = Complex64::new(1.0, 0.0) - w.to_complex().conj() * z.to_complex();
        let oracle = Complex64::new(1.0, 0.0) - zeta.ln();
        let k = repr_kernel(&z, &w);
        assert!((k - oracle).norm() < 1e-15);
        assert!((k.re - (1.0 - 0.5 * 1.0625f64.ln())).abs() < 1e-15);
        assert!((k.im + 0.25f64.atan()).abs() < 1e-15);
    }

    #[test]
    fn box_contains_examples() {
        assert!(box_contains(&Arc::full_circle(), &p(0.3, 0.4)));
        let arc = Arc::new(0.0, 0.2).unwrap();
        assert!(!box_contains(&arc, &p(0.5, 0.0)));
        assert!(box_contains(&arc, &DiskPoint::from_polar(0.95, 0.05).unwrap()));
        // origin has angle 0 and needs |I| > 1
        assert!(box_contains(&Arc::new(0.0, 1.5).unwrap(), &DiskPoint::origin()));
        assert!(!box_contains(&Arc::new(PI, 1.5).unwrap(), &DiskPoint::origin()));
        assert!(!box_contains(&Arc::new(0.0, 1.0).unwrap(), &DiskPoint::origin()));
    }

    #[test]
    fn closed_arc_endpoints_included() {
        let arc = Arc::new(1.0, 0.5).unwrap();
        assert!(arc.contains_angle(1.25));
        assert!(arc.contains_angle(0.75));
        assert!(!arc.contains_angle(1.2500001));
    }

    #[test]
    fn dilate_examples() {
        let e = ArcSet::single(Arc::new(0.0, 0.1).unwrap());
        let d = e.dilate(0.05).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d.arcs()[0].length() - 0.2).abs() < 1e-15);
        assert!(reduce_angle(d.arcs()[0].center()).abs() < 1e-15);

        let e = ArcSet::new(vec![Arc::new(0.0, 0.1).unwrap(), Arc::new(0.3, 0.1).unwrap()]).unwrap();
        let d = e.dilate(0.1).unwrap();
        assert_eq!(d.len(), 1);
        assert!((d.arcs()[0].length() - 0.6).abs() < 1e-14);
        assert!((d.arcs()[0].center() - 0.15).abs() < 1e-14);

        let d = e.dilate(TAU).unwrap();
        assert!(d.arcs()[0].is_full());
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn new_rejects_overlaps() {
        let overlapping = vec![Arc::new(0.0, 0.5).unwrap(), Arc::new(0.3, 0.5).unwrap()];
        assert!(ArcSet::new(overlapping).is_err());
        let wrapping = vec![Arc::new(0.1, 0.5).unwrap(), Arc::new(TAU - 0.1, 0.5).unwrap()];
        assert!(ArcSet::new(wrapping).is_err());
        let fine = vec![Arc::new(TAU - 0.5, 0.5).unwrap(), Arc::new(0.5, 0.5).unwrap()];
        let set = ArcSet::new(fine).unwrap();
        assert!(set.arcs()[0].left() < set.arcs()[1].left());
    }

    #[test]
    fn union_merges_across_zero() {
        let set = ArcSet::union(vec![
            Arc::new(TAU - 0.1, 0.3).unwrap(),
            Arc::new(0.1, 0.2).unwrap(),
            Arc::new(2.0, 0.1).unwrap(),
        ]);
        assert_eq!(set.len(), 2);
        let wrap = set.arcs().iter().find(|a| a.length() > 0.2).unwrap();
        assert!((wrap.length() - 0.45).abs() < 1e-14);
        assert!(wrap.contains_angle(0.0) && wrap.contains_angle(0.199) && wrap.contains_angle(TAU - 0.249));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let set = ArcSet::from_json(r#"{"arcs":[{"center": 7.0, "length": 0.5}]}"#).unwrap();
        assert!((set.arcs()[0].center() - (7.0 - TAU)).abs() < 1e-15);
        let again = ArcSet::from_json(&set.to_json().unwrap()).unwrap();
        assert_eq!(set, again);
        let err = ArcSet::from_json(
            r#"{"arcs":[{"center": 0.0, "length": 0.5},{"center": 0.2, "length": 0.5}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("overlap"), "{err}");
        assert!(ArcSet::from_json(r#"{"arcs":[{"center": 0.0, "length": -1}]}"#).is_err());
    }

    #[test]
    fn tiny_arcs_stay_distinct() {
        let base = 0.5;
        let sep = 3.4e-14;
        let arcs = vec![Arc::new(base, 4e-28).unwrap(), Arc::new(base + sep, 4e-28).unwrap()];
        let set = ArcSet::new(arcs).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(ArcSet::union(set.arcs().to_vec()).len(), 2);
    }
}
