//! Region and frontier geometry shared by all bounds: Pareto reduction,
//! lower convex hulls, membership against a frontier, and frontier
//! comparison diagnostics.
//!
//! Frontiers represent the lower-left boundary of a distortion region.
//! Vertices only are stored; containment queries interpolate linearly
//! between adjacent vertices.

use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

/// Near-duplicate vertices (all coordinates within this tolerance) are
/// collapsed; dominance itself is exact.
pub const DEDUP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("empty input cloud")]
    Empty,
    #[error("dimension mismatch: expected {want}, got {got}")]
    DimensionMismatch { want: usize, got: usize },
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("operation supports two-receiver points only")]
    UnsupportedDimension,
}

/// A tuple of per-receiver expected distortions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DistortionPoint {
    pub d: Vec<f64>,
}

impl DistortionPoint {
    pub fn new(d: Vec<f64>) -> Self {
        Self { d }
    }

    pub fn pair(d1: f64, d2: f64) -> Self {
        Self { d: vec![d1, d2] }
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Weak componentwise dominance with at least one strict coordinate.
    pub fn dominates(&self, other: &DistortionPoint) -> bool {
        self.d.iter().zip(&other.d).all(|(a, b)| a <= b)
            && self.d.iter().zip(&other.d).any(|(a, b)| a < b)
    }
}

/// Sorted, Pareto-minimal list of distortion points plus display metadata
/// (a label and free-form generator parameters).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    points: Vec<DistortionPoint>,
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<(String, String)>,
}

impl Frontier {
    pub fn empty(label: impl Into<String>) -> Self {
        Self { points: Vec::new(), label: label.into(), params: Vec::new() }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn points(&self) -> &[DistortionPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Minimum of the `axis`-th coordinate over all vertices.
    pub fn min_coord(&self, axis: usize) -> f64 {
        self.points.iter().map(|p| p.d[axis]).fold(f64::INFINITY, f64::min)
    }
}

fn check_cloud(cloud: &[DistortionPoint]) -> Result<usize, RegionError> {
    let first = cloud.first().ok_or(RegionError::Empty)?;
    let dim = first.dim();
    for p in cloud {
        if p.dim() != dim {
            return Err(RegionError::DimensionMismatch { want: dim, got: p.dim() });
        }
        if p.d.iter().any(|v| !v.is_finite()) {
            return Err(RegionError::NonFinite);
        }
    }
    Ok(dim)
}

fn sort_points(points: &mut [DistortionPoint]) {
    points.sort_by(|a, b| {
        a.d.iter()
            .zip(&b.d)
            .map(|(x, y)| x.partial_cmp(y).unwrap())
            .find(|o| *o != std::cmp::Ordering::Equal)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

fn dedup_sorted(points: &mut Vec<DistortionPoint>) {
    points.dedup_by(|a, b| a.d.iter().zip(&b.d).all(|(x, y)| (x - y).abs() <= DEDUP_TOL));
}

/// Retains exactly the points not componentwise dominated by any other,
/// sorted by the first coordinate ascending. Idempotent.
pub fn pareto_reduce(cloud: &[DistortionPoint]) -> Result<Frontier, RegionError> {
    let dim = check_cloud(cloud)?;
    let mut pts = cloud.to_vec();
    sort_points(&mut pts);
    dedup_sorted(&mut pts);
    let kept = if dim == 2 {
        // Sorted by (d1 asc, d2 asc): a point is dominated iff some earlier
        // point has d2 <= its d2 (strictly smaller d1 run handled by the
        // running minimum; within a d1 run only the first survives).
        let mut kept: Vec<DistortionPoint> = Vec::new();
        let mut best_d2_strictly_left = f64::INFINITY;
        let mut i = 0;
        while i < pts.len() {
            let run_d1 = pts[i].d[0];
            // first entry of the run has the run-minimal d2
            if pts[i].d[1] < best_d2_strictly_left {
                kept.push(pts[i].clone());
                best_d2_strictly_left = pts[i].d[1];
            }
            while i < pts.len() && pts[i].d[0] == run_d1 {
                i += 1;
            }
        }
        kept
    } else {
        let mut kept = Vec::new();
        'outer: for (i, p) in pts.iter().enumerate() {
            for (j, q) in pts.iter().enumerate() {
                if i != j && q.dominates(p) {
                    continue 'outer;
                }
            }
            kept.push(p.clone());
        }
        kept
    };
    Ok(Frontier { points: kept, label: String::new(), params: Vec::new() })
}

/// Lower-left convex hull of a two-receiver cloud. Every hull segment is
/// realizable by timesharing its endpoints; collinear interior points are
/// dropped. The vertex set is a subset of the Pareto set.
pub fn lower_hull(cloud: &[DistortionPoint]) -> Result<Frontier, RegionError> {
    let dim = check_cloud(cloud)?;
    if dim != 2 {
        return Err(RegionError::UnsupportedDimension);
    }
    let pareto = pareto_reduce(cloud)?;
    let pts = pareto.points;
    // Monotone chain over a staircase (x strictly increasing, y strictly
    // decreasing): keep vertices where the slope sequence is strictly
    // increasing.
    let mut hull: Vec<DistortionPoint> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            let cross = (b.d[0] - a.d[0]) * (p.d[1] - a.d[1]) - (b.d[1] - a.d[1]) * (p.d[0] - a.d[0]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(Frontier { points: hull, label: String::new(), params: Vec::new() })
}

// Frontier height at horizontal coordinate x: the piecewise-linear
// interpolation through the vertices, +inf left of the range, and the last
// vertex height right of it.
fn interp_height(f: &Frontier, x: f64) -> f64 {
    let pts = f.points();
    if pts.is_empty() {
        return f64::INFINITY;
    }
    if x < pts[0].d[0] {
        return f64::INFINITY;
    }
    let last = pts.len() - 1;
    if x >= pts[last].d[0] {
        return pts[last].d[1];
    }
    let mut lo = 0;
    let mut hi = last;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if pts[mid].d[0] <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (&pts[lo], &pts[hi]);
    if x == a.d[0] {
        return a.d[1];
    }
    a.d[1] + (b.d[1] - a.d[1]) * (x - a.d[0]) / (b.d[0] - a.d[0])
}

/// True iff `p` lies in the closed upper-right region bounded by the
/// frontier's piecewise-linear interpolation. Points left of the frontier's
/// horizontal range are outside; points right of it compare against the
/// last vertex height.
pub fn frontier_contains(f: &Frontier, p: &DistortionPoint) -> Result<bool, RegionError> {
    if p.dim() != 2 {
        return Err(RegionError::UnsupportedDimension);
    }
    Ok(p.d[1] >= interp_height(f, p.d[0]))
}

/// Containment diagnostic from [`frontier_compare`]. `max_violation` is the
/// largest signed drop of an `a` sample below `b`'s interpolated height
/// (positive means `a` leaves `b`'s region); `at` is the worst sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub a_inside_b: bool,
    pub max_violation: f64,
    pub at: DistortionPoint,
}

/// Samples `a`'s vertices plus `samples` evenly spaced interior points per
/// chord and measures each against `b` in the second coordinate. Left of
/// `b`'s range the first vertex height is used as the reference.
pub fn frontier_compare(a: &Frontier, b: &Frontier, samples: usize) -> CompareReport {
    let violation = |p: &DistortionPoint| -> f64 {
        let bp = b.points();
        if bp.is_empty() {
            return f64::NEG_INFINITY;
        }
        let reference = if p.d[0] < bp[0].d[0] { bp[0].d[1] } else { interp_height(b, p.d[0]) };
        reference - p.d[1]
    };
    let mut worst = f64::NEG_INFINITY;
    let mut at = a.points().first().cloned().unwrap_or_else(|| DistortionPoint::pair(0.0, 0.0));
    let mut consider = |p: DistortionPoint| {
        let v = violation(&p);
        if v > worst {
            worst = v;
            at = p;
        }
    };
    for p in a.points() {
        consider(p.clone());
    }
    let m = samples.max(1);
    for w in a.points().windows(2) {
        for i in 1..=m {
            let t = i as f64 / (m + 1) as f64;
            consider(DistortionPoint::pair(
                w[0].d[0] + t * (w[1].d[0] - w[0].d[0]),
                w[0].d[1] + t * (w[1].d[1] - w[0].d[1]),
            ));
        }
    }
    if a.points().is_empty() {
        worst = 0.0;
    }
    CompareReport { a_inside_b: worst <= 0.0, max_violation: worst, at }
}

/// Writes `D1,D2[,...]` CSV with one vertex per row at full double
/// precision (17 significant digits), LF line endings.
pub fn write_csv<W: Write>(f: &Frontier, mut w: W) -> io::Result<()> {
    let dim = f.points().first().map_or(2, DistortionPoint::dim);
    let header: Vec<String> = (1..=dim).map(|i| format!("D{i}")).collect();
    w.write_all(header.join(",").as_bytes())?;
    w.write_all(b"\n")?;
    for p in f.points() {
        let row: Vec<String> = p.d.iter().map(|v| format!("{v:.16e}")).collect();
        w.write_all(row.join(",").as_bytes())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Traces the lower boundary of a membership region: for each `d1` in
/// `d1_values`, bisects the minimal `d2` in `[d2_lo, d2_hi]` accepted by
/// `member` (monotone in `d2`), then Pareto-reduces. `d1` values whose whole
/// `d2` range is rejected are skipped. Emitted heights take the rejected
/// side of the final bracket, so the trace never overstates the region's
/// boundary in containment comparisons.
pub fn bisect_frontier<F>(
    d1_values: &[f64],
    d2_lo: f64,
    d2_hi: f64,
    rel_tol: f64,
    member: F,
) -> Result<Frontier, RegionError>
where
    F: Fn(&DistortionPoint) -> bool,
{
    let mut cloud = Vec::new();
    for &d1 in d1_values {
        if !member(&DistortionPoint::pair(d1, d2_hi)) {
            continue;
        }
        if member(&DistortionPoint::pair(d1, d2_lo)) {
            cloud.push(DistortionPoint::pair(d1, d2_lo));
            continue;
        }
        let (mut lo, mut hi) = (d2_lo, d2_hi);
        while hi - lo > rel_tol * hi {
            let mid = 0.5 * (lo + hi);
            if member(&DistortionPoint::pair(d1, mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        cloud.push(DistortionPoint::pair(d1, lo));
    }
    if cloud.is_empty() {
        return Err(RegionError::Empty);
    }
    pareto_reduce(&cloud)
}
