use std::collections::HashMap;

use super::curve::SampledCurve;

/// A multiple point of the guide axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub q1_a: f64,
    pub q1_b: f64,
    pub point: [f64; 3],
    /// Set when the two segments overlap collinearly instead of crossing.
    pub degenerate: bool,
}

type Cell = (i64, i64, i64);

fn bucket_segments(pts: &[[f64; 3]], cell: f64, dims: usize) -> HashMap<Cell, Vec<usize>> {
    let mut map: HashMap<Cell, Vec<usize>> = HashMap::new();
    let idx = |v: f64| (v / cell).floor() as i64;
    for i in 0..pts.len() - 1 {
        let (a, b) = (pts[i], pts[i + 1]);
        let lo: Vec<i64> = (0..3).map(|d| idx(a[d].min(b[d]))).collect();
        let hi: Vec<i64> = (0..3).map(|d| idx(a[d].max(b[d]))).collect();
        let zr = if dims == 3 { lo[2]..=hi[2] } else { 0..=0 };
        for cx in lo[0]..=hi[0] {
            for cy in lo[1]..=hi[1] {
                for cz in zr.clone() {
                    map.entry((cx, cy, cz)).or_default().push(i);
                }
            }
        }
    }
    map
}

fn cross2(o: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Intersection of planar segments `p0p1` and `q0q1`: parameters along each.
fn segment_intersection(p0: [f64; 3], p1: [f64; 3], q0: [f64; 3], q1: [f64; 3]) -> Option<(f64, f64, bool)> {
    let r = [p1[0] - p0[0], p1[1] - p0[1]];
    let s = [q1[0] - q0[0], q1[1] - q0[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    let qp = [q0[0] - p0[0], q0[1] - p0[1]];
    let scale = (r[0].hypot(r[1])) * (s[0].hypot(s[1]));
    if denom.abs() <= 1e-14 * scale {
        // Parallel: report collinear overlap as a degenerate crossing.
        if cross2(p0, p1, q0).abs() > 1e-12 * scale.max(1e-300) {
            return None;
        }
        let rr = r[0] * r[0] + r[1] * r[1];
        let t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr;
        let t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        if lo > hi {
            return None;
        }
        let t = 0.5 * (lo + hi);
        let ss = s[0] * s[0] + s[1] * s[1];
        let u = ((p0[0] + t * r[0] - q0[0]) * s[0] + (p0[1] + t * r[1] - q0[1]) * s[1]) / ss;
        return Some((t, u.clamp(0.0, 1.0), true));
    }
    let t = (qp[0] * s[1] - qp[1] * s[0]) / denom;
    let u = (qp[0] * r[1] - qp[1] * r[0]) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, u, false))
    } else {
        None
    }
}

/// Closest approach of two 3D segments: parameters and distance.
fn segment_distance_3d(p0: [f64; 3], p1: [f64; 3], q0: [f64; 3], q1: [f64; 3]) -> (f64, f64, f64) {
    let d1 = [p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]];
    let d2 = [q1[0] - q0[0], q1[1] - q0[1], q1[2] - q0[2]];
    let r = [p0[0] - q0[0], p0[1] - q0[1], p0[2] - q0[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let (a, e, f) = (dot(d1, d1), dot(d2, d2), dot(d2, r));
    let (b, c) = (dot(d1, d2), dot(d1, r));
    let denom = a * e - b * b;
    let mut s = if denom > 1e-300 {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    let pa = [p0[0] + s * d1[0], p0[1] + s * d1[1], p0[2] + s * d1[2]];
    let pb = [q0[0] + t * d2[0], q0[1] + t * d2[1], q0[2] + t * d2[2]];
    let dd = [pa[0] - pb[0], pa[1] - pb[1], pa[2] - pb[2]];
    (s, t, dot(dd, dd).sqrt())
}

/// All multiple points of the sampled axis.
///
/// Planar curves report every crossing of non-adjacent polyline segments;
/// crossings closer than two samples in arc length count as adjacent. Space
/// curves only report segments that come within `1e-6·step` of each other.
pub fn detect_self_intersections(curve: &SampledCurve) -> Vec<Crossing> {
    let n = curve.len();
    if n < 4 {
        return Vec::new();
    }
    let step = curve.step();
    let pts = &curve.points;
    let q = &curve.arc_q1;
    let min_separation = 2.0 * step;
    let cell = 4.0 * step.max(1e-12);
    let dims = if curve.is_planar { 2 } else { 3 };
    let buckets = bucket_segments(pts, cell, dims);
    let tol3 = 1e-6 * step;

    let mut found: Vec<Crossing> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for segs in buckets.values() {
        for (ai, &i) in segs.iter().enumerate() {
            for &j in &segs[ai + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if j <= i + 1 || !seen.insert((i, j)) {
                    continue;
                }
                let hit = if dims == 2 {
                    segment_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1])
                } else {
                    let (s, t, d) = segment_distance_3d(pts[i], pts[i + 1], pts[j], pts[j + 1]);
                    (d <= tol3).then_some((s, t, false))
                };
                let Some((t, u, degenerate)) = hit else { continue };
                let qa = q[i] + t * (q[i + 1] - q[i]);
                let qb = q[j] + u * (q[j + 1] - q[j]);
                if (qb - qa).abs() < min_separation {
                    continue;
                }
                let p = pts[i];
                let p1 = pts[i + 1];
                found.push(Crossing {
                    q1_a: qa,
                    q1_b: qb,
                    point: [
                        p[0] + t * (p1[0] - p[0]),
                        p[1] + t * (p1[1] - p[1]),
                        p[2] + t * (p1[2] - p[2]),
                    ],
                    degenerate,
                });
            }
        }
    }
    found.sort_by(|a, b| a.q1_a.total_cmp(&b.q1_a).then(a.q1_b.total_cmp(&b.q1_b)));
    // A crossing exactly at a shared vertex is seen by up to four segment pairs.
    let mut merged: Vec<Crossing> = Vec::new();
    for c in found {
        let dup = merged
            .iter()
            .any(|m| (m.q1_a - c.q1_a).abs() <= min_separation && (m.q1_b - c.q1_b).abs() <= min_separation);
        if !dup {
            merged.push(c);
        }
    }
    merged
}
