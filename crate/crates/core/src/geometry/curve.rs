use serde::{Deserialize, Serialize};

use super::{Point, SimplePolygon};
use crate::error::{Error, Result};

/// Gap below which two visible arc pieces are considered one.
const MERGE_GAP: f64 = 1e-9;

/// A polyline inside a polygon, parameterized by arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    waypoints: Vec<Point>,
    cumulative: Vec<f64>,
}

impl Curve {
    /// Builds a curve and checks every waypoint and segment against `poly`.
    pub fn new(waypoints: Vec<Point>, poly: &SimplePolygon) -> Result<Self> {
        if waypoints.is_empty() {
            return Err(Error::Domain("curve needs at least one waypoint".into()));
        }
        for (i, &w) in waypoints.iter().enumerate() {
            poly.require(w, &format!("curve waypoint {i}"))?;
        }
        let mut cumulative = vec![0.0];
        for (i, w) in waypoints.windows(2).enumerate() {
            let len = w[0].dist(w[1]);
            if len <= poly.eps() {
                return Err(Error::Domain(format!(
                    "curve waypoints {i} and {} coincide",
                    i + 1
                )));
            }
            if !poly.sees_unchecked(w[0], w[1]) {
                return Err(Error::Domain(format!(
                    "curve segment {i} leaves the polygon"
                )));
            }
            cumulative.push(cumulative[i] + len);
        }
        Ok(Curve {
            waypoints,
            cumulative,
        })
    }

    pub fn waypoints(&self) -> &[Point] {
        &self.waypoints
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Point at arc length `s`, clamped to the curve.
    pub fn point_at(&self, s: f64) -> Point {
        if self.waypoints.len() == 1 {
            return self.waypoints[0];
        }
        let s = s.clamp(0.0, self.length());
        let k = match self.cumulative.partition_point(|&c| c <= s) {
            0 => 0,
            k => (k - 1).min(self.waypoints.len() - 2),
        };
        let seg = self.cumulative[k + 1] - self.cumulative[k];
        self.waypoints[k].lerp(self.waypoints[k + 1], (s - self.cumulative[k]) / seg)
    }

    /// The part of the curve between arc lengths `a <= b`, as a polyline.
    pub fn subcurve(&self, a: f64, b: f64) -> Vec<Point> {
        let mut pts = vec![self.point_at(a)];
        for (i, &c) in self.cumulative.iter().enumerate() {
            if c > a && c < b {
                pts.push(self.waypoints[i]);
            }
        }
        if b > a {
            pts.push(self.point_at(b));
        }
        pts
    }
}

/// Arc-length interval of the curve that sees one target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveInterval {
    pub target_id: usize,
    pub s_left: f64,
    pub s_right: f64,
}

impl CurveInterval {
    pub fn contains(&self, s: f64, tol: f64) -> bool {
        s >= self.s_left - tol && s <= self.s_right + tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveVisibility {
    Empty,
    Connected(CurveInterval),
    /// Disjoint visible pieces, in curve order.
    Violated(Vec<(f64, f64)>),
}

/// Visible arc-length set of `x` on `curve`, exact up to the polygon
/// tolerance.
///
/// Along a curve segment, visibility of `x` can only change where the
/// sight line sweeps across a polygon vertex, so each segment is split at
/// those parameters and every piece and split point is tested once.
pub fn curve_interval(poly: &SimplePolygon, curve: &Curve, x: Point) -> Result<CurveVisibility> {
    Ok(classify(visible_pieces(poly, curve, x)?, 0))
}

pub(crate) fn classify(pieces: Vec<(f64, f64)>, target_id: usize) -> CurveVisibility {
    match pieces.len() {
        0 => CurveVisibility::Empty,
        1 => CurveVisibility::Connected(CurveInterval {
            target_id,
            s_left: pieces[0].0,
            s_right: pieces[0].1,
        }),
        _ => CurveVisibility::Violated(pieces),
    }
}

/// Maximal visible arc-length pieces of the curve from `x`, in curve order.
pub fn visible_pieces(poly: &SimplePolygon, curve: &Curve, x: Point) -> Result<Vec<(f64, f64)>> {
    poly.require(x, "target")?;
    let wp = curve.waypoints();
    let cum = curve.cumulative();
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    let mut push = |a: f64, b: f64| match pieces.last_mut() {
        Some(last) if a - last.1 <= MERGE_GAP => last.1 = last.1.max(b),
        _ => pieces.push((a, b)),
    };
    if wp.len() == 1 {
        if poly.sees_unchecked(x, wp[0]) {
            push(0.0, 0.0);
        }
        return Ok(pieces);
    }
    for k in 0..wp.len() - 1 {
        let (a, b) = (wp[k], wp[k + 1]);
        let seg_len = cum[k + 1] - cum[k];
        let ab = b - a;
        let mut params = vec![0.0, 1.0];
        for &v in poly.vertices() {
            // a + u (b - a) collinear with x and v
            let dv = v - x;
            if dv.norm() <= poly.eps() {
                continue;
            }
            let denom = ab.cross(dv);
            if denom.abs() <= 1e-15 * ab.norm() * dv.norm() {
                continue;
            }
            let u = (x - a).cross(dv) / denom;
            if u > 0.0 && u < 1.0 {
                params.push(u);
            }
        }
        params.sort_by(f64::total_cmp);
        params.dedup_by(|p, q| (*p - *q) * seg_len <= 1e-12);
        let at = |u: f64| poly.sees_unchecked(x, a.lerp(b, u));
        let seen: Vec<bool> = params.iter().map(|&u| at(u)).collect();
        for i in 0..params.len() {
            let s = cum[k] + params[i] * seg_len;
            if seen[i] {
                push(s, s);
            }
            if i + 1 < params.len() {
                let mid = 0.5 * (params[i] + params[i + 1]);
                if at(mid) {
                    push(s, cum[k] + params[i + 1] * seg_len);
                }
            }
        }
    }
    Ok(pieces)
}

/// Per-target chain-visibility classification.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub targets: Vec<CurveVisibility>,
    /// Targets lying on the polygon boundary (accepted, but flagged).
    pub boundary_targets: Vec<usize>,
}

impl ChainReport {
    /// No target is violated and none is unseen.
    pub fn pass(&self) -> bool {
        self.targets
            .iter()
            .all(|t| matches!(t, CurveVisibility::Connected(_)))
    }

    pub fn violated(&self) -> Vec<usize> {
        self.indices(|t| matches!(t, CurveVisibility::Violated(_)))
    }

    pub fn empty(&self) -> Vec<usize> {
        self.indices(|t| matches!(t, CurveVisibility::Empty))
    }

    fn indices(&self, f: impl Fn(&CurveVisibility) -> bool) -> Vec<usize> {
        self.targets
            .iter()
            .enumerate()
            .filter(|(_, t)| f(t))
            .map(|(i, _)| i)
            .collect()
    }

    /// The intervals, when the report passes.
    pub fn intervals(&self) -> Option<Vec<CurveInterval>> {
        self.targets
            .iter()
            .map(|t| match t {
                CurveVisibility::Connected(c) => Some(*c),
                _ => None,
            })
            .collect()
    }
}

pub fn check_chain_visibility(
    poly: &SimplePolygon,
    curve: &Curve,
    targets: &[Point],
) -> Result<ChainReport> {
    let mut out = Vec::with_capacity(targets.len());
    let mut boundary_targets = Vec::new();
    for (i, &x) in targets.iter().enumerate() {
        if poly.on_boundary(x) {
            boundary_targets.push(i);
        }
        out.push(classify(visible_pieces(poly, curve, x)?, i));
    }
    Ok(ChainReport {
        targets: out,
        boundary_targets,
    })
}
