//! Approximate min-max coverage of a whole street polygon from a curve.
//!
//! The polygon is represented by a finite witness set: its vertices, points
//! sampled along every edge, the boundary points cut off by extending the
//! edges at reflex vertices (window endpoints and midpoints), and a few
//! seeded interior points. Every witness sees one interval of the curve.
//! Limit points and the greedy viewpoint chain `G*` are computed on those
//! intervals, and a guess is accepted when the chosen viewpoints stab all of
//! them.

use log::{debug, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{PathOnCurve, RoutePlan};
use crate::error::{Error, Result};
use crate::geometry::{
    proper_crossing, sample_interior, visible_pieces, Curve, Point, SimplePolygon,
};

/// Gap for "strictly to the right of" along the curve.
pub const RIGHT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct StreetInstance {
    pub polygon: SimplePolygon,
    pub curve: Curve,
    pub m: usize,
    pub t_m: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    /// Points per edge, endpoints excluded.
    pub edge_samples: usize,
    pub interior_samples: usize,
    pub seed: u64,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            edge_samples: 6,
            interior_samples: 64,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Success,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuessResult {
    pub t_hat: f64,
    pub status: Status,
    pub paths: Vec<PathOnCurve>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreetSolution {
    pub plan: RoutePlan,
    /// The accepted guess; every path costs at most four times this.
    pub t_hat: f64,
    pub g_star: Vec<f64>,
    /// Every evaluated guess, in order.
    pub trace: Vec<(f64, Status)>,
}

/// Witness points of `poly`.
pub fn street_witnesses(poly: &SimplePolygon, opts: &WitnessOptions) -> Vec<Point> {
    let n = poly.len();
    let mut pts: Vec<Point> = poly.vertices().to_vec();
    for (a, b) in poly.edges() {
        for k in 1..=opts.edge_samples {
            pts.push(a.lerp(b, k as f64 / (opts.edge_samples + 1) as f64));
        }
    }
    for i in (0..n).filter(|&i| poly.is_reflex(i)) {
        let v = poly.vertex(i);
        for nb in [poly.vertex(i + n - 1), poly.vertex(i + 1)] {
            if let Some(hit) = window_hit(poly, v, v - nb) {
                pts.push(hit);
                pts.push(v.lerp(hit, 0.5));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.interior_samples {
        pts.push(sample_interior(poly, &mut rng));
    }
    pts
}

/// First boundary point hit by the ray from vertex `v` along `dir`, when
/// the ray enters the interior.
fn window_hit(poly: &SimplePolygon, v: Point, dir: Point) -> Option<Point> {
    let (lo, hi) = poly.bbox();
    let d = dir * (1.0 / dir.norm());
    let far = v + d * (2.0 * lo.dist(hi) + 1.0);
    let step = 1e-6 * (1.0 + lo.dist(hi));
    if !poly.contains(v + d * step) || poly.on_boundary(v + d * step) {
        return None;
    }
    let eps = poly.eps();
    let mut best = 1.0f64;
    for (a, b) in poly.edges() {
        if let Some(t) = proper_crossing(v, far, a, b, eps) {
            best = best.min(t);
        }
    }
    // a vertex lying on the ray stops it as well
    for &w in poly.vertices() {
        let rel = w - v;
        let t = rel.dot(d);
        if t > eps && d.cross(rel).abs() <= eps {
            best = best.min(t / v.dist(far));
        }
    }
    (best < 1.0).then(|| v.lerp(far, best))
}

/// Witness intervals on the curve, as `(left, right)` arc lengths.
#[derive(Clone, Debug)]
pub struct StreetModel {
    pub witnesses: Vec<Point>,
    pub intervals: Vec<(f64, f64)>,
    length: f64,
}

impl StreetModel {
    /// Fails with an infeasibility error when some witness sees no point
    /// of the curve.
    pub fn new(poly: &SimplePolygon, curve: &Curve, opts: &WitnessOptions) -> Result<Self> {
        let witnesses = street_witnesses(poly, opts);
        let mut intervals = Vec::with_capacity(witnesses.len());
        let mut unseen = Vec::new();
        for (k, &w) in witnesses.iter().enumerate() {
            let pieces = visible_pieces(poly, curve, w)?;
            match pieces.len() {
                0 => unseen.push(k),
                1 => intervals.push(pieces[0]),
                p => {
                    warn!("witness {k} at {w:?} sees {p} disjoint curve pieces; keeping the first");
                    intervals.push(pieces[0]);
                }
            }
        }
        if !unseen.is_empty() {
            let shown: Vec<Point> = unseen.iter().take(5).map(|&k| witnesses[k]).collect();
            return Err(Error::Infeasible(format!(
                "{} polygon points are not visible from the curve, e.g. {shown:?}",
                unseen.len()
            )));
        }
        Ok(StreetModel {
            witnesses,
            intervals,
            length: curve.length(),
        })
    }

    /// Built from explicit intervals.
    pub fn from_intervals(intervals: Vec<(f64, f64)>, length: f64) -> Self {
        StreetModel {
            witnesses: Vec::new(),
            intervals,
            length,
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// First right endpoint beyond `p` of a witness not seen from the
    /// prefix ending at `p`; `None` means end of curve.
    pub fn limit_point(&self, p: f64) -> Option<f64> {
        self.intervals
            .iter()
            .filter(|&&(l, r)| l > p + RIGHT_TOL && r > p + RIGHT_TOL)
            .map(|&(_, r)| r)
            .min_by(f64::total_cmp)
    }

    /// The smallest right endpoint: the prefix up to it sees no more than
    /// its last point does.
    pub fn first_viewpoint(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(_, r)| r)
            .min_by(f64::total_cmp)
            .unwrap_or(self.length)
    }

    /// Greedy chain `g1, lp(g1), lp(lp(g1)), ...`.
    pub fn min_viewpoints(&self) -> Vec<f64> {
        let mut g = vec![self.first_viewpoint()];
        while let Some(next) = self.limit_point(*g.last().unwrap()) {
            g.push(next);
        }
        g
    }

    pub fn covers(&self, viewpoints: &[f64]) -> bool {
        self.uncovered(viewpoints).is_empty()
    }

    /// Indices of witnesses whose interval contains none of `viewpoints`.
    pub fn uncovered(&self, viewpoints: &[f64]) -> Vec<usize> {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, &(l, r))| {
                !viewpoints
                    .iter()
                    .any(|&s| s >= l - RIGHT_TOL && s <= r + RIGHT_TOL)
            })
            .map(|(k, _)| k)
            .collect()
    }

    /// One pass of the path builder for guess `t_hat`.
    pub fn subroutine(&self, g_star: &[f64], t_m: f64, t_hat: f64, m: usize) -> GuessResult {
        let cap = (t_hat / t_m).ceil() as usize;
        let mut paths = Vec::with_capacity(m);
        let mut l = Some(g_star.first().copied().unwrap_or(self.length));
        for _ in 0..m {
            let Some(start) = l else { break };
            let mut r = (start + t_hat).min(self.length);
            let mut inner: Vec<f64> = g_star
                .iter()
                .copied()
                .filter(|&g| g > start + RIGHT_TOL && g < r - RIGHT_TOL)
                .collect();
            if inner.len() as f64 > t_hat / t_m {
                inner.truncate(cap);
                r = *inner.last().unwrap();
            }
            let mut vps = vec![start];
            vps.extend(inner);
            if r > *vps.last().unwrap() + RIGHT_TOL {
                vps.push(r);
            }
            paths.push(PathOnCurve::new(start, r, vps, t_m));
            l = self.limit_point(r);
        }
        let all: Vec<f64> = paths
            .iter()
            .flat_map(|p| p.viewpoints.iter().copied())
            .collect();
        let status = if self.covers(&all) {
            Status::Success
        } else {
            Status::Failure
        };
        GuessResult {
            t_hat,
            status,
            paths,
        }
    }

    /// Binary search over guesses in `[t_m, length + (|G*| + 2) t_m]`.
    pub fn solve(&self, t_m: f64, m: usize, rel_tol: f64) -> Result<StreetSolution> {
        check_params(t_m, m, rel_tol)?;
        let g_star = self.min_viewpoints();
        let mut trace = Vec::new();
        let eval = |t: f64, trace: &mut Vec<(f64, Status)>| {
            let g = self.subroutine(&g_star, t_m, t, m);
            debug!("guess {t}: {:?}", g.status);
            trace.push((t, g.status));
            g
        };
        let mut lo = t_m;
        let first = eval(lo, &mut trace);
        let best = if first.status == Status::Success {
            first
        } else {
            let mut hi = self.length + (g_star.len() + 2) as f64 * t_m;
            let mut best = eval(hi, &mut trace);
            if best.status != Status::Success {
                return Err(Error::Infeasible(
                    "a single sweep over every viewpoint fails to cover the witnesses".into(),
                ));
            }
            while hi - lo > rel_tol * lo {
                let mid = 0.5 * (lo + hi);
                let g = eval(mid, &mut trace);
                if g.status == Status::Success {
                    hi = mid;
                    best = g;
                } else {
                    lo = mid;
                }
            }
            best
        };
        Ok(StreetSolution {
            t_hat: best.t_hat,
            plan: RoutePlan::from_paths(best.paths, m),
            g_star,
            trace,
        })
    }
}

fn check_params(t_m: f64, m: usize, rel_tol: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if !(t_m.is_finite() && t_m > 0.0) {
        return Err(Error::Domain(format!("t_m must be positive, got {t_m}")));
    }
    if !(rel_tol > 0.0 && rel_tol < 0.5) {
        return Err(Error::Domain(format!(
            "rel_tol must lie in (0, 0.5), got {rel_tol}"
        )));
    }
    Ok(())
}

pub fn limit_point(poly: &SimplePolygon, curve: &Curve, p: f64) -> Result<Option<f64>> {
    Ok(StreetModel::new(poly, curve, &WitnessOptions::default())?.limit_point(p))
}

pub fn first_viewpoint(poly: &SimplePolygon, curve: &Curve) -> Result<f64> {
    Ok(StreetModel::new(poly, curve, &WitnessOptions::default())?.first_viewpoint())
}

pub fn min_viewpoints(poly: &SimplePolygon, curve: &Curve) -> Result<Vec<f64>> {
    Ok(StreetModel::new(poly, curve, &WitnessOptions::default())?.min_viewpoints())
}

pub fn street_subroutine(inst: &StreetInstance, t_hat: f64) -> Result<GuessResult> {
    check_params(inst.t_m, inst.m, 0.1)?;
    if !(t_hat > 0.0) {
        return Err(Error::Domain(format!(
            "guess must be positive, got {t_hat}"
        )));
    }
    let model = StreetModel::new(&inst.polygon, &inst.curve, &WitnessOptions::default())?;
    Ok(model.subroutine(&model.min_viewpoints(), inst.t_m, t_hat, inst.m))
}

pub fn solve_street(inst: &StreetInstance, rel_tol: f64) -> Result<StreetSolution> {
    check_params(inst.t_m, inst.m, rel_tol)?;
    StreetModel::new(&inst.polygon, &inst.curve, &WitnessOptions::default())?
        .solve(inst.t_m, inst.m, rel_tol)
}
