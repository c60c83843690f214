//! Exact min-max planning on a chain-visible curve.
//!
//! Each target sees a single arc-length interval of the curve. A robot path
//! is a sub-interval `[i, j]` of the curve carrying a set of viewpoints; its
//! cost is its length plus `t_m` per viewpoint. Optimal paths start and end
//! at interval endpoints, so a dynamic program over ordered pairs of
//! endpoints finds the best plan for `m` robots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    check_chain_visibility, Curve, CurveInterval, CurveVisibility, Point, SimplePolygon,
};

/// Tolerance used to merge and compare arc-length positions.
pub const ARC_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ChainInstance {
    pub polygon: SimplePolygon,
    pub curve: Curve,
    pub targets: Vec<Point>,
    pub m: usize,
    pub t_m: f64,
}

/// One robot's share of the curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathOnCurve {
    pub s_start: f64,
    pub s_end: f64,
    /// Sorted arc-length positions; empty for an idle robot.
    pub viewpoints: Vec<f64>,
    pub cost: f64,
}

impl PathOnCurve {
    pub fn new(s_start: f64, s_end: f64, viewpoints: Vec<f64>, t_m: f64) -> Self {
        let cost = (s_end - s_start) + viewpoints.len() as f64 * t_m;
        PathOnCurve {
            s_start,
            s_end,
            viewpoints,
            cost,
        }
    }

    pub fn idle() -> Self {
        PathOnCurve {
            s_start: 0.0,
            s_end: 0.0,
            viewpoints: Vec::new(),
            cost: 0.0,
        }
    }

    pub fn is_idle(&self) -> bool {
        self.viewpoints.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.s_end - self.s_start
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoutePlan {
    /// Exactly `m` paths, busy ones first and ordered along the curve.
    pub paths: Vec<PathOnCurve>,
    pub makespan: f64,
}

impl RoutePlan {
    pub fn from_paths(mut paths: Vec<PathOnCurve>, m: usize) -> Self {
        paths.resize(m.max(paths.len()), PathOnCurve::idle());
        let makespan = paths.iter().map(|p| p.cost).fold(0.0, f64::max);
        RoutePlan { paths, makespan }
    }

    pub fn viewpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.paths.iter().flat_map(|p| p.viewpoints.iter().copied())
    }

    /// Ids of intervals containing no viewpoint of the plan.
    pub fn uncovered(&self, intervals: &[CurveInterval], tol: f64) -> Vec<usize> {
        intervals
            .iter()
            .filter(|iv| !self.viewpoints().any(|s| iv.contains(s, tol)))
            .map(|iv| iv.target_id)
            .collect()
    }
}

fn dedup_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|b, a| *b - *a <= ARC_TOL);
    v
}

/// Sorted distinct right endpoints `R` and left endpoints `L`.
pub fn candidate_endpoints(intervals: &[CurveInterval]) -> (Vec<f64>, Vec<f64>) {
    (
        dedup_sorted(intervals.iter().map(|c| c.s_right).collect()),
        dedup_sorted(intervals.iter().map(|c| c.s_left).collect()),
    )
}

/// Whether some interval lies strictly between `a` and `b`.
pub fn blocking_indicator(intervals: &[CurveInterval], a: f64, b: f64) -> bool {
    intervals
        .iter()
        .any(|c| c.s_left > a + ARC_TOL && c.s_right < b - ARC_TOL)
}

/// Fewest viewpoints on `[i, j]` that include both ends and stab every
/// interval, and the resulting path cost.
pub fn optimal_single_path(
    i: f64,
    j: f64,
    intervals: &[CurveInterval],
    t_m: f64,
) -> Result<(Vec<f64>, f64)> {
    if i > j {
        return Err(Error::Domain(format!(
            "path start {i} lies after its end {j}"
        )));
    }
    let mut inner = Vec::new();
    for c in intervals {
        if c.s_right < i - ARC_TOL || c.s_left > j + ARC_TOL {
            return Err(Error::Domain(format!(
                "interval of target {} misses [{i}, {j}]",
                c.target_id
            )));
        }
        if !c.contains(i, ARC_TOL) && !c.contains(j, ARC_TOL) {
            inner.push((c.s_left, c.s_right));
        }
    }
    let vps = stab(i, j, inner);
    let cost = (j - i) + vps.len() as f64 * t_m;
    Ok((vps, cost))
}

/// Greedy stabbing of intervals strictly inside `(i, j)`: always take the
/// smallest right endpoint of an interval not yet hit.
fn stab(i: f64, j: f64, mut inner: Vec<(f64, f64)>) -> Vec<f64> {
    inner.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut vps = vec![i];
    let mut last = f64::NEG_INFINITY;
    for (l, r) in inner {
        if l > last + ARC_TOL {
            last = r;
            vps.push(r);
        }
    }
    if j - i > ARC_TOL {
        vps.push(j);
    }
    vps
}

/// Optimal plan for `m` robots directly from target intervals, `None` when
/// `m = 0` leaves targets uncovered.
pub fn plan_from_intervals(intervals: &[CurveInterval], m: usize, t_m: f64) -> Option<RoutePlan> {
    if intervals.is_empty() {
        return Some(RoutePlan::from_paths(Vec::new(), m));
    }
    if m == 0 {
        return None;
    }
    Some(Table::new(intervals, t_m).solve(m))
}

/// Checks chain visibility, then runs the dynamic program.
pub fn solve_chain(inst: &ChainInstance) -> Result<RoutePlan> {
    if inst.m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if !(inst.t_m.is_finite() && inst.t_m >= 0.0) {
        return Err(Error::Domain(format!(
            "t_m must be finite and nonnegative, got {}",
            inst.t_m
        )));
    }
    let intervals = chain_intervals(&inst.polygon, &inst.curve, &inst.targets)?;
    Ok(plan_from_intervals(&intervals, inst.m, inst.t_m).expect("m >= 1 always yields a plan"))
}

/// Target intervals, or the first violation or unseen target as an error.
pub fn chain_intervals(
    poly: &SimplePolygon,
    curve: &Curve,
    targets: &[Point],
) -> Result<Vec<CurveInterval>> {
    let report = check_chain_visibility(poly, curve, targets)?;
    for (t, vis) in report.targets.iter().enumerate() {
        if let CurveVisibility::Violated(pieces) = vis {
            return Err(Error::ChainViolation {
                target: t,
                pieces: pieces.len(),
            });
        }
    }
    let empty = report.empty();
    if !empty.is_empty() {
        return Err(Error::Infeasible(format!(
            "targets {empty:?} see no point of the curve"
        )));
    }
    Ok(report.intervals().expect("all targets connected"))
}

#[derive(Clone, Copy)]
struct Cell {
    value: f64,
    /// Previous path `(i', j')`, or `None` for the first path.
    prev: Option<(usize, usize)>,
}

struct Table {
    pos: Vec<f64>,
    /// Interval endpoints as indices into `pos`.
    ends: Vec<(usize, usize)>,
    intervals: Vec<(f64, f64)>,
    t_m: f64,
}

impl Table {
    fn new(intervals: &[CurveInterval], t_m: f64) -> Self {
        let pos = dedup_sorted(
            intervals
                .iter()
                .flat_map(|c| [c.s_left, c.s_right])
                .collect(),
        );
        let index = |s: f64| {
            pos.iter()
                .position(|&p| (p - s).abs() <= ARC_TOL)
                .unwrap_or_else(|| pos.partition_point(|&p| p < s).min(pos.len() - 1))
        };
        let ends = intervals
            .iter()
            .map(|c| (index(c.s_left), index(c.s_right)))
            .collect();
        Table {
            ends,
            intervals: intervals.iter().map(|c| (c.s_left, c.s_right)).collect(),
            pos,
            t_m,
        }
    }

    /// Some interval lies strictly between positions `a < b`.
    fn blocked(&self, a: usize, b: usize) -> bool {
        self.ends.iter().any(|&(l, r)| l > a && r < b)
    }

    fn path(&self, i: usize, j: usize) -> (Vec<f64>, f64) {
        let inner = self
            .ends
            .iter()
            .zip(&self.intervals)
            .filter(|((l, r), _)| *l > i && *r < j)
            .map(|(_, &iv)| iv)
            .collect();
        let vps = stab(self.pos[i], self.pos[j], inner);
        let cost = (self.pos[j] - self.pos[i]) + vps.len() as f64 * self.t_m;
        (vps, cost)
    }

    fn solve(&self, m: usize) -> RoutePlan {
        let n = self.pos.len();
        let mut cost = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                cost[i][j] = self.path(i, j).1;
            }
        }
        let head_ok: Vec<bool> = (0..n)
            .map(|i| self.ends.iter().all(|&(_, r)| r >= i))
            .collect();
        let tail_ok: Vec<bool> = (0..n)
            .map(|j| self.ends.iter().all(|&(l, _)| l <= j))
            .collect();
        let mut blocked = vec![vec![false; n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                blocked[a][b] = self.blocked(a, b);
            }
        }

        // table[k][i][j]: best max cost of k + 1 paths, the last being [i, j]
        let mut table: Vec<Vec<Vec<Option<Cell>>>> = Vec::with_capacity(m);
        let mut first = vec![vec![None; n]; n];
        for i in (0..n).filter(|&i| head_ok[i]) {
            for j in i..n {
                first[i][j] = Some(Cell {
                    value: cost[i][j],
                    prev: None,
                });
            }
        }
        table.push(first);
        for k in 1..m {
            // best_end[j'] = best cell ending at j', with its start
            let best_end: Vec<Option<(f64, usize)>> = (0..n)
                .map(|jp| {
                    let mut best: Option<(f64, usize)> = None;
                    for ip in 0..=jp {
                        if let Some(c) = table[k - 1][ip][jp] {
                            if best.map_or(true, |(v, _)| c.value < v) {
                                best = Some((c.value, ip));
                            }
                        }
                    }
                    best
                })
                .collect();
            let mut layer = vec![vec![None; n]; n];
            for i in 0..n {
                let mut pred: Option<(f64, usize, usize)> = None;
                for jp in 0..i {
                    if blocked[jp][i] {
                        continue;
                    }
                    if let Some((v, ip)) = best_end[jp] {
                        if pred.map_or(true, |(pv, _, _)| v < pv) {
                            pred = Some((v, ip, jp));
                        }
                    }
                }
                let Some((pv, ip, jp)) = pred else { continue };
                for j in i..n {
                    layer[i][j] = Some(Cell {
                        value: pv.max(cost[i][j]),
                        prev: Some((ip, jp)),
                    });
                }
            }
            table.push(layer);
        }

        let mut best: Option<(f64, usize, usize, usize)> = None;
        for (k, layer) in table.iter().enumerate() {
            for i in 0..n {
                for j in (i..n).filter(|&j| tail_ok[j]) {
                    if let Some(c) = layer[i][j] {
                        if best.map_or(true, |(v, ..)| c.value < v) {
                            best = Some((c.value, k, i, j));
                        }
                    }
                }
            }
        }
        let (_, mut k, mut i, mut j) =
            best.expect("a single path over the whole range is feasible");
        let mut paths = Vec::new();
        loop {
            let (vps, _) = self.path(i, j);
            paths.push(PathOnCurve::new(self.pos[i], self.pos[j], vps, self.t_m));
            match table[k][i][j].and_then(|c| c.prev) {
                Some((ip, jp)) => {
                    k -= 1;
                    i = ip;
                    j = jp;
                }
                None => break,
            }
        }
        paths.reverse();
        RoutePlan::from_paths(paths, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes::*;

    fn iv(id: usize, l: f64, r: f64) -> CurveInterval {
        CurveInterval {
            target_id: id,
            s_left: l,
            s_right: r,
        }
    }

    #[test]
    fn endpoints_read_off() {
        assert_eq!(
            candidate_endpoints(&[iv(0, 0.0, 1.0), iv(1, 2.0, 3.0)]),
            (vec![1.0, 3.0], vec![0.0, 2.0])
        );
        assert_eq!(
            candidate_endpoints(&[iv(0, 2.0, 5.0)]),
            (vec![5.0], vec![2.0])
        );
        assert_eq!(
            candidate_endpoints(&[iv(0, 0.0, 4.0), iv(1, 1.0, 3.0)]),
            (vec![3.0, 4.0], vec![0.0, 1.0])
        );
    }

    #[test]
    fn blocking_is_strict() {
        assert!(blocking_indicator(&[iv(0, 2.0, 3.0)], 1.0, 4.0));
        assert!(!blocking_indicator(&[iv(0, 2.0, 3.0)], 2.0, 3.0));
        assert!(!blocking_indicator(&[iv(0, 0.0, 5.0)], 1.0, 4.0));
    }

    #[test]
    fn single_path_examples() {
        let (v, c) =
            optimal_single_path(1.0, 2.0, &[iv(0, 0.0, 1.0), iv(1, 2.0, 3.0)], 1.0).unwrap();
        assert_eq!((v, c), (vec![1.0, 2.0], 3.0));
        let (v, c) = optimal_single_path(1.0, 1.0, &[iv(0, 0.0, 1.0)], 1.0).unwrap();
        assert_eq!((v, c), (vec![1.0], 1.0));
        let three = [iv(0, 0.0, 1.0), iv(1, 2.0, 3.0), iv(2, 4.0, 5.0)];
        let (v, c) = optimal_single_path(0.0, 6.0, &three, 0.5).unwrap();
        // [0, 1] already contains the start, so only 3 and 5 are added
        assert_eq!(v, vec![0.0, 3.0, 5.0, 6.0]);
        assert_eq!(c, 8.0);
        assert!(optimal_single_path(1.0, 2.0, &[iv(0, 3.0, 4.0)], 1.0).is_err());
    }

    fn u_instance(m: usize) -> ChainInstance {
        let polygon = u_shape();
        let curve = Curve::new(vec![Point::new(0.5, 0.5), Point::new(2.5, 0.5)], &polygon).unwrap();
        ChainInstance {
            polygon,
            curve,
            targets: vec![Point::new(0.5, 1.9), Point::new(2.5, 1.9)],
            m,
            t_m: 1.0,
        }
    }

    #[test]
    fn u_two_robots_park() {
        let plan = solve_chain(&u_instance(2)).unwrap();
        assert!((plan.makespan - 1.0).abs() < 1e-9);
        assert!(plan
            .paths
            .iter()
            .all(|p| p.viewpoints.len() == 1 && p.length() == 0.0));
    }

    #[test]
    fn u_one_robot_walks_the_gap() {
        let plan = solve_chain(&u_instance(1)).unwrap();
        assert!((plan.makespan - (8.0 / 18.0 + 2.0)).abs() < 1e-9);
        let p = &plan.paths[0];
        assert!((p.s_start - 14.0 / 18.0).abs() < 1e-9);
        assert!((p.s_end - 22.0 / 18.0).abs() < 1e-9);
    }

    #[test]
    fn enough_robots_and_free_measurements_cost_nothing() {
        let ivs = [iv(0, 0.0, 1.0), iv(1, 2.0, 3.0), iv(2, 4.0, 5.0)];
        let plan = plan_from_intervals(&ivs, 3, 0.0).unwrap();
        assert_eq!(plan.makespan, 0.0);
        assert!(plan.uncovered(&ivs, 1e-9).is_empty());
    }

    #[test]
    fn idle_robots_are_padded() {
        let ivs = [iv(0, 0.0, 2.0)];
        let plan = plan_from_intervals(&ivs, 3, 1.0).unwrap();
        assert_eq!(plan.paths.len(), 3);
        assert_eq!(plan.paths.iter().filter(|p| p.is_idle()).count(), 2);
        assert_eq!(plan.makespan, 1.0);
    }

    #[test]
    fn errors() {
        let mut inst = u_instance(1);
        inst.targets.push(Point::new(5.0, 5.0));
        assert!(matches!(solve_chain(&inst), Err(Error::Domain(_))));
        let mut inst = u_instance(0);
        inst.m = 0;
        assert!(solve_chain(&inst).is_err());
        assert!(plan_from_intervals(&[iv(0, 0.0, 1.0)], 0, 1.0).is_none());
        assert_eq!(plan_from_intervals(&[], 0, 1.0).unwrap().makespan, 0.0);
    }
}
