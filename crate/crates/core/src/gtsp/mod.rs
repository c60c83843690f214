//! Multi-robot routing over discrete viewpoints.
//!
//! Each target defines the cluster of viewpoints that see it; robots must
//! jointly visit one viewpoint per cluster while minimizing the summed path
//! length. The instance is reduced to an asymmetric TSP by a multi-robot
//! Noon-Bean transformation and solved exactly.

mod noon_bean;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Geodesics, Point, SimplePolygon};
use crate::tsp::{self, karp_symmetrize, SolverOptions};

pub use noon_bean::{decode_tour, noon_bean_transform, ArcKind, NodeRole, NoonBeanGraph};

/// Where robots start and finish.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DepotScenario {
    /// Every robot starts and ends at one depot.
    SameDepot { depot: Point },
    /// Robot `i` starts at `starts[i]`; all end at `finish`.
    SameFinish { starts: Vec<Point>, finish: Point },
    /// One robot per depot; at the end every depot again holds one robot.
    Interchangeable { depots: Vec<Point> },
}

impl DepotScenario {
    /// Distinct depot locations, indexed by [`Self::start_of`] and
    /// [`Self::finish_of`].
    pub fn points(&self) -> Vec<Point> {
        match self {
            DepotScenario::SameDepot { depot } => vec![*depot],
            DepotScenario::SameFinish { starts, finish } => {
                let mut p = starts.clone();
                p.push(*finish);
                p
            }
            DepotScenario::Interchangeable { depots } => depots.clone(),
        }
    }

    /// Depot index where start copy `k` sits.
    pub fn start_of(&self, k: usize) -> usize {
        match self {
            DepotScenario::SameDepot { .. } => 0,
            _ => k,
        }
    }

    /// Depot index where finish copy `k` sits.
    pub fn finish_of(&self, k: usize) -> usize {
        match self {
            DepotScenario::SameDepot { .. } => 0,
            DepotScenario::SameFinish { starts, .. } => starts.len(),
            DepotScenario::Interchangeable { .. } => k,
        }
    }

    /// Whether a robot leaving start copy `k` unused may be matched with
    /// finish copy `l`. An unused robot stays where it started.
    pub fn idle_pair(&self, k: usize, l: usize) -> bool {
        match self {
            DepotScenario::Interchangeable { .. } => k == l,
            _ => true,
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let (what, got) = match self {
            DepotScenario::SameDepot { .. } => return Ok(()),
            DepotScenario::SameFinish { starts, .. } => ("start depots", starts.len()),
            DepotScenario::Interchangeable { depots } => ("depots", depots.len()),
        };
        if got != m {
            return Err(Error::Domain(format!(
                "{m} robots need {m} {what}, got {got}"
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            DepotScenario::SameDepot { .. } => "same-depot",
            DepotScenario::SameFinish { .. } => "same-finish",
            DepotScenario::Interchangeable { .. } => "interchangeable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GtspInstance {
    pub viewpoints: Vec<Point>,
    /// Index of each kept viewpoint in the caller's list.
    pub original_ids: Vec<usize>,
    /// Geodesic distances between kept viewpoints.
    pub cost: Vec<Vec<f64>>,
    /// Sorted viewpoint indices seeing each target.
    pub clusters: Vec<Vec<usize>>,
    pub scenario: DepotScenario,
    pub m: usize,
    /// `depot_cost[d][v]`: distance from depot `d` of `scenario.points()`
    /// to viewpoint `v`.
    pub depot_cost: Vec<Vec<f64>>,
}

impl GtspInstance {
    /// Assembles an instance from precomputed data, checking shapes.
    pub fn from_parts(
        viewpoints: Vec<Point>,
        cost: Vec<Vec<f64>>,
        clusters: Vec<Vec<usize>>,
        scenario: DepotScenario,
        m: usize,
        depot_cost: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = viewpoints.len();
        if m == 0 {
            return Err(Error::Domain("m must be at least 1".into()));
        }
        scenario.validate(m)?;
        if cost.len() != n || cost.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(format!("cost matrix must be {n} x {n}")));
        }
        let depots = scenario.points().len();
        if depot_cost.len() != depots || depot_cost.iter().any(|r| r.len() != n) {
            return Err(Error::Domain(format!("depot costs must be {depots} x {n}")));
        }
        let mut clusters = clusters;
        for (i, c) in clusters.iter_mut().enumerate() {
            c.sort_unstable();
            c.dedup();
            if c.is_empty() {
                return Err(Error::Infeasible(format!("target {i} has no viewpoint")));
            }
            if let Some(&v) = c.iter().find(|&&v| v >= n) {
                return Err(Error::Domain(format!(
                    "cluster {i} names viewpoint {v} of {n}"
                )));
            }
        }
        Ok(GtspInstance {
            original_ids: (0..n).collect(),
            viewpoints,
            cost,
            clusters,
            scenario,
            m,
            depot_cost,
        })
    }

    pub fn n(&self) -> usize {
        self.viewpoints.len()
    }

    /// Clusters with duplicates and strict supersets removed; any plan
    /// covering the result covers every original cluster.
    pub fn reduced_clusters(&self) -> Vec<Vec<usize>> {
        let mut cs = self.clusters.clone();
        cs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cs.dedup();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for c in cs {
            if !kept
                .iter()
                .any(|k| k.iter().all(|v| c.binary_search(v).is_ok()))
            {
                kept.push(c);
            }
        }
        kept
    }

    /// Ids of clusters missed by a set of visited viewpoints.
    pub fn uncovered(&self, visited: &[usize]) -> Vec<usize> {
        self.clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.iter().any(|v| visited.contains(v)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Clusters from visibility, geodesic costs, and removal of viewpoints that
/// see no target.
pub fn build_gtsp(
    poly: &SimplePolygon,
    viewpoints: &[Point],
    targets: &[Point],
    scenario: DepotScenario,
    m: usize,
) -> Result<GtspInstance> {
    for (i, &v) in viewpoints.iter().enumerate() {
        poly.require(v, &format!("viewpoint {i}"))?;
    }
    for (i, &x) in targets.iter().enumerate() {
        poly.require(x, &format!("target {i}"))?;
    }
    for (i, &d) in scenario.points().iter().enumerate() {
        poly.require(d, &format!("depot {i}"))?;
    }
    let sees: Vec<Vec<usize>> = targets
        .iter()
        .map(|&x| {
            (0..viewpoints.len())
                .filter(|&v| poly.sees_unchecked(viewpoints[v], x))
                .collect()
        })
        .collect();
    let unseen: Vec<usize> = (0..targets.len()).filter(|&i| sees[i].is_empty()).collect();
    if !unseen.is_empty() {
        return Err(Error::Infeasible(format!(
            "targets {unseen:?} see no viewpoint"
        )));
    }
    let mut useful = vec![false; viewpoints.len()];
    for c in &sees {
        for &v in c {
            useful[v] = true;
        }
    }
    let kept: Vec<usize> = (0..viewpoints.len()).filter(|&v| useful[v]).collect();
    let mut new_id = vec![usize::MAX; viewpoints.len()];
    for (k, &v) in kept.iter().enumerate() {
        new_id[v] = k;
    }
    let pts: Vec<Point> = kept.iter().map(|&v| viewpoints[v]).collect();
    let geo = Geodesics::new(poly);
    let cost = geo.distance_matrix(&pts)?;
    let depot_cost = scenario
        .points()
        .iter()
        .map(|&d| {
            pts.iter()
                .map(|&p| geo.distance(d, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let clusters = sees
        .iter()
        .map(|c| c.iter().map(|&v| new_id[v]).collect())
        .collect();
    let mut inst = GtspInstance::from_parts(pts, cost, clusters, scenario, m, depot_cost)?;
    inst.original_ids = kept;
    Ok(inst)
}

/// One robot's route; `viewpoints` index the instance's kept viewpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotRoute {
    pub start: Point,
    pub finish: Point,
    pub viewpoints: Vec<usize>,
    pub length: f64,
    /// Geodesic polyline, filled in when the polygon is known.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodedPlan {
    pub robots: Vec<RobotRoute>,
    pub total_cost: f64,
}

impl DecodedPlan {
    pub fn visited(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .robots
            .iter()
            .flat_map(|r| r.viewpoints.iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Replaces straight legs by geodesic polylines.
    pub fn expand_paths(&mut self, poly: &SimplePolygon, inst: &GtspInstance) -> Result<()> {
        let geo = Geodesics::new(poly);
        for r in &mut self.robots {
            if r.viewpoints.is_empty() {
                r.path = vec![r.start];
                continue;
            }
            let mut stops = vec![r.start];
            stops.extend(r.viewpoints.iter().map(|&v| inst.viewpoints[v]));
            stops.push(r.finish);
            let mut path = vec![r.start];
            for w in stops.windows(2) {
                path.extend(geo.path(w[0], w[1])?.points.into_iter().skip(1));
            }
            path.dedup();
            r.path = path;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct GtspOptions {
    pub solver: SolverOptions,
    /// Solve the symmetrized instance instead of the directed one.
    pub symmetrize: bool,
}

/// Build, transform, solve exactly and decode.
pub fn solve_gtsp(
    poly: &SimplePolygon,
    viewpoints: &[Point],
    targets: &[Point],
    scenario: DepotScenario,
    m: usize,
    opts: &GtspOptions,
) -> Result<(GtspInstance, DecodedPlan)> {
    let inst = build_gtsp(poly, viewpoints, targets, scenario, m)?;
    let mut plan = solve_instance(&inst, opts)?;
    plan.expand_paths(poly, &inst)?;
    Ok((inst, plan))
}

/// Solves a prepared instance; paths are left unexpanded.
pub fn solve_instance(inst: &GtspInstance, opts: &GtspOptions) -> Result<DecodedPlan> {
    let nb = noon_bean_transform(inst);
    let order = if opts.symmetrize {
        let sym = karp_symmetrize(&nb.atsp);
        let t = tsp::solve(&sym.instance, &opts.solver)?;
        sym.decode(&t.order, &nb.atsp)?.order
    } else {
        tsp::solve(&nb.atsp, &opts.solver)?.order
    };
    let plan = decode_tour(&nb, &order)?;
    let missed = inst.uncovered(&plan.visited());
    if !missed.is_empty() {
        return Err(Error::Decode(format!(
            "decoded plan misses clusters {missed:?}"
        )));
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes::*;

    fn square_case() -> (SimplePolygon, Vec<Point>, Vec<Point>, DepotScenario) {
        (
            unit_square(),
            vec![Point::new(0.2, 0.2), Point::new(0.8, 0.8)],
            vec![Point::new(0.5, 0.5)],
            DepotScenario::SameDepot {
                depot: Point::new(0.1, 0.1),
            },
        )
    }

    #[test]
    fn square_build() {
        let (p, v, x, s) = square_case();
        let g = build_gtsp(&p, &v, &x, s, 1).unwrap();
        assert_eq!(g.clusters, vec![vec![0, 1]]);
        assert!((g.cost[0][1] - 0.72f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn square_solution() {
        let (p, v, x, s) = square_case();
        for solver in [tsp::Solver::HeldKarp, tsp::Solver::BranchAndBound] {
            let opts = GtspOptions {
                solver: SolverOptions {
                    solver,
                    time_budget: None,
                },
                symmetrize: false,
            };
            let (_, plan) = solve_gtsp(&p, &v, &x, s.clone(), 1, &opts).unwrap();
            assert!((plan.total_cost - 2.0 * 0.02f64.sqrt()).abs() < 1e-9);
            assert_eq!(plan.robots[0].viewpoints, vec![0]);
        }
        let opts = GtspOptions {
            symmetrize: true,
            ..Default::default()
        };
        let (_, plan) = solve_gtsp(&p, &v, &x, s, 1, &opts).unwrap();
        assert!((plan.total_cost - 2.0 * 0.02f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn isolated_viewpoints_are_dropped() {
        let u = u_shape();
        let v = vec![
            Point::new(0.5, 1.8),
            Point::new(2.5, 1.8),
            Point::new(1.5, 0.2),
        ];
        let x = vec![Point::new(0.5, 1.9)];
        let g = build_gtsp(
            &u,
            &v,
            &x,
            DepotScenario::SameDepot {
                depot: Point::new(1.5, 0.5),
            },
            1,
        )
        .unwrap();
        assert_eq!(g.original_ids, vec![0]);
        assert_eq!(g.n(), 1);
    }

    #[test]
    fn unseen_target_is_infeasible() {
        let u = u_shape();
        let v = vec![Point::new(0.5, 1.8)];
        let x = vec![Point::new(2.5, 1.9)];
        let err = build_gtsp(
            &u,
            &v,
            &x,
            DepotScenario::SameDepot {
                depot: Point::new(0.5, 0.5),
            },
            1,
        );
        assert!(matches!(err, Err(Error::Infeasible(_))));
    }

    #[test]
    fn one_robot_suffices_leaves_the_other_idle() {
        let (p, v, x, _) = square_case();
        let s = DepotScenario::SameDepot {
            depot: Point::new(0.1, 0.1),
        };
        let (_, plan) = solve_gtsp(&p, &v, &x, s, 2, &GtspOptions::default()).unwrap();
        assert_eq!(plan.robots.len(), 2);
        assert_eq!(
            plan.robots
                .iter()
                .filter(|r| r.viewpoints.is_empty())
                .count(),
            1
        );
        assert!((plan.total_cost - 2.0 * 0.02f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn zero_targets_cost_nothing() {
        let (p, v, _, s) = square_case();
        let (g, plan) = solve_gtsp(&p, &v, &[], s, 2, &GtspOptions::default()).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(plan.total_cost, 0.0);
        assert!(plan.robots.iter().all(|r| r.viewpoints.is_empty()));
    }

    #[test]
    fn reduced_clusters_drop_supersets() {
        let g = GtspInstance::from_parts(
            vec![Point::default(); 3],
            vec![vec![0.0; 3]; 3],
            vec![vec![0, 1], vec![1], vec![1, 2], vec![1]],
            DepotScenario::SameDepot {
                depot: Point::default(),
            },
            1,
            vec![vec![0.0; 3]],
        )
        .unwrap();
        assert_eq!(g.reduced_clusters(), vec![vec![1]]);
    }

    #[test]
    fn scenario_shapes() {
        let s = DepotScenario::Interchangeable {
            depots: vec![Point::default()],
        };
        assert!(s.validate(2).is_err());
        assert!(s.validate(1).is_ok());
    }
}
