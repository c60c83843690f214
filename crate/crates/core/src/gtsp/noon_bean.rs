//! The multi-robot Noon-Bean transformation and tour decoding.
//!
//! Every viewpoint is copied once per cluster containing it, which makes
//! clusters disjoint. The copies of a cluster form a zero-cost cycle in
//! ascending viewpoint order, and every arc leaving a copy is re-rooted at
//! its cycle predecessor. A tour therefore enters a cluster at some copy
//! `u`, walks the whole cycle and leaves from `pred(u)` along an arc priced
//! as if it left `u`: the entered copy is the viewpoint actually visited.
//!
//! Each way of entering a cluster (from a start depot, by travelling from
//! another viewpoint, or by staying at the same viewpoint) carries the
//! penalty `alpha + beta`, so a tour entering each cluster exactly once
//! pays exactly `K (alpha + beta)` on top of the travel, and any tour
//! entering some cluster twice pays more than any such tour. Robots are
//! start and finish depot copies; a finish copy leads back to any start
//! copy at no cost.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DecodedPlan, GtspInstance, RobotRoute};
use crate::error::{Error, Result};
use crate::tsp::AtspInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeRole {
    /// Copy of `viewpoint` inside reduced cluster `cluster`.
    Copy {
        viewpoint: usize,
        cluster: usize,
    },
    Start(usize),
    Finish(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArcKind {
    /// Zero-cost arc of an intracluster cycle.
    Cycle,
    /// Tail-shifted travel between viewpoints of different clusters.
    Travel,
    /// Tail-shifted move to another copy of the same viewpoint.
    Stay,
    DepotOut,
    /// Tail-shifted arc into a finish depot, without penalty.
    DepotIn,
    /// Finish to start, or an unused robot's start to its finish.
    DepotDepot,
    Forbidden,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoonBeanGraph {
    pub atsp: AtspInstance,
    pub alpha: f64,
    pub beta: f64,
    pub mst_cost: f64,
    pub mst_edges: usize,
    /// Largest depot-to-viewpoint distance.
    pub max_depot_cost: f64,
    pub roles: Vec<NodeRole>,
    /// Node ids of each reduced cluster, in cycle order.
    pub cycles: Vec<Vec<usize>>,
    pub kinds: Vec<Vec<ArcKind>>,
    pub instance: GtspInstance,
}

impl NoonBeanGraph {
    /// Penalty paid by every valid tour.
    pub fn penalty_total(&self) -> f64 {
        self.cycles.len() as f64 * (self.alpha + self.beta)
    }

    pub fn category_counts(&self) -> BTreeMap<ArcKind, usize> {
        let mut out = BTreeMap::new();
        for (i, row) in self.kinds.iter().enumerate() {
            for (j, &k) in row.iter().enumerate() {
                if i != j {
                    *out.entry(k).or_insert(0) += 1;
                }
            }
        }
        out
    }

    fn succ_in_cycle(&self, node: usize) -> Option<usize> {
        let NodeRole::Copy { cluster, .. } = self.roles[node] else {
            return None;
        };
        let c = &self.cycles[cluster];
        let at = c.iter().position(|&x| x == node)?;
        Some(c[(at + 1) % c.len()])
    }
}

/// Minimum spanning tree of the complete graph with costs `c` (Prim).
fn mst(c: &[Vec<f64>]) -> (f64, usize) {
    let n = c.len();
    if n == 0 {
        return (0.0, 0);
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .unwrap();
        in_tree[u] = true;
        total += best[u];
        for v in 0..n {
            if !in_tree[v] && c[u][v] < best[v] {
                best[v] = c[u][v];
            }
        }
    }
    (total, n - 1)
}

pub fn noon_bean_transform(g: &GtspInstance) -> NoonBeanGraph {
    let m = g.m;
    let clusters = g.reduced_clusters();
    let mut roles = Vec::new();
    let mut cycles = Vec::with_capacity(clusters.len());
    for (j, c) in clusters.iter().enumerate() {
        let mut cyc = Vec::with_capacity(c.len());
        for &v in c {
            cyc.push(roles.len());
            roles.push(NodeRole::Copy {
                viewpoint: v,
                cluster: j,
            });
        }
        cycles.push(cyc);
    }
    let copies = roles.len();
    roles.extend((0..m).map(NodeRole::Start));
    roles.extend((0..m).map(NodeRole::Finish));
    let start = |k: usize| copies + k;
    let finish = |k: usize| copies + m + k;
    let n = roles.len();

    let (mst_cost, mst_edges) = mst(&g.cost);
    let max_depot_cost = g.depot_cost.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    let alpha = 2.0 * mst_cost + 2.0 * m as f64 * max_depot_cost;
    let beta = 2.0 * alpha * (1.0 + mst_edges as f64) + 2.0 * m as f64 * (1.0 + alpha);
    let pen = alpha + beta;

    let mut cost = vec![vec![f64::INFINITY; n]; n];
    let mut kinds = vec![vec![ArcKind::Forbidden; n]; n];
    let mut set = |i: usize, j: usize, c: f64, k: ArcKind| {
        cost[i][j] = c;
        kinds[i][j] = k;
    };
    for cyc in &cycles {
        let len = cyc.len();
        for (t, &u) in cyc.iter().enumerate() {
            let succ = cyc[(t + 1) % len];
            if succ != u {
                set(u, succ, 0.0, ArcKind::Cycle);
            }
            let tail = cyc[(t + len - 1) % len];
            let NodeRole::Copy {
                viewpoint: a,
                cluster: p,
            } = roles[u]
            else {
                unreachable!()
            };
            for w in 0..copies {
                let NodeRole::Copy {
                    viewpoint: b,
                    cluster: q,
                } = roles[w]
                else {
                    unreachable!()
                };
                if q == p {
                    continue;
                }
                if a == b {
                    set(tail, w, pen, ArcKind::Stay);
                } else {
                    set(tail, w, g.cost[a][b] + pen, ArcKind::Travel);
                }
            }
            for l in 0..m {
                let d = g.scenario.finish_of(l);
                set(tail, finish(l), g.depot_cost[d][a], ArcKind::DepotIn);
            }
        }
    }
    for k in 0..m {
        let d = g.scenario.start_of(k);
        for w in 0..copies {
            let NodeRole::Copy { viewpoint: b, .. } = roles[w] else {
                unreachable!()
            };
            set(start(k), w, g.depot_cost[d][b] + pen, ArcKind::DepotOut);
        }
        for l in 0..m {
            set(finish(l), start(k), 0.0, ArcKind::DepotDepot);
            if g.scenario.idle_pair(k, l) {
                set(start(k), finish(l), 0.0, ArcKind::DepotDepot);
            }
        }
    }
    let mut atsp = AtspInstance::new(format!("noon_bean_{}", g.scenario.name()), cost)
        .expect("square by construction");
    atsp.penalty = Some(pen);
    NoonBeanGraph {
        atsp,
        alpha,
        beta,
        mst_cost,
        mst_edges,
        max_depot_cost,
        roles,
        cycles,
        kinds,
        instance: g.clone(),
    }
}

/// Splits a tour of the transformed graph into robot routes.
///
/// The tour must read as `start, copies.., finish` blocks, with each
/// cluster's copies forming one complete cycle walk; anything else is a
/// decode error.
pub fn decode_tour(nb: &NoonBeanGraph, order: &[usize]) -> Result<DecodedPlan> {
    let n = nb.roles.len();
    let g = &nb.instance;
    let m = g.m;
    crate::tsp::Tour {
        order: order.to_vec(),
        cost: 0.0,
    }
    .validate(n)?;
    let first = order
        .iter()
        .position(|&v| matches!(nb.roles[v], NodeRole::Start(_)))
        .ok_or_else(|| Error::Decode("tour has no start depot".into()))?;
    let seq: Vec<usize> = (0..n).map(|k| order[(first + k) % n]).collect();
    let points = g.scenario.points();
    let mut robots: Vec<Option<RobotRoute>> = vec![None; m];
    let mut seen_cluster = vec![false; nb.cycles.len()];
    let mut idle_order = 0usize;
    let mut t = 0;
    while t < n {
        let NodeRole::Start(k) = nb.roles[seq[t]] else {
            return Err(Error::Decode(format!(
                "expected a start depot at tour position {t}, found {:?}",
                nb.roles[seq[t]]
            )));
        };
        t += 1;
        let mut stops: Vec<usize> = Vec::new();
        while t < n {
            match nb.roles[seq[t]] {
                NodeRole::Copy { viewpoint, cluster } => {
                    if std::mem::replace(&mut seen_cluster[cluster], true) {
                        return Err(Error::Decode(format!("cluster {cluster} is entered twice")));
                    }
                    let walk = nb.cycles[cluster].len();
                    for s in 1..walk {
                        let expect = nb.succ_in_cycle(seq[t + s - 1]);
                        if t + s >= n || Some(seq[t + s]) != expect {
                            return Err(Error::Decode(format!(
                                "cluster {cluster} is not walked along its cycle"
                            )));
                        }
                    }
                    if stops.last() != Some(&viewpoint) {
                        stops.push(viewpoint);
                    }
                    t += walk;
                }
                _ => break,
            }
        }
        let Some(&NodeRole::Finish(l)) = seq.get(t).map(|&v| &nb.roles[v]) else {
            return Err(Error::Decode(format!(
                "robot leaving start copy {k} never reaches a finish depot"
            )));
        };
        t += 1;
        let (s, f) = (g.scenario.start_of(k), g.scenario.finish_of(l));
        let route = if stops.is_empty() {
            if !g.scenario.idle_pair(k, l) {
                return Err(Error::Decode(format!(
                    "unused robot at start {k} cannot end at finish {l}"
                )));
            }
            RobotRoute {
                start: points[s],
                finish: points[s],
                viewpoints: Vec::new(),
                length: 0.0,
                path: Vec::new(),
            }
        } else {
            let mut length = g.depot_cost[s][stops[0]] + g.depot_cost[f][*stops.last().unwrap()];
            for w in stops.windows(2) {
                length += g.cost[w[0]][w[1]];
            }
            RobotRoute {
                start: points[s],
                finish: points[f],
                viewpoints: stops,
                length,
                path: Vec::new(),
            }
        };
        // copies of a shared depot are interchangeable; number robots in tour order
        let id = match g.scenario {
            super::DepotScenario::SameDepot { .. } => {
                idle_order += 1;
                idle_order - 1
            }
            _ => k,
        };
        if robots[id].replace(route).is_some() {
            return Err(Error::Decode(format!("start copy {k} used twice")));
        }
    }
    if let Some(c) = seen_cluster.iter().position(|s| !s) {
        return Err(Error::Decode(format!("cluster {c} is never entered")));
    }
    let robots: Vec<RobotRoute> = robots
        .into_iter()
        .map(|r| r.expect("every start copy seen"))
        .collect();
    let total_cost: f64 = robots.iter().map(|r| r.length).sum();
    let tour_cost = nb.atsp.tour_cost(order);
    let residual = tour_cost - nb.penalty_total();
    let tol = 1e-6 + 1e-12 * nb.penalty_total();
    if !tour_cost.is_finite() || (residual - total_cost).abs() > tol {
        return Err(Error::Decode(format!(
            "tour cost {tour_cost} minus penalties does not match the route lengths {total_cost}"
        )));
    }
    Ok(DecodedPlan { robots, total_cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::gtsp::DepotScenario;
    use crate::tsp::held_karp;

    fn square() -> GtspInstance {
        let d = 0.72f64.sqrt();
        let g02 = 0.02f64.sqrt();
        let g08 = Point::new(0.7, 0.7).norm();
        GtspInstance::from_parts(
            vec![Point::new(0.2, 0.2), Point::new(0.8, 0.8)],
            vec![vec![0.0, d], vec![d, 0.0]],
            vec![vec![0, 1]],
            DepotScenario::SameDepot {
                depot: Point::new(0.1, 0.1),
            },
            1,
            vec![vec![g02, g08]],
        )
        .unwrap()
    }

    #[test]
    fn counts_and_penalties() {
        let nb = noon_bean_transform(&square());
        assert_eq!(nb.roles.len(), 4);
        let d = 0.72f64.sqrt();
        assert!((nb.mst_cost - d).abs() < 1e-15);
        let alpha = 2.0 * d + 2.0 * Point::new(0.7, 0.7).norm();
        assert!((nb.alpha - alpha).abs() < 1e-12);
        assert!((nb.beta - (2.0 * alpha * 2.0 + 2.0 * (1.0 + alpha))).abs() < 1e-12);
        let counts = nb.category_counts();
        assert_eq!(counts[&ArcKind::Cycle], 2);
        assert_eq!(counts[&ArcKind::DepotOut], 2);
        assert_eq!(counts[&ArcKind::DepotIn], 2);
        assert_eq!(counts[&ArcKind::DepotDepot], 2);
    }

    #[test]
    fn square_decodes_to_the_near_viewpoint() {
        let nb = noon_bean_transform(&square());
        let t = held_karp(&nb.atsp).unwrap();
        let plan = decode_tour(&nb, &t.order).unwrap();
        assert_eq!(plan.robots[0].viewpoints, vec![0]);
        assert!((plan.total_cost - 2.0 * 0.02f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tail_shift_credits_the_entered_copy() {
        let nb = noon_bean_transform(&square());
        // start, enter at copy of viewpoint 1, walk to copy 0, finish
        let plan = decode_tour(&nb, &[2, 1, 0, 3]).unwrap();
        assert_eq!(plan.robots[0].viewpoints, vec![1]);
        assert!((plan.total_cost - 2.0 * Point::new(0.7, 0.7).norm()).abs() < 1e-12);
    }

    #[test]
    fn malformed_tours_are_rejected() {
        let nb = noon_bean_transform(&square());
        assert!(decode_tour(&nb, &[2, 0, 3, 1]).is_err());
        assert!(decode_tour(&nb, &[2, 3, 0, 1]).is_err());
        assert!(decode_tour(&nb, &[0, 1, 2]).is_err());
    }

    #[test]
    fn idle_robots_stay_home_under_interchangeable_depots() {
        let mut g = square();
        g.scenario = DepotScenario::Interchangeable {
            depots: vec![Point::new(0.1, 0.1), Point::new(0.9, 0.9)],
        };
        g.m = 2;
        g.depot_cost
            .push(vec![Point::new(0.7, 0.7).norm(), 0.02f64.sqrt()]);
        let nb = noon_bean_transform(&g);
        assert_eq!(
            nb.kinds[nb.roles.len() - 4][nb.roles.len() - 1],
            ArcKind::Forbidden
        );
        let t = held_karp(&nb.atsp).unwrap();
        let plan = decode_tour(&nb, &t.order).unwrap();
        assert!((plan.total_cost - 2.0 * 0.02f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            plan.robots
                .iter()
                .filter(|r| r.viewpoints.is_empty())
                .count(),
            1
        );
    }
}
