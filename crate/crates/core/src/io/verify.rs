use std::fmt;

use serde::{Deserialize, Serialize};

use super::document::{InstanceDocument, ProblemKind, RobotPath, SolutionDocument};
use crate::chain::chain_intervals;
use crate::error::Result;
use crate::geometry::{coverage_fraction, Geodesics, Point};
use crate::gtsp::{build_gtsp, DepotScenario};
use crate::oracles::{brute_chain, brute_gtsp, brute_street};
use crate::street::{StreetModel, WitnessOptions};

/// Least sampled coverage accepted for street solutions.
pub const STREET_COVERAGE: f64 = 0.999;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Monte Carlo samples for street coverage.
    pub samples: usize,
    pub seed: u64,
    pub oracle: bool,
    /// Curve samples used by the chain and street oracles.
    pub chain_grid: usize,
    pub street_grid: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 100_000,
            seed: 1,
            oracle: false,
            chain_grid: 1001,
            street_grid: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub optimum: f64,
    /// Reported objective minus the oracle optimum.
    pub gap: f64,
    /// Exact match for chain and gtsp; within four times the optimum plus
    /// the discretization gap for street.
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub kind: ProblemKind,
    pub pass: bool,
    /// Targets (chain, gtsp) or witness points (street) nobody sees.
    pub uncovered: Vec<usize>,
    pub reported: Option<f64>,
    pub recomputed: f64,
    pub coverage_fraction: Option<f64>,
    pub oracle: Option<OracleCheck>,
    pub messages: Vec<String>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.kind
        )?;
        let obj = if self.kind == ProblemKind::Gtsp {
            "total_cost"
        } else {
            "makespan"
        };
        match self.reported {
            Some(r) => writeln!(f, "  {obj}: reported {r}, recomputed {}", self.recomputed)?,
            None => writeln!(f, "  {obj}: missing, recomputed {}", self.recomputed)?,
        }
        if let Some(c) = self.coverage_fraction {
            writeln!(f, "  coverage fraction: {c}")?;
        }
        if !self.uncovered.is_empty() {
            let what = if self.kind == ProblemKind::Street {
                "witness points"
            } else {
                "targets"
            };
            writeln!(f, "  uncovered {what}: {:?}", self.uncovered)?;
        }
        if let Some(o) = &self.oracle {
            writeln!(
                f,
                "  oracle optimum {} (gap {:.3e}): {}",
                o.optimum,
                o.gap,
                if o.ok { "ok" } else { "MISMATCH" }
            )?;
        }
        for m in &self.messages {
            writeln!(f, "  {m}")?;
        }
        Ok(())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Checks the arc-length form of every path; returns the recomputed costs.
fn check_curve_paths(robots: &[RobotPath], t_m: f64, len: f64, msgs: &mut Vec<String>) -> Vec<f64> {
    let tol = 1e-9 * len.max(1.0);
    robots
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let (a, b) = match (r.s_start, r.s_end) {
                (Some(a), Some(b)) => (a, b),
                (None, None) if r.viewpoint_s.is_empty() => return 0.0,
                _ => {
                    msgs.push(format!("robot {k}: incomplete arc-length span"));
                    return f64::INFINITY;
                }
            };
            if a > b + tol || a < -tol || b > len + tol {
                msgs.push(format!(
                    "robot {k}: span [{a}, {b}] is not inside [0, {len}]"
                ));
            }
            if r.viewpoint_s.iter().any(|&s| s < a - tol || s > b + tol) {
                msgs.push(format!("robot {k}: a viewpoint lies outside its span"));
            }
            let cost = (b - a) + t_m * r.viewpoint_s.len() as f64;
            if !close(cost, r.cost) {
                msgs.push(format!(
                    "robot {k}: reported cost {} but the path costs {cost}",
                    r.cost
                ));
            }
            cost
        })
        .collect()
}

pub fn verify(
    inst: &InstanceDocument,
    sol: &SolutionDocument,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let kind = inst.kind()?;
    let mut msgs = Vec::new();
    if sol.kind != kind {
        msgs.push(format!(
            "solution is for a {} instance, the instance is {kind}",
            sol.kind
        ));
    }
    let m = if sol.solver.m > 0 {
        sol.solver.m
    } else {
        inst.m
    };
    if sol.robots.len() > m {
        msgs.push(format!("{} robots used, {m} available", sol.robots.len()));
    }
    let mut doc = inst.clone();
    doc.m = m;
    if sol.kind != ProblemKind::Gtsp {
        doc.t_m = sol.solver.t_m;
    }
    let poly = doc.polygon()?;
    let mut uncovered = Vec::new();
    let mut coverage = None;
    let (recomputed, oracle) = match kind {
        ProblemKind::Chain => {
            let ci = doc.chain_instance()?;
            let costs = check_curve_paths(&sol.robots, ci.t_m, ci.curve.length(), &mut msgs);
            let vps: Vec<f64> = sol
                .robots
                .iter()
                .flat_map(|r| r.viewpoint_s.iter().copied())
                .collect();
            let tol = 1e-9 * ci.curve.length().max(1.0);
            for iv in chain_intervals(&ci.polygon, &ci.curve, &ci.targets)? {
                if !vps.iter().any(|&s| iv.contains(s, tol)) {
                    uncovered.push(iv.target_id);
                }
            }
            let ms = costs.iter().copied().fold(0.0, f64::max);
            let oracle = if opts.oracle {
                let opt = brute_chain(&ci, opts.chain_grid)?;
                let gap = sol.makespan.unwrap_or(ms) - opt;
                Some(OracleCheck {
                    optimum: opt,
                    gap,
                    ok: gap.abs() <= 1e-6,
                })
            } else {
                None
            };
            (ms, oracle)
        }
        ProblemKind::Street => {
            let si = doc.street_instance()?;
            let costs = check_curve_paths(&sol.robots, si.t_m, si.curve.length(), &mut msgs);
            let vps: Vec<f64> = sol
                .robots
                .iter()
                .flat_map(|r| r.viewpoint_s.iter().copied())
                .collect();
            let model = StreetModel::new(&si.polygon, &si.curve, &WitnessOptions::default())?;
            uncovered = model.uncovered(&vps);
            let pts: Vec<Point> = vps.iter().map(|&s| si.curve.point_at(s)).collect();
            let frac = coverage_fraction(&si.polygon, &pts, opts.samples, opts.seed)?;
            if frac < STREET_COVERAGE {
                msgs.push(format!(
                    "sampled coverage {frac} is below {STREET_COVERAGE}"
                ));
            }
            coverage = Some(frac);
            let ms = costs.iter().copied().fold(0.0, f64::max);
            let oracle = if opts.oracle {
                let o = brute_street(&si, opts.street_grid)?;
                let rep = sol.makespan.unwrap_or(ms);
                Some(OracleCheck {
                    optimum: o.makespan,
                    gap: rep - o.makespan,
                    ok: rep <= 4.0 * (o.makespan + o.gap) + 1e-9,
                })
            } else {
                None
            };
            (ms, oracle)
        }
        ProblemKind::Gtsp => {
            let scenario = doc.scenario(sol.solver.scenario)?;
            let vps = doc.viewpoints.clone().unwrap_or_default();
            let targets = doc.targets.clone().unwrap_or_default();
            let geo = Geodesics::new(&poly);
            let mut visited = Vec::new();
            let mut total = 0.0;
            let mut ends = Vec::new();
            for (k, r) in sol.robots.iter().enumerate() {
                let mut stops = Vec::with_capacity(r.viewpoint_ids.len() + 2);
                let (Some(&start), Some(&finish)) = (r.polyline.first(), r.polyline.last()) else {
                    msgs.push(format!("robot {k}: empty polyline"));
                    continue;
                };
                stops.push(start);
                for &id in &r.viewpoint_ids {
                    match vps.get(id) {
                        Some(&p) => {
                            stops.push(p);
                            visited.push(p);
                        }
                        None => msgs.push(format!("robot {k}: unknown viewpoint id {id}")),
                    }
                }
                stops.push(finish);
                let mut len = 0.0;
                if !r.viewpoint_ids.is_empty() {
                    for w in stops.windows(2) {
                        len += geo.distance(w[0], w[1])?;
                    }
                }
                if !close(len, r.cost) {
                    msgs.push(format!(
                        "robot {k}: reported cost {} but the route is {len} long",
                        r.cost
                    ));
                }
                total += len;
                ends.push((start, finish, r.viewpoint_ids.is_empty()));
            }
            check_depots(&scenario, &ends, &mut msgs);
            for (i, &x) in targets.iter().enumerate() {
                if !visited.iter().any(|&v| poly.sees_unchecked(v, x)) {
                    uncovered.push(i);
                }
            }
            let oracle = if opts.oracle {
                let g = build_gtsp(&poly, &vps, &targets, scenario, m)?;
                let opt = brute_gtsp(&g)?;
                let gap = sol.total_cost.unwrap_or(total) - opt;
                Some(OracleCheck {
                    optimum: opt,
                    gap,
                    ok: gap.abs() <= 1e-6,
                })
            } else {
                None
            };
            (total, oracle)
        }
    };
    let reported = sol.objective();
    match reported {
        Some(r) if !close(r, recomputed) => {
            msgs.push(format!("reported objective {r} differs from {recomputed}"))
        }
        None => msgs.push("objective missing".into()),
        _ => {}
    }
    let pass = msgs.is_empty() && uncovered.is_empty() && oracle.as_ref().is_none_or(|o| o.ok);
    Ok(VerifyReport {
        kind,
        pass,
        uncovered,
        reported,
        recomputed,
        coverage_fraction: coverage,
        oracle,
        messages: msgs,
    })
}

/// Start and finish points against the depot rules.
fn check_depots(scenario: &DepotScenario, ends: &[(Point, Point, bool)], msgs: &mut Vec<String>) {
    let pts = scenario.points();
    let near = |a: Point, b: Point| a.dist(b) <= 1e-9 * (1.0 + a.norm());
    let mut finishes = Vec::new();
    for (k, &(s, f, idle)) in ends.iter().enumerate() {
        if !near(s, pts[scenario.start_of(k)]) {
            msgs.push(format!("robot {k} does not start at its depot"));
        }
        match scenario {
            DepotScenario::Interchangeable { .. } => {
                if idle && !near(s, f) {
                    msgs.push(format!("idle robot {k} moved"));
                }
                finishes.push(f);
            }
            _ if idle => {}
            _ => {
                if !near(f, pts[scenario.finish_of(k)]) {
                    msgs.push(format!("robot {k} does not finish at its depot"));
                }
            }
        }
    }
    if let DepotScenario::Interchangeable { .. } = scenario {
        // every depot ends up holding one robot
        let starts: Vec<Point> = (0..ends.len()).map(|k| pts[k]).collect();
        let mut used = vec![false; starts.len()];
        for f in finishes {
            match (0..starts.len()).find(|&i| !used[i] && near(f, starts[i])) {
                Some(i) => used[i] = true,
                None => msgs.push(format!("finish ({}, {}) is not a free depot", f.x, f.y)),
            }
        }
    }
}
