//! Depth-first branch and bound with the assignment relaxation.
//!
//! Each node fixes some arcs in and some out. Its bound is the optimal
//! assignment on the remaining arcs; when that assignment is one cycle it
//! is a tour. Otherwise the shortest subtour `e_1 .. e_r` (counting free
//! arcs only) is broken into `r` children, child `k` excluding `e_k` and
//! including `e_1 .. e_{k-1}`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{assignment, AtspInstance, Tour};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BnbReport {
    pub tour: Option<Tour>,
    /// Proven lower bound on the optimum.
    pub lower_bound: f64,
    pub optimal: bool,
    pub nodes: usize,
}

/// Optimal tour, or a timeout error carrying the best bound and incumbent.
pub fn branch_and_bound(inst: &AtspInstance, budget: Option<Duration>) -> Result<Tour> {
    let rep = branch_and_bound_report(inst, budget);
    match (rep.optimal, rep.tour) {
        (true, Some(t)) => Ok(t),
        (true, None) => Err(Error::Infeasible(
            "no tour avoids the forbidden arcs".into(),
        )),
        (false, t) => Err(Error::Timeout {
            bound: rep.lower_bound,
            incumbent: t.map(|t| t.cost),
        }),
    }
}

struct Node {
    bound: f64,
    included: Vec<(usize, usize)>,
    excluded: Vec<(usize, usize)>,
}

pub fn branch_and_bound_report(inst: &AtspInstance, budget: Option<Duration>) -> BnbReport {
    let n = inst.n();
    if n <= 2 {
        let tour = Tour::new(inst, (0..n).collect());
        let ok = tour.cost.is_finite();
        return BnbReport {
            lower_bound: if ok { tour.cost } else { f64::INFINITY },
            tour: ok.then_some(tour),
            optimal: true,
            nodes: 1,
        };
    }
    let big = 2.0
        * inst
            .cost
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|c| c.is_finite())
                    .fold(0.0f64, |a, c| a.max(c.abs()))
            })
            .sum::<f64>()
        + 1.0;
    let base: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = inst.cost[i][j];
                    if i == j || !c.is_finite() {
                        big
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();

    let start = budget.map(|b| (Instant::now(), b));
    let mut best: Option<Tour> = None;
    let mut nodes = 0;
    let mut stack = vec![Node {
        bound: f64::NEG_INFINITY,
        included: Vec::new(),
        excluded: Vec::new(),
    }];
    while let Some(node) = stack.pop() {
        if let Some((t0, b)) = start {
            if t0.elapsed() > b {
                stack.push(node);
                let open = stack.iter().map(|s| s.bound).fold(f64::INFINITY, f64::min);
                let inc = best.as_ref().map_or(f64::INFINITY, |t| t.cost);
                return BnbReport {
                    lower_bound: open.min(inc),
                    tour: best,
                    optimal: false,
                    nodes,
                };
            }
        }
        nodes += 1;
        let incumbent = best.as_ref().map_or(f64::INFINITY, |t| t.cost);
        if node.bound >= incumbent {
            continue;
        }
        let mut m = base.clone();
        for &(i, j) in &node.excluded {
            m[i][j] = big;
        }
        for &(i, j) in &node.included {
            for k in 0..n {
                if k != j {
                    m[i][k] = big;
                }
                if k != i {
                    m[k][j] = big;
                }
            }
        }
        let (total, succ) = assignment(&m);
        if (0..n).any(|i| m[i][succ[i]] >= big) {
            continue;
        }
        if total >= incumbent - 1e-12 * (1.0 + incumbent.abs()) {
            continue;
        }
        let cycles = cycles_of(&succ);
        if cycles.len() == 1 {
            let mut order = Vec::with_capacity(n);
            let mut v = 0;
            for _ in 0..n {
                order.push(v);
                v = succ[v];
            }
            best = Some(Tour::new(inst, order));
            continue;
        }
        let free = |c: &Vec<usize>| -> Vec<(usize, usize)> {
            c.iter()
                .map(|&v| (v, succ[v]))
                .filter(|a| !node.included.contains(a))
                .collect()
        };
        let arcs = cycles
            .iter()
            .map(free)
            .min_by_key(|a| a.len())
            .expect("at least two cycles");
        for k in (0..arcs.len()).rev() {
            let mut excluded = node.excluded.clone();
            excluded.push(arcs[k]);
            let mut included = node.included.clone();
            included.extend_from_slice(&arcs[..k]);
            stack.push(Node {
                bound: total,
                included,
                excluded,
            });
        }
    }
    BnbReport {
        lower_bound: best.as_ref().map_or(f64::INFINITY, |t| t.cost),
        tour: best,
        optimal: true,
        nodes,
    }
}

/// Cycles of a permutation, each starting at its smallest node.
fn cycles_of(succ: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; succ.len()];
    let mut out = Vec::new();
    for s in 0..succ.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            c.push(v);
            v = succ[v];
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::held_karp;
    use crate::tsp::testing::random_atsp;

    #[test]
    fn matches_held_karp() {
        for seed in 0..20 {
            for n in [3, 5, 8, 11] {
                let inst = random_atsp(n, seed);
                let b = branch_and_bound(&inst, None).unwrap();
                b.validate(n).unwrap();
                assert_eq!(b.cost, held_karp(&inst).unwrap().cost, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn single_cycle_root_is_optimal() {
        // the cheap arcs form the cycle 0 -> 1 -> 2 -> 3 -> 0
        let mut c = vec![vec![10.0; 4]; 4];
        for i in 0..4 {
            c[i][(i + 1) % 4] = 1.0;
        }
        let inst = AtspInstance::new("ring", c).unwrap();
        let rep = branch_and_bound_report(&inst, None);
        assert_eq!(rep.nodes, 1);
        assert_eq!(rep.tour.unwrap().cost, 4.0);
    }

    #[test]
    fn forbidden_arcs_and_infeasible() {
        let mut inst = random_atsp(6, 3);
        inst.cost[0][1] = f64::INFINITY;
        inst.cost[2][3] = f64::INFINITY;
        assert_eq!(
            branch_and_bound(&inst, None).unwrap().cost,
            held_karp(&inst).unwrap().cost
        );
        for j in 1..6 {
            inst.cost[0][j] = f64::INFINITY;
        }
        assert!(matches!(
            branch_and_bound(&inst, None),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn zero_budget_times_out() {
        let inst = random_atsp(12, 1);
        match branch_and_bound(&inst, Some(Duration::ZERO)) {
            Err(Error::Timeout { bound, incumbent }) => {
                assert!(incumbent.is_none());
                assert!(bound <= held_karp(&inst).unwrap().cost);
            }
            other => panic!("{other:?}"),
        }
    }
}
