//! Exact solvers for small asymmetric TSP instances, and TSPLIB exchange.
//!
//! Forbidden arcs are `f64::INFINITY`. Tours are cycles given as a node
//! order starting at node 0.

mod bnb;
mod held_karp;
mod hungarian;
mod karp;
mod tsplib;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bnb::{branch_and_bound, branch_and_bound_report, BnbReport};
pub use held_karp::{held_karp, held_karp_capped, HELD_KARP_CAP};
pub use hungarian::assignment;
pub use karp::{karp_symmetrize, Symmetrized};
pub use tsplib::{export_tsplib, import_tsplib, parse_tour, write_tour, DEFAULT_SCALE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtspInstance {
    pub name: String,
    /// `cost[i][j]` is the arc `i -> j`; the diagonal is ignored.
    pub cost: Vec<Vec<f64>>,
    /// Largest penalty used to build the instance, if any; sizes the
    /// infinity sentinel on export.
    pub penalty: Option<f64>,
}

impl AtspInstance {
    pub fn new(name: impl Into<String>, cost: Vec<Vec<f64>>) -> Result<Self> {
        let n = cost.len();
        for (i, row) in cost.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(j) = row
                .iter()
                .position(|c| c.is_nan() || *c == f64::NEG_INFINITY)
            {
                return Err(Error::Domain(format!(
                    "cost[{i}][{j}] is not a usable number"
                )));
            }
        }
        let mut cost = cost;
        for (i, row) in cost.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        Ok(AtspInstance {
            name: name.into(),
            cost,
            penalty: None,
        })
    }

    pub fn n(&self) -> usize {
        self.cost.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..i).all(|j| self.cost[i][j] == self.cost[j][i]))
    }

    /// Cost of the closed tour visiting `order`.
    pub fn tour_cost(&self, order: &[usize]) -> f64 {
        let k = order.len();
        if k < 2 {
            return 0.0;
        }
        (0..k)
            .map(|t| self.cost[order[t]][order[(t + 1) % k]])
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<usize>,
    pub cost: f64,
}

impl Tour {
    pub fn new(inst: &AtspInstance, order: Vec<usize>) -> Self {
        let cost = inst.tour_cost(&order);
        Tour { order, cost }
    }

    /// Checks that `order` is a permutation of the instance's nodes.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        if self.order.len() != n {
            return Err(Error::Decode(format!(
                "tour has {} nodes, expected {n}",
                self.order.len()
            )));
        }
        for &v in &self.order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Decode(format!(
                    "node {v} is out of range or repeated"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Solver {
    HeldKarp,
    #[default]
    BranchAndBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverOptions {
    pub solver: Solver,
    /// Wall-clock budget for branch and bound, in seconds.
    pub time_budget: Option<f64>,
}

pub fn solve(inst: &AtspInstance, opts: &SolverOptions) -> Result<Tour> {
    match opts.solver {
        Solver::HeldKarp => held_karp(inst),
        Solver::BranchAndBound => branch_and_bound(
            inst,
            opts.time_budget.map(std::time::Duration::from_secs_f64),
        ),
    }
}

/// Minimum over every cyclic order by enumeration; for tests only.
pub fn brute_force_tsp(inst: &AtspInstance) -> Result<Tour> {
    let n = inst.n();
    if n > 10 {
        return Err(Error::Capacity(format!(
            "permutation enumeration is capped at 10 nodes, got {n}"
        )));
    }
    if n <= 1 {
        return Ok(Tour::new(inst, (0..n).collect()));
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best: Option<Tour> = None;
    permute(&mut rest, 0, &mut |p| {
        let mut order = vec![0];
        order.extend_from_slice(p);
        let c = inst.tour_cost(&order);
        if best.as_ref().map_or(true, |b| c < b.cost) {
            best = Some(Tour { order, cost: c });
        }
    });
    let best = best.unwrap();
    if best.cost.is_infinite() {
        return Err(Error::Infeasible("every tour uses a forbidden arc".into()));
    }
    Ok(best)
}

pub(crate) fn permute<T>(v: &mut [T], k: usize, f: &mut impl FnMut(&[T])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::AtspInstance;

    pub fn random_atsp(n: usize, seed: u64) -> AtspInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cost = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| rng.gen_range(0.0..100.0f64).round())
                    .collect()
            })
            .collect();
        AtspInstance::new(format!("rand{n}_{seed}"), cost).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tour_cost_wraps_around() {
        let inst = AtspInstance::new(
            "t",
            vec![
                vec![0.0, 1.0, 5.0],
                vec![5.0, 0.0, 2.0],
                vec![3.0, 5.0, 0.0],
            ],
        )
        .unwrap();
        assert_eq!(inst.tour_cost(&[0, 1, 2]), 6.0);
        assert_eq!(inst.tour_cost(&[0, 2, 1]), 15.0);
        assert_eq!(brute_force_tsp(&inst).unwrap().cost, 6.0);
    }

    #[test]
    fn rejects_ragged_and_nan() {
        assert!(AtspInstance::new("r", vec![vec![0.0, 1.0], vec![0.0]]).is_err());
        assert!(AtspInstance::new("n", vec![vec![0.0, f64::NAN], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn validate_tours() {
        assert!(Tour {
            order: vec![0, 2, 1],
            cost: 0.0
        }
        .validate(3)
        .is_ok());
        assert!(Tour {
            order: vec![0, 0, 1],
            cost: 0.0
        }
        .validate(3)
        .is_err());
        assert!(Tour {
            order: vec![0, 1],
            cost: 0.0
        }
        .validate(3)
        .is_err());
    }
}
