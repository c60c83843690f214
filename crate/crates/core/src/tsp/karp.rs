use serde::{Deserialize, Serialize};

use super::{AtspInstance, Tour};
use crate::error::{Error, Result};

/// Symmetric instance on `2n` nodes built from a directed one.
///
/// Node `i` keeps its index and gains a ghost `n + i`. The pair is joined
/// by a zero-cost edge; ghost `n + i` and node `j` are joined at cost
/// `c(i, j) + big`. Every other pair is forbidden. An optimal symmetric
/// tour alternates node and ghost and costs the directed optimum plus
/// `offset = n * big`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Symmetrized {
    pub instance: AtspInstance,
    pub n: usize,
    pub offset: f64,
}

pub fn karp_symmetrize(inst: &AtspInstance) -> Symmetrized {
    let n = inst.n();
    let big = 1.0
        + inst
            .cost
            .iter()
            .flatten()
            .filter(|c| c.is_finite())
            .map(|c| c.abs())
            .sum::<f64>();
    let mut cost = vec![vec![f64::INFINITY; 2 * n]; 2 * n];
    for i in 0..n {
        cost[i][n + i] = 0.0;
        cost[n + i][i] = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            let c = inst.cost[i][j] + big;
            cost[n + i][j] = c;
            cost[j][n + i] = c;
        }
    }
    let mut instance = AtspInstance::new(format!("{}_sym", inst.name), cost)
        .expect("square matrix by construction");
    instance.penalty = inst.penalty.map(|p| p + big);
    Symmetrized {
        instance,
        n,
        offset: n as f64 * big,
    }
}

impl Symmetrized {
    /// Maps a symmetric tour back to a directed tour of the original nodes.
    pub fn decode(&self, tour: &[usize], original: &AtspInstance) -> Result<Tour> {
        let n = self.n;
        if tour.len() != 2 * n {
            return Err(Error::Decode(format!(
                "symmetric tour has {} nodes, expected {}",
                tour.len(),
                2 * n
            )));
        }
        if n == 0 {
            return Ok(Tour::new(original, Vec::new()));
        }
        let at = tour
            .iter()
            .position(|&v| v == 0)
            .ok_or_else(|| Error::Decode("node 0 missing".into()))?;
        let rot: Vec<usize> = (0..2 * n).map(|k| tour[(at + k) % (2 * n)]).collect();
        // read the cycle in the direction where each node is followed by its ghost
        let seq: Vec<usize> = if rot[1] == n {
            rot
        } else {
            std::iter::once(0)
                .chain(rot[1..].iter().rev().copied())
                .collect()
        };
        let mut order = Vec::with_capacity(n);
        for pair in seq.chunks(2) {
            if pair[0] >= n || pair[1] != pair[0] + n {
                return Err(Error::Decode(format!(
                    "symmetric tour does not pair node {} with its ghost",
                    pair[0]
                )));
            }
            order.push(pair[0]);
        }
        Ok(Tour::new(original, order))
    }
}
