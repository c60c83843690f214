use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gtsp::{DepotScenario, GtspInstance};

pub const GTSP_MAX_VIEWPOINTS: usize = 8;
pub const GTSP_MAX_ROBOTS: usize = 2;

fn for_each_permutation(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

struct Paths<'a> {
    g: &'a GtspInstance,
    memo: HashMap<(usize, usize, usize), f64>,
}

impl Paths<'_> {
    /// Shortest walk from depot `s` through every viewpoint of `mask` to
    /// depot `f`, over all visit orders.
    fn cost(&mut self, s: usize, f: usize, mask: usize) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        if let Some(&c) = self.memo.get(&(s, f, mask)) {
            return c;
        }
        let g = self.g;
        let mut items: Vec<usize> = (0..g.n()).filter(|v| mask >> v & 1 == 1).collect();
        let mut best = f64::INFINITY;
        for_each_permutation(&mut items, 0, &mut |p| {
            let mut c = g.depot_cost[s][p[0]] + g.depot_cost[f][p[p.len() - 1]];
            for w in p.windows(2) {
                c += g.cost[w[0]][w[1]];
            }
            best = best.min(c);
        });
        self.memo.insert((s, f, mask), best);
        best
    }
}

/// Exact minimum total path length by exhaustive enumeration.
pub fn brute_gtsp(g: &GtspInstance) -> Result<f64> {
    let n = g.n();
    let m = g.m;
    if n > GTSP_MAX_VIEWPOINTS || m > GTSP_MAX_ROBOTS {
        return Err(Error::Capacity(format!(
            "brute_gtsp handles at most {GTSP_MAX_VIEWPOINTS} viewpoints and {GTSP_MAX_ROBOTS} robots, got {n} and {m}"
        )));
    }
    if m == 0 {
        return Err(Error::Domain("at least one robot is needed".into()));
    }
    let cluster_masks: Vec<usize> = g
        .clusters
        .iter()
        .map(|c| c.iter().fold(0, |a, &v| a | 1 << v))
        .collect();
    let mut paths = Paths {
        g,
        memo: HashMap::new(),
    };
    let mut best = f64::INFINITY;
    for subset in 0usize..(1 << n) {
        if cluster_masks.iter().any(|&c| c & subset == 0) {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|v| subset >> v & 1 == 1).collect();
        let combos = m.pow(members.len() as u32);
        for code in 0..combos {
            let mut masks = vec![0usize; m];
            let mut c = code;
            for &v in &members {
                masks[c % m] |= 1 << v;
                c /= m;
            }
            let total = match &g.scenario {
                DepotScenario::SameDepot { .. } => {
                    masks.iter().map(|&mk| paths.cost(0, 0, mk)).sum()
                }
                DepotScenario::SameFinish { starts, .. } => {
                    let fin = starts.len();
                    masks
                        .iter()
                        .enumerate()
                        .map(|(k, &mk)| paths.cost(k, fin, mk))
                        .sum()
                }
                DepotScenario::Interchangeable { .. } => {
                    let mut active: Vec<usize> = (0..m).filter(|&k| masks[k] != 0).collect();
                    let starts = active.clone();
                    let mut t = f64::INFINITY;
                    for_each_permutation(&mut active, 0, &mut |ends| {
                        let c: f64 = starts
                            .iter()
                            .zip(ends)
                            .map(|(&k, &e)| paths.cost(k, e, masks[k]))
                            .sum();
                        t = t.min(c);
                    });
                    t
                }
            };
            best = best.min(total);
        }
    }
    Ok(best)
}
