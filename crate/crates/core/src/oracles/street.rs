use serde::{Deserialize, Serialize};

use super::prim::{polyline_at, polyline_length, visible};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::street::{street_witnesses, StreetInstance, WitnessOptions};

pub const STREET_MAX_GRID: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreetOracle {
    /// Optimal makespan over plans whose endpoints and viewpoints are grid
    /// positions.
    pub makespan: f64,
    /// One grid step plus `t_m`.
    pub gap: f64,
    pub step: f64,
    pub witnesses: usize,
}

pub fn brute_street(inst: &StreetInstance, grid: usize) -> Result<StreetOracle> {
    let w = street_witnesses(&inst.polygon, &WitnessOptions::default());
    brute_street_with(inst, grid, &w)
}

/// [`brute_street`] over an explicit witness set.
pub fn brute_street_with(
    inst: &StreetInstance,
    grid: usize,
    witnesses: &[Point],
) -> Result<StreetOracle> {
    if grid > STREET_MAX_GRID {
        return Err(Error::Capacity(format!(
            "brute_street grid {grid} exceeds {STREET_MAX_GRID}"
        )));
    }
    if grid < 2 || inst.m == 0 || !(inst.t_m > 0.0) {
        return Err(Error::Domain(
            "brute_street needs grid >= 2, m >= 1 and t_m > 0".into(),
        ));
    }
    let poly = inst.polygon.vertices();
    let wp = inst.curve.waypoints();
    let len = polyline_length(wp);
    let step = len / (grid - 1) as f64;
    let s: Vec<f64> = (0..grid).map(|k| k as f64 * step).collect();
    let pts: Vec<Point> = s.iter().map(|&x| polyline_at(wp, x)).collect();

    // first run of grid positions seeing each witness
    let mut iv = Vec::with_capacity(witnesses.len());
    for (id, &x) in witnesses.iter().enumerate() {
        let vis: Vec<bool> = pts.iter().map(|&p| visible(poly, p, x)).collect();
        let Some(a) = vis.iter().position(|&v| v) else {
            return Err(Error::Infeasible(format!(
                "witness {id} is seen from no grid position"
            )));
        };
        let b = a + vis[a..].iter().take_while(|&&v| v).count() - 1;
        if vis[b + 1..].iter().any(|&v| v) {
            log::warn!(
                "witness {id} sees a disconnected part of the curve; keeping the first piece"
            );
        }
        iv.push((a, b));
    }
    let gap = step + inst.t_m;
    if iv.is_empty() {
        return Ok(StreetOracle {
            makespan: 0.0,
            gap,
            step,
            witnesses: 0,
        });
    }
    // hop p -> q skips no witness iff q <= reach[p]
    let reach: Vec<usize> = (0..grid)
        .map(|p| {
            iv.iter()
                .filter(|&&(a, _)| a > p)
                .map(|&(_, b)| b)
                .min()
                .unwrap_or(grid)
        })
        .collect();
    let head = iv.iter().map(|&(_, b)| b).min().unwrap();
    let tail = iv.iter().map(|&(a, _)| a).max().unwrap();

    // cost[f][l]: cheapest path with first viewpoint f and last viewpoint l
    let mut cost = vec![vec![f64::INFINITY; grid]; grid];
    let mut cnt = vec![usize::MAX; grid];
    for f in 0..grid {
        cnt.iter_mut().for_each(|c| *c = usize::MAX);
        cnt[f] = 1;
        for l in f + 1..grid {
            cnt[l] = (f..l)
                .filter(|&p| cnt[p] != usize::MAX && reach[p] >= l)
                .map(|p| cnt[p] + 1)
                .min()
                .unwrap_or(usize::MAX);
        }
        for l in f..grid {
            if cnt[l] != usize::MAX {
                cost[f][l] = s[l] - s[f] + inst.t_m * cnt[l] as f64;
            }
        }
    }

    // h[l]: best makespan of plans whose last viewpoint is l
    let mut h: Vec<f64> = (0..grid)
        .map(|l| {
            (0..=l.min(head))
                .map(|f| cost[f][l])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    for _ in 1..inst.m {
        let g: Vec<f64> = (0..grid)
            .map(|f| {
                (0..f)
                    .filter(|&p| reach[p] >= f)
                    .map(|p| h[p])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        h = (0..grid)
            .map(|l| (0..=l).map(|f| g[f].max(cost[f][l])).fold(h[l], f64::min))
            .collect();
    }
    let makespan = h[tail..].iter().copied().fold(f64::INFINITY, f64::min);
    Ok(StreetOracle {
        makespan,
        gap,
        step,
        witnesses: iv.len(),
    })
}
