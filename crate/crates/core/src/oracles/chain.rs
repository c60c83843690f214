use super::prim::{polyline_at, polyline_length, visible};
use crate::chain::ChainInstance;
use crate::error::{Error, Result};
use crate::geometry::Point;

pub const CHAIN_MAX_TARGETS: usize = 6;
pub const CHAIN_MAX_ROBOTS: usize = 3;

/// Arc-length interval of the curve seeing each target.
///
/// Visibility is sampled at `grid` evenly spaced positions and each
/// endpoint is refined by bisection between the last unseen and first seen
/// sample, so intervals shorter than one grid step may be missed.
pub fn oracle_intervals(
    poly: &[Point],
    waypoints: &[Point],
    targets: &[Point],
    grid: usize,
) -> Result<Vec<(f64, f64)>> {
    if grid < 2 {
        return Err(Error::Domain("grid needs at least two samples".into()));
    }
    let len = polyline_length(waypoints);
    let pos = |k: usize| len * k as f64 / (grid - 1) as f64;
    let mut out = Vec::with_capacity(targets.len());
    for (id, &x) in targets.iter().enumerate() {
        let sees = |s: f64| visible(poly, polyline_at(waypoints, s), x);
        let vis: Vec<bool> = (0..grid).map(|k| sees(pos(k))).collect();
        let runs = (0..grid)
            .filter(|&k| vis[k] && (k == 0 || !vis[k - 1]))
            .count();
        if runs == 0 {
            return Err(Error::Infeasible(format!(
                "no grid position sees target {id}"
            )));
        }
        if runs > 1 {
            return Err(Error::ChainViolation {
                target: id,
                pieces: runs,
            });
        }
        let first = vis.iter().position(|&v| v).unwrap();
        let last = vis.iter().rposition(|&v| v).unwrap();
        let bisect = |mut out_s: f64, mut in_s: f64| {
            for _ in 0..64 {
                let mid = 0.5 * (out_s + in_s);
                if sees(mid) {
                    in_s = mid;
                } else {
                    out_s = mid;
                }
            }
            in_s
        };
        let l = if first == 0 {
            0.0
        } else {
            bisect(pos(first - 1), pos(first))
        };
        let r = if last == grid - 1 {
            len
        } else {
            bisect(pos(last + 1), pos(last))
        };
        out.push((l, r));
    }
    Ok(out)
}

/// Optimal makespan for covering `intervals` with at most `m` paths.
///
/// Every group of targets is priced by enumerating all viewpoint subsets
/// of the interval endpoints, then groups are combined over all set
/// partitions.
pub fn brute_chain_intervals(intervals: &[(f64, f64)], m: usize, t_m: f64) -> Result<f64> {
    let k = intervals.len();
    check_caps(k, m)?;
    let mut cand: Vec<f64> = intervals.iter().flat_map(|&(l, r)| [l, r]).collect();
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    let full = (1usize << k) - 1;
    let mut group = vec![f64::INFINITY; full + 1];
    group[0] = 0.0;
    for s in 1usize..(1 << cand.len()) {
        let pts: Vec<f64> = (0..cand.len())
            .filter(|b| s >> b & 1 == 1)
            .map(|b| cand[b])
            .collect();
        let cost = (pts[pts.len() - 1] - pts[0]) + t_m * pts.len() as f64;
        let mut stabbed = 0;
        for (i, &(l, r)) in intervals.iter().enumerate() {
            if pts.iter().any(|&p| l - 1e-12 <= p && p <= r + 1e-12) {
                stabbed |= 1 << i;
            }
        }
        // a viewpoint set serves every group it stabs
        let mut sub = stabbed;
        while sub > 0 {
            if cost < group[sub] {
                group[sub] = cost;
            }
            sub = (sub - 1) & stabbed;
        }
    }
    let mut best = group.clone();
    for _ in 1..m {
        let prev = best.clone();
        for mask in 1..=full {
            let mut sub = mask;
            while sub > 0 {
                let v = prev[mask ^ sub].max(group[sub]);
                if v < best[mask] {
                    best[mask] = v;
                }
                sub = (sub - 1) & mask;
            }
        }
    }
    Ok(best[full])
}

fn check_caps(k: usize, m: usize) -> Result<()> {
    if k > CHAIN_MAX_TARGETS || m > CHAIN_MAX_ROBOTS {
        return Err(Error::Capacity(format!(
            "brute_chain handles at most {CHAIN_MAX_TARGETS} targets and {CHAIN_MAX_ROBOTS} robots, got {k} and {m}"
        )));
    }
    if m == 0 {
        return Err(Error::Domain("at least one robot is needed".into()));
    }
    Ok(())
}

pub fn brute_chain(inst: &ChainInstance, grid: usize) -> Result<f64> {
    check_caps(inst.targets.len(), inst.m)?;
    let iv = oracle_intervals(
        inst.polygon.vertices(),
        inst.curve.waypoints(),
        &inst.targets,
        grid,
    )?;
    brute_chain_intervals(&iv, inst.m, inst.t_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shapes::u_shape, Curve};

    fn u(m: usize) -> ChainInstance {
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
    fn u_intervals_and_makespans() {
        let i = u(1);
        let iv =
            oracle_intervals(i.polygon.vertices(), i.curve.waypoints(), &i.targets, 101).unwrap();
        assert!(iv[0].0.abs() < 1e-10 && (iv[0].1 - 14.0 / 18.0).abs() < 1e-10);
        assert!((iv[1].0 - 22.0 / 18.0).abs() < 1e-10 && (iv[1].1 - 2.0).abs() < 1e-10);
        assert!((brute_chain(&u(2), 101).unwrap() - 1.0).abs() < 1e-10);
        assert!((brute_chain(&u(1), 101).unwrap() - (8.0 / 18.0 + 2.0)).abs() < 1e-10);
    }

    #[test]
    fn single_path_example() {
        // both intervals stabbed at their inner endpoints
        let v = brute_chain_intervals(&[(0.0, 1.0), (2.0, 3.0)], 1, 1.0).unwrap();
        assert_eq!(v, 3.0);
    }

    #[test]
    fn caps() {
        assert!(matches!(
            brute_chain_intervals(&[(0.0, 1.0); 7], 1, 1.0),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            brute_chain_intervals(&[(0.0, 1.0)], 4, 1.0),
            Err(Error::Capacity(_))
        ));
        assert_eq!(brute_chain_intervals(&[], 2, 1.0).unwrap(), 0.0);
    }
}
