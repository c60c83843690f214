use super::{AtspInstance, Tour};
use crate::error::{Error, Result};

pub const HELD_KARP_CAP: usize = 20;

/// Subset dynamic program, optimal for up to [`HELD_KARP_CAP`] nodes.
pub fn held_karp(inst: &AtspInstance) -> Result<Tour> {
    held_karp_capped(inst, HELD_KARP_CAP)
}

pub fn held_karp_capped(inst: &AtspInstance, cap: usize) -> Result<Tour> {
    let n = inst.n();
    if n > cap {
        return Err(Error::Capacity(format!(
            "Held-Karp handles at most {cap} nodes, got {n}; use branch and bound"
        )));
    }
    if n <= 1 {
        return Ok(Tour::new(inst, (0..n).collect()));
    }
    let c = &inst.cost;
    // node 0 is the fixed start; subsets range over nodes 1..n
    let k = n - 1;
    let full = 1usize << k;
    let mut dp = vec![f64::INFINITY; full * k];
    let mut parent = vec![u8::MAX; full * k];
    for v in 0..k {
        dp[(1 << v) * k + v] = c[0][v + 1];
    }
    for set in 1..full {
        for last in 0..k {
            if set & (1 << last) == 0 {
                continue;
            }
            let cur = dp[set * k + last];
            if cur.is_infinite() {
                continue;
            }
            let mut rest = !set & (full - 1);
            while rest != 0 {
                let next = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let ns = set | (1 << next);
                let cand = cur + c[last + 1][next + 1];
                if cand < dp[ns * k + next] {
                    dp[ns * k + next] = cand;
                    parent[ns * k + next] = last as u8;
                }
            }
        }
    }
    let set = full - 1;
    let (mut last, best) =
        (0..k)
            .map(|v| (v, dp[set * k + v] + c[v + 1][0]))
            .fold(
                (0, f64::INFINITY),
                |acc, x| if x.1 < acc.1 { x } else { acc },
            );
    if best.is_infinite() {
        return Err(Error::Infeasible(
            "no tour avoids the forbidden arcs".into(),
        ));
    }
    let mut order = Vec::with_capacity(n);
    let mut s = set;
    while s != 0 {
        order.push(last + 1);
        let p = parent[s * k + last];
        s &= !(1 << last);
        last = p as usize;
    }
    order.push(0);
    order.reverse();
    Ok(Tour::new(inst, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::brute_force_tsp;
    use crate::tsp::testing::random_atsp;

    #[test]
    fn triangle_of_ones() {
        let one = vec![vec![1.0; 3]; 3];
        let inst = AtspInstance::new("tri", one).unwrap();
        assert_eq!(held_karp(&inst).unwrap().cost, 3.0);
    }

    #[test]
    fn matches_permutations() {
        for seed in 0..30 {
            for n in 2..=7 {
                let inst = random_atsp(n, seed);
                let hk = held_karp(&inst).unwrap();
                assert_eq!(
                    hk.cost,
                    brute_force_tsp(&inst).unwrap().cost,
                    "n={n} seed={seed}"
                );
                assert_eq!(hk.cost, inst.tour_cost(&hk.order));
                hk.validate(n).unwrap();
            }
        }
    }

    #[test]
    fn avoids_forbidden_arc() {
        let mut inst = random_atsp(4, 9);
        inst.cost[0][1] = f64::INFINITY;
        let t = held_karp(&inst).unwrap();
        assert!(t.cost.is_finite());
        assert!(t.order.windows(2).all(|w| w != [0, 1]));
    }

    #[test]
    fn caps_and_infeasible() {
        assert!(matches!(
            held_karp_capped(&random_atsp(6, 1), 5),
            Err(Error::Capacity(_))
        ));
        let mut inst = random_atsp(3, 2);
        for j in 1..3 {
            inst.cost[0][j] = f64::INFINITY;
        }
        assert!(matches!(held_karp(&inst), Err(Error::Infeasible(_))));
    }
}
