use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::prim::{boundary_params, inside, visible};
use crate::error::{Error, Result};
use crate::geometry::{Point, SimplePolygon};

/// First boundary hit distances from `origin` along sampled directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaySignature {
    pub origin: Point,
    /// Unit directions.
    pub directions: Vec<Point>,
    pub hits: Vec<f64>,
}

/// How far the ray from `p` along unit `dir` stays in the closed polygon.
pub fn ray_reach(poly: &[Point], p: Point, dir: Point) -> f64 {
    let (lo, hi) = poly.iter().fold(
        (
            Point::new(f64::MAX, f64::MAX),
            Point::new(f64::MIN, f64::MIN),
        ),
        |(lo, hi), v| {
            (
                Point::new(lo.x.min(v.x), lo.y.min(v.y)),
                Point::new(hi.x.max(v.x), hi.y.max(v.y)),
            )
        },
    );
    let far = 2.0 * lo.dist(hi) + 1.0;
    let q = Point::new(p.x + far * dir.x, p.y + far * dir.y);
    let mut ts = boundary_params(poly, p, q);
    ts.push(0.0);
    ts.push(1.0);
    ts.sort_by(f64::total_cmp);
    let mut reach = 0.0;
    for w in ts.windows(2) {
        if w[1] - w[0] <= 1e-15 {
            continue;
        }
        let t = 0.5 * (w[0] + w[1]);
        if !inside(
            poly,
            Point::new(p.x + t * far * dir.x, p.y + t * far * dir.y),
        ) {
            break;
        }
        reach = w[1];
    }
    reach * far
}

pub fn raycast_vp(poly: &SimplePolygon, p: Point, rays: usize, seed: u64) -> Result<RaySignature> {
    let verts = poly.vertices();
    if rays == 0 {
        return Err(Error::Domain("at least one ray is needed".into()));
    }
    if !p.is_finite() || !inside(verts, p) {
        return Err(Error::Domain(format!(
            "({}, {}) lies outside the polygon",
            p.x, p.y
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directions: Vec<Point> = (0..rays)
        .map(|_| {
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            Point::new(a.cos(), a.sin())
        })
        .collect();
    let hits = directions.iter().map(|&d| ray_reach(verts, p, d)).collect();
    Ok(RaySignature {
        origin: p,
        directions,
        hits,
    })
}

/// Geodesic distance by Dijkstra on the visibility graph of all vertices.
pub fn geodesic_distance(poly: &SimplePolygon, s: Point, t: Point) -> Result<f64> {
    let verts = poly.vertices();
    for x in [s, t] {
        if !x.is_finite() || !inside(verts, x) {
            return Err(Error::Domain(format!(
                "({}, {}) lies outside the polygon",
                x.x, x.y
            )));
        }
    }
    let mut nodes = vec![s, t];
    nodes.extend_from_slice(verts);
    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    for _ in 0..n {
        let Some(u) = (0..n)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
        else {
            break;
        };
        if u == 1 {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if !done[v] && visible(verts, nodes[u], nodes[v]) {
                let d = dist[u] + nodes[u].dist(nodes[v]);
                if d < dist[v] {
                    dist[v] = d;
                }
            }
        }
    }
    Ok(dist[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes::{l_shape, unit_square};

    #[test]
    fn convex_signature_is_boundary_distance() {
        let sq = unit_square();
        let sig = raycast_vp(&sq, Point::new(0.5, 0.5), 200, 1).unwrap();
        for (d, h) in sig.directions.iter().zip(&sig.hits) {
            let tx = if d.x > 0.0 {
                0.5 / d.x
            } else if d.x < 0.0 {
                -0.5 / d.x
            } else {
                f64::INFINITY
            };
            let ty = if d.y > 0.0 {
                0.5 / d.y
            } else if d.y < 0.0 {
                -0.5 / d.y
            } else {
                f64::INFINITY
            };
            assert!((h - tx.min(ty)).abs() < 1e-9);
        }
    }

    #[test]
    fn l_bend_around_the_reflex_vertex() {
        let l = l_shape();
        let (s, t, r) = (
            Point::new(1.9, 0.5),
            Point::new(0.5, 1.9),
            Point::new(1.0, 1.0),
        );
        let d = geodesic_distance(&l, s, t).unwrap();
        assert!((d - (s.dist(r) + r.dist(t))).abs() < 1e-12);
        assert_eq!(geodesic_distance(&l, s, s).unwrap(), 0.0);
    }

    #[test]
    fn outward_rays_from_the_boundary_have_zero_reach() {
        let sq = unit_square();
        assert_eq!(
            ray_reach(sq.vertices(), Point::new(0.5, 0.0), Point::new(0.0, -1.0)),
            0.0
        );
        assert!(
            (ray_reach(sq.vertices(), Point::new(0.5, 0.0), Point::new(0.0, 1.0)) - 1.0).abs()
                < 1e-12
        );
    }
}
