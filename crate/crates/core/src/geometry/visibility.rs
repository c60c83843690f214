//! Visibility polygon of a point by an angular sweep over vertex directions.
//!
//! Between two consecutive vertex directions the visible boundary is a
//! single edge piece, so the region is fully described by the one-sided
//! limits of the visible reach just before and just after every vertex
//! direction.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{dist_to_segment, proper_crossing, Point, SimplePolygon};
use crate::error::Result;

/// Star-shaped region of all points visible from `kernel`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisibilityRegion {
    pub kernel: Point,
    pub boundary: Vec<Point>,
}

impl VisibilityRegion {
    pub fn area(&self) -> f64 {
        let n = self.boundary.len();
        (0..n)
            .map(|i| self.boundary[i].cross(self.boundary[(i + 1) % n]))
            .sum::<f64>()
            .abs()
            / 2.0
    }

    /// Closure membership with tolerance `eps`.
    pub fn contains(&self, p: Point, eps: f64) -> bool {
        let n = self.boundary.len();
        if n < 3 {
            return self.boundary.iter().any(|b| b.dist(p) <= eps);
        }
        let mut inside = false;
        for i in 0..n {
            let a = self.boundary[i];
            let b = self.boundary[(i + 1) % n];
            if dist_to_segment(p, a, b) <= eps {
                return true;
            }
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Distance from the kernel to the region boundary along `dir`
    /// (farthest crossing, the region being star-shaped).
    pub fn reach(&self, dir: Point) -> f64 {
        let n = self.boundary.len();
        let d = dir * (1.0 / dir.norm());
        let mut best: f64 = 0.0;
        for i in 0..n {
            let a = self.boundary[i] - self.kernel;
            let b = self.boundary[(i + 1) % n] - self.kernel;
            let e = b - a;
            let denom = d.cross(e);
            if denom.abs() < 1e-300 {
                continue;
            }
            // kernel + t d = a + u e
            let t = a.cross(e) / denom;
            let u = a.cross(d) / denom;
            if (-1e-12..=1.0 + 1e-12).contains(&u) && t >= 0.0 {
                best = best.max(t);
            }
        }
        best
    }
}

/// The region `{ q in P : sees(P, p, q) }`.
pub fn visibility_polygon(poly: &SimplePolygon, p: Point) -> Result<VisibilityRegion> {
    poly.require(p, "viewpoint")?;
    Ok(Sweep::new(poly, p).run())
}

struct Sweep<'a> {
    poly: &'a SimplePolygon,
    p: Point,
    far: f64,
    /// Interior wedge (start direction, ccw span) when `p` is on the boundary.
    wedge: Option<(Point, f64)>,
}

fn angle_from(base: Point, d: Point) -> f64 {
    let a = base.cross(d).atan2(base.dot(d));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

impl<'a> Sweep<'a> {
    fn new(poly: &'a SimplePolygon, p: Point) -> Self {
        let (lo, hi) = poly.bbox();
        let far = 2.0 * lo.dist(hi) + 1.0;
        let eps = poly.eps();
        let n = poly.len();
        let mut wedge = None;
        for i in 0..n {
            let v = poly.vertex(i);
            if v.dist(p) <= eps {
                let next = poly.vertex(i + 1) - p;
                let prev = poly.vertex(i + n - 1) - p;
                wedge = Some((next, angle_from(next, prev)));
                break;
            }
        }
        if wedge.is_none() {
            for i in 0..n {
                let (a, b) = poly.edge(i);
                if dist_to_segment(p, a, b) <= eps {
                    let fwd = b - a;
                    wedge = Some((fwd, std::f64::consts::PI));
                    break;
                }
            }
        }
        Sweep {
            poly,
            p,
            far,
            wedge,
        }
    }

    /// Whether the ray along `d`, rotated infinitesimally towards `side`
    /// (+1 counter-clockwise), starts inside the polygon.
    fn leaves_inward(&self, d: Point, side: f64) -> bool {
        let Some((start, span)) = self.wedge else {
            return true;
        };
        let tol = 1e-12;
        let phi = angle_from(start, d);
        if phi < tol || phi > TAU - tol {
            return side > 0.0;
        }
        if (phi - span).abs() < tol {
            return side < 0.0;
        }
        phi < span
    }

    /// How far the exact ray stays inside the closed polygon.
    fn reach(&self, d: Point) -> f64 {
        let eps = self.poly.eps();
        let q = self.p + d * self.far;
        let len = self.far;
        let mut params = vec![0.0, 1.0];
        for &v in self.poly.vertices() {
            if dist_to_segment(v, self.p, q) <= eps {
                params.push(((v - self.p).dot(d) / len).clamp(0.0, 1.0));
            }
        }
        for (a, b) in self.poly.edges() {
            if let Some(t) = proper_crossing(self.p, q, a, b, eps) {
                params.push(t);
            }
        }
        params.sort_by(f64::total_cmp);
        params.dedup_by(|a, b| (*a - *b) * len <= 1e-12);
        let mut reach = 0.0;
        for w in params.windows(2) {
            if !self.poly.contains(self.p.lerp(q, 0.5 * (w[0] + w[1]))) {
                break;
            }
            reach = w[1];
        }
        reach * len
    }

    /// One-sided limit of the visible reach next to direction `d`.
    fn side_reach(&self, d: Point, reach: f64, side: f64) -> f64 {
        if !self.leaves_inward(d, side) {
            return 0.0;
        }
        let eps = self.poly.eps();
        let n = self.poly.len();
        let mut best = reach;
        for i in 0..n {
            let w = self.poly.vertex(i);
            let rel = w - self.p;
            let t = rel.dot(d);
            if t <= eps || t > best + eps || d.cross(rel).abs() > eps {
                continue;
            }
            let blocks = [self.poly.vertex(i + n - 1), self.poly.vertex(i + 1)]
                .iter()
                .any(|&nb| {
                    let e = nb - w;
                    side * d.cross(e) > 1e-12 * e.norm()
                });
            if blocks {
                best = best.min(t);
            }
        }
        best
    }

    fn run(&self) -> VisibilityRegion {
        let eps = self.poly.eps();
        let base = self.wedge.map(|w| w.0).unwrap_or(Point::new(1.0, 0.0));
        let mut dirs: Vec<(f64, Point)> = self
            .poly
            .vertices()
            .iter()
            .filter(|v| v.dist(self.p) > eps)
            .map(|&v| {
                let d = v - self.p;
                (angle_from(base, d), d * (1.0 / d.norm()))
            })
            .collect();
        dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
        dirs.dedup_by(|b, a| b.1.cross(a.1).abs() < 1e-12 && b.1.dot(a.1) > 0.0);

        let mut boundary = Vec::with_capacity(2 * dirs.len() + 1);
        if self.wedge.is_some() {
            boundary.push(self.p);
        }
        for &(_, d) in &dirs {
            let reach = self.reach(d);
            for side in [-1.0, 1.0] {
                let t = self.side_reach(d, reach, side);
                if t > eps {
                    boundary.push(self.p + d * t);
                }
            }
        }
        boundary.dedup_by(|a, b| a.dist(*b) <= 1e-12);
        while boundary.len() > 1 && boundary[0].dist(*boundary.last().unwrap()) <= 1e-12 {
            boundary.pop();
        }
        VisibilityRegion {
            kernel: self.p,
            boundary,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes::*;

    #[test]
    fn convex_region_is_whole_square() {
        let sq = unit_square();
        let vp = visibility_polygon(&sq, Point::new(0.5, 0.5)).unwrap();
        assert!((vp.area() - 1.0).abs() < 1e-12);
        let corner = visibility_polygon(&sq, Point::new(0.0, 0.0)).unwrap();
        assert!((corner.area() - 1.0).abs() < 1e-12);
        let edge = visibility_polygon(&sq, Point::new(0.5, 0.0)).unwrap();
        assert!((edge.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l_shape_region_misses_the_far_arm() {
        let l = l_shape();
        let vp = visibility_polygon(&l, Point::new(1.9, 0.5)).unwrap();
        let a = vp.area();
        assert!(a < 3.0 - 0.1, "area {a}");
        // the shadow boundary passes through the reflex vertex (1, 1)
        assert!(vp
            .boundary
            .iter()
            .any(|b| b.dist(Point::new(1.0, 1.0)) < 1e-12));
        // bottom arm (area 2) plus the triangle above y = 1 cut off by the
        // ray through (1, 1), which leaves through x = 0
        let y_exit = 0.5 + 0.5 * 1.9 / 0.9;
        let expected = 2.0 + 0.5 * (y_exit - 1.0);
        assert!((a - expected).abs() < 1e-9, "{a} vs {expected}");
    }

    #[test]
    fn reflex_vertex_kernel() {
        let l = l_shape();
        let vp = visibility_polygon(&l, Point::new(1.0, 1.0)).unwrap();
        assert!((vp.area() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn outside_kernel_is_domain_error() {
        assert!(visibility_polygon(&l_shape(), Point::new(1.5, 1.5)).is_err());
    }
}
