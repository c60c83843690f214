//! Stand-alone polygon predicates for the oracles.
//!
//! Nothing here calls into the geometry module apart from `Point`.

use crate::geometry::Point;

/// Boundary slack, tighter than the solvers so that bisected interval
/// endpoints land within about 1e-11 of the exact ones.
pub const EPS: f64 = 1e-12;

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

pub fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.x + t * dx - p.x, a.y + t * dy - p.y);
    (qx * qx + qy * qy).sqrt()
}

fn edges(poly: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    (0..poly.len()).map(move |i| (poly[i], poly[(i + 1) % poly.len()]))
}

pub fn on_boundary(poly: &[Point], p: Point) -> bool {
    edges(poly).any(|(a, b)| seg_dist(p, a, b) <= EPS)
}

/// Winding number of the boundary around `p`.
fn winding(poly: &[Point], p: Point) -> i32 {
    let mut w = 0;
    for (a, b) in edges(poly) {
        if a.y <= p.y {
            if b.y > p.y && cross(a, b, p) > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && cross(a, b, p) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Membership in the closed polygon.
pub fn inside(poly: &[Point], p: Point) -> bool {
    on_boundary(poly, p) || winding(poly, p) != 0
}

/// Parameters `t` in `[0, 1]` at which `p + t (q - p)` meets the boundary.
pub fn boundary_params(poly: &[Point], p: Point, q: Point) -> Vec<f64> {
    let (dx, dy) = (q.x - p.x, q.y - p.y);
    let l2 = dx * dx + dy * dy;
    let proj = |v: Point| ((v.x - p.x) * dx + (v.y - p.y) * dy) / l2;
    let mut out = Vec::new();
    for (a, b) in edges(poly) {
        let (ex, ey) = (b.x - a.x, b.y - a.y);
        let den = dx * ey - dy * ex;
        if den.abs() > 1e-14 * (l2.sqrt() * (ex * ex + ey * ey).sqrt()) {
            // p + t d = a + u e
            let t = ((a.x - p.x) * ey - (a.y - p.y) * ex) / den;
            let u = ((a.x - p.x) * dy - (a.y - p.y) * dx) / den;
            if (-1e-12..=1.0 + 1e-12).contains(&u) && (-1e-12..=1.0 + 1e-12).contains(&t) {
                out.push(t.clamp(0.0, 1.0));
            }
        }
        for v in [a, b] {
            if seg_dist(v, p, q) <= EPS {
                out.push(proj(v).clamp(0.0, 1.0));
            }
        }
    }
    out
}

/// True iff the closed segment `pq` stays in the closed polygon.
pub fn visible(poly: &[Point], p: Point, q: Point) -> bool {
    let (dx, dy) = (q.x - p.x, q.y - p.y);
    if (dx * dx + dy * dy).sqrt() <= EPS {
        return inside(poly, p);
    }
    let mut ts = boundary_params(poly, p, q);
    ts.push(0.0);
    ts.push(1.0);
    ts.sort_by(f64::total_cmp);
    if !inside(poly, p) || !inside(poly, q) {
        return false;
    }
    ts.windows(2).filter(|w| w[1] - w[0] > 1e-13).all(|w| {
        let t = 0.5 * (w[0] + w[1]);
        inside(poly, Point::new(p.x + t * dx, p.y + t * dy))
    })
}

/// Point at arc length `s` along the polyline `wp`.
pub fn polyline_at(wp: &[Point], s: f64) -> Point {
    let mut rest = s.max(0.0);
    for w in wp.windows(2) {
        let l = w[0].dist(w[1]);
        if rest <= l {
            let t = if l > 0.0 { rest / l } else { 0.0 };
            return Point::new(
                w[0].x + t * (w[1].x - w[0].x),
                w[0].y + t * (w[1].y - w[0].y),
            );
        }
        rest -= l;
    }
    *wp.last().expect("non-empty polyline")
}

pub fn polyline_length(wp: &[Point]) -> f64 {
    wp.windows(2).map(|w| w[0].dist(w[1])).sum()
}
