//! Planar geometry kernel: points, hole-free polygons, visibility and
//! geodesic distances.
//!
//! All predicates use an absolute tolerance (`SimplePolygon::eps`, default
//! [`DEFAULT_EPS`]). Contact with the boundary counts as inside, so a sight
//! line that grazes a reflex vertex is not blocked.

mod coverage;
mod curve;
mod path;
mod visibility;

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use coverage::{coverage_fraction, sample_interior};
pub use curve::{
    check_chain_visibility, curve_interval, visible_pieces, ChainReport, Curve, CurveInterval,
    CurveVisibility,
};
pub use path::{shortest_path, Geodesics, PolylinePath};
pub use visibility::{visibility_polygon, VisibilityRegion};

pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point { x: a[0], y: a[1] }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Twice the signed area of triangle `abc`; positive when counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

pub fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Parameter `t` on `p + t (q - p)` where the segments `pq` and `ab` cross
/// properly (each strictly separates the other's endpoints by more than `eps`).
pub(crate) fn proper_crossing(p: Point, q: Point, a: Point, b: Point, eps: f64) -> Option<f64> {
    let d = q - p;
    let e = b - a;
    let dl = d.norm();
    let el = e.norm();
    if dl == 0.0 || el == 0.0 {
        return None;
    }
    let sa = d.cross(a - p) / dl;
    let sb = d.cross(b - p) / dl;
    if !((sa > eps && sb < -eps) || (sa < -eps && sb > eps)) {
        return None;
    }
    let sp = e.cross(p - a) / el;
    let sq = e.cross(q - a) / el;
    if !((sp > eps && sq < -eps) || (sp < -eps && sq > eps)) {
        return None;
    }
    Some(sp / (sp - sq))
}

/// A hole-free polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
    eps: f64,
}

impl SimplePolygon {
    /// Normalizes (drops repeated and collinear vertices, orients
    /// counter-clockwise) and validates a polygon.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Self::with_eps(vertices, DEFAULT_EPS)
    }

    pub fn with_eps(mut vertices: Vec<Point>, eps: f64) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("polygon has a non-finite coordinate".into()));
        }
        // repeated vertices
        vertices.dedup_by(|a, b| a.dist(*b) <= eps);
        while vertices.len() > 1 && vertices[0].dist(*vertices.last().unwrap()) <= eps {
            vertices.pop();
        }
        // collinear vertices that continue in the same direction
        loop {
            let n = vertices.len();
            if n < 3 {
                break;
            }
            let idx = (0..n).find(|&i| {
                let a = vertices[(i + n - 1) % n];
                let b = vertices[i];
                let c = vertices[(i + 1) % n];
                let ac = c - a;
                dist_to_segment(b, a, c) <= eps && (b - a).dot(ac) > 0.0 && (c - b).dot(ac) > 0.0
            });
            match idx {
                Some(i) => {
                    vertices.remove(i);
                }
                None => break,
            }
        }
        if vertices.len() < 3 {
            return Err(Error::Domain(
                "polygon needs at least 3 distinct vertices".into(),
            ));
        }
        let mut poly = SimplePolygon { vertices, eps };
        if poly.signed_area() < 0.0 {
            poly.vertices.reverse();
        }
        if poly.signed_area() <= eps {
            return Err(Error::Domain("polygon has zero area".into()));
        }
        poly.check_simple()?;
        Ok(poly)
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (c, d) = self.edge(j);
                if adjacent {
                    // only the shared vertex may touch
                    let (other, mine) = if j == i + 1 { (d, a) } else { (c, b) };
                    if dist_to_segment(other, a, b) <= self.eps
                        || dist_to_segment(mine, c, d) <= self.eps
                    {
                        return Err(Error::Domain(format!("edges {i} and {j} overlap")));
                    }
                    continue;
                }
                if segments_touch(a, b, c, d, self.eps) {
                    return Err(Error::Domain(format!(
                        "polygon boundary is not simple: edges {i} and {j} intersect"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
            / 2.0
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// (min, max) corners of the bounding box.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        let n = self.vertices.len();
        let a = self.vertices[(i + n - 1) % n];
        let b = self.vertices[i % n];
        let c = self.vertices[(i + 1) % n];
        orient(a, b, c) < 0.0
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.edges()
            .any(|(a, b)| dist_to_segment(p, a, b) <= self.eps)
    }

    /// Closure membership: interior or within `eps` of the boundary.
    pub fn contains(&self, p: Point) -> bool {
        self.on_boundary(p) || self.contains_strict(p)
    }

    fn contains_strict(&self, p: Point) -> bool {
        // crossing number
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    pub(crate) fn require(&self, p: Point, what: &str) -> Result<()> {
        if !p.is_finite() || !self.contains(p) {
            return Err(Error::Domain(format!(
                "{what} ({}, {}) lies outside the polygon",
                p.x, p.y
            )));
        }
        Ok(())
    }

    /// True iff the closed segment `pq` lies in the closed polygon.
    pub fn sees(&self, p: Point, q: Point) -> Result<bool> {
        self.require(p, "point")?;
        self.require(q, "point")?;
        Ok(self.sees_unchecked(p, q))
    }

    /// `sees` without the membership checks on the endpoints.
    pub fn sees_unchecked(&self, p: Point, q: Point) -> bool {
        let d = q - p;
        let len = d.norm();
        if len <= self.eps {
            return true;
        }
        let len2 = len * len;
        let mut params = vec![0.0, 1.0];
        for &v in &self.vertices {
            if dist_to_segment(v, p, q) <= self.eps {
                params.push(((v - p).dot(d) / len2).clamp(0.0, 1.0));
            }
        }
        for (a, b) in self.edges() {
            if let Some(t) = proper_crossing(p, q, a, b, self.eps) {
                params.push(t);
            }
        }
        params.sort_by(f64::total_cmp);
        params.dedup_by(|a, b| (*a - *b) * len <= 1e-12);
        params
            .windows(2)
            .all(|w| self.contains(p.lerp(q, 0.5 * (w[0] + w[1]))))
    }
}

fn segments_touch(a: Point, b: Point, c: Point, d: Point, eps: f64) -> bool {
    if proper_crossing(a, b, c, d, eps).is_some() {
        return true;
    }
    dist_to_segment(a, c, d) <= eps
        || dist_to_segment(b, c, d) <= eps
        || dist_to_segment(c, a, b) <= eps
        || dist_to_segment(d, a, b) <= eps
}

/// Sample polygons used throughout the docs and tests.
pub mod shapes {
    use super::{Point, SimplePolygon};

    pub fn unit_square() -> SimplePolygon {
        rect(0.0, 0.0, 1.0, 1.0)
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> SimplePolygon {
        SimplePolygon::new(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
        .expect("rectangle")
    }

    /// L-shaped polygon with its reflex vertex at (1, 1); area 3.
    pub fn l_shape() -> SimplePolygon {
        SimplePolygon::new(
            [(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]
                .iter()
                .map(|&(x, y)| Point::new(x, y))
                .collect(),
        )
        .expect("L polygon")
    }

    /// U-shaped polygon: a 3x1 base with two 1x1 towers; area 5.
    pub fn u_shape() -> SimplePolygon {
        SimplePolygon::new(
            [
                (0., 0.),
                (3., 0.),
                (3., 2.),
                (2., 2.),
                (2., 1.),
                (1., 1.),
                (1., 2.),
                (0., 2.),
            ]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect(),
        )
        .expect("U polygon")
    }

    /// Corridor `[0, 10] x [0, 2]` with three pockets above and three below.
    pub fn comb() -> SimplePolygon {
        let mut pts = vec![Point::new(0.0, 0.0)];
        for &x in &[1.5, 4.5, 7.5] {
            pts.push(Point::new(x, 0.0));
            pts.push(Point::new(x, -2.0));
            pts.push(Point::new(x + 1.0, -2.0));
            pts.push(Point::new(x + 1.0, 0.0));
        }
        pts.push(Point::new(10.0, 0.0));
        pts.push(Point::new(10.0, 2.0));
        for &x in &[8.5, 5.5, 2.5] {
            pts.push(Point::new(x, 2.0));
            pts.push(Point::new(x, 4.0));
            pts.push(Point::new(x - 1.0, 4.0));
            pts.push(Point::new(x - 1.0, 2.0));
        }
        pts.push(Point::new(0.0, 2.0));
        SimplePolygon::new(pts).expect("comb polygon")
    }
}
