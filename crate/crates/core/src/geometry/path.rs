use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{Point, SimplePolygon};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolylinePath {
    pub points: Vec<Point>,
    pub length: f64,
}

/// Geodesic shortest paths inside a polygon, using the visibility graph
/// over its reflex vertices.
///
/// The reflex-to-reflex part of the graph is built once; each query only
/// adds the two endpoints.
#[derive(Clone, Debug)]
pub struct Geodesics<'a> {
    poly: &'a SimplePolygon,
    reflex: Vec<Point>,
    /// `adj[i]` lists `(j, length)` for mutually visible reflex vertices.
    adj: Vec<Vec<(usize, f64)>>,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Geodesics<'a> {
    pub fn new(poly: &'a SimplePolygon) -> Self {
        let reflex: Vec<Point> = (0..poly.len())
            .filter(|&i| poly.is_reflex(i))
            .map(|i| poly.vertex(i))
            .collect();
        let k = reflex.len();
        let mut adj = vec![Vec::new(); k];
        for i in 0..k {
            for j in (i + 1)..k {
                if poly.sees_unchecked(reflex[i], reflex[j]) {
                    let d = reflex[i].dist(reflex[j]);
                    adj[i].push((j, d));
                    adj[j].push((i, d));
                }
            }
        }
        Geodesics { poly, reflex, adj }
    }

    pub fn polygon(&self) -> &SimplePolygon {
        self.poly
    }

    pub fn distance(&self, s: Point, t: Point) -> Result<f64> {
        Ok(self.path(s, t)?.length)
    }

    pub fn path(&self, s: Point, t: Point) -> Result<PolylinePath> {
        self.poly.require(s, "path start")?;
        self.poly.require(t, "path end")?;
        if self.poly.sees_unchecked(s, t) {
            return Ok(PolylinePath {
                points: if s == t { vec![s] } else { vec![s, t] },
                length: s.dist(t),
            });
        }
        let k = self.reflex.len();
        // node k = s, node k + 1 = t
        let to_t: Vec<Option<f64>> = self
            .reflex
            .iter()
            .map(|&r| self.poly.sees_unchecked(r, t).then(|| r.dist(t)))
            .collect();
        let mut dist = vec![f64::INFINITY; k + 2];
        let mut prev = vec![usize::MAX; k + 2];
        let mut heap = BinaryHeap::new();
        dist[k] = 0.0;
        heap.push(Entry(0.0, k));
        while let Some(Entry(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if u == k + 1 {
                break;
            }
            let mut relax = |v: usize, w: f64, heap: &mut BinaryHeap<Entry>| {
                if d + w < dist[v] {
                    dist[v] = d + w;
                    prev[v] = u;
                    heap.push(Entry(d + w, v));
                }
            };
            if u == k {
                for (j, &r) in self.reflex.iter().enumerate() {
                    if self.poly.sees_unchecked(s, r) {
                        relax(j, s.dist(r), &mut heap);
                    }
                }
            } else {
                for &(j, w) in &self.adj[u] {
                    relax(j, w, &mut heap);
                }
                if let Some(w) = to_t[u] {
                    relax(k + 1, w, &mut heap);
                }
            }
        }
        if !dist[k + 1].is_finite() {
            // cannot happen in a connected polygon; report the straight line
            return Err(crate::error::Error::Domain(
                "no geodesic path found between the endpoints".into(),
            ));
        }
        let mut points = vec![t];
        let mut cur = prev[k + 1];
        while cur != k {
            points.push(self.reflex[cur]);
            cur = prev[cur];
        }
        points.push(s);
        points.reverse();
        Ok(PolylinePath {
            points,
            length: dist[k + 1],
        })
    }

    /// Symmetric matrix of geodesic distances between `pts`.
    pub fn distance_matrix(&self, pts: &[Point]) -> Result<Vec<Vec<f64>>> {
        let n = pts.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.distance(pts[i], pts[j])?;
                m[i][j] = d;
                m[j][i] = d;
            }
        }
        Ok(m)
    }
}

/// One-shot geodesic shortest path; see [`Geodesics`] for repeated queries.
pub fn shortest_path(poly: &SimplePolygon, s: Point, t: Point) -> Result<PolylinePath> {
    Geodesics::new(poly).path(s, t)
}
