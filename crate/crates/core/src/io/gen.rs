//! Seeded instance generators.
//!
//! Random draws happen in a fixed order: environment, viewpoints, depots,
//! then targets one at a time. Asking for more targets with the same seed
//! therefore extends the target list of a smaller instance.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::document::{InstanceDocument, ProblemKind, SCHEMA_VERSION};
use crate::chain::chain_intervals;
use crate::error::{Error, Result};
use crate::geometry::{sample_interior, shapes, visible_pieces, Curve, Point, SimplePolygon};
use crate::street::{street_witnesses, WitnessOptions};

const MAX_TRIES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Env {
    Square,
    Lshape,
    U2,
    RandomStreet,
    RandomSimple,
    Comb,
}

impl Env {
    pub const ALL: [Env; 6] = [
        Env::Square,
        Env::Lshape,
        Env::U2,
        Env::RandomStreet,
        Env::RandomSimple,
        Env::Comb,
    ];
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Env::Square => "square",
            Env::Lshape => "lshape",
            Env::U2 => "u2",
            Env::RandomStreet => "random-street",
            Env::RandomSimple => "random-simple",
            Env::Comb => "comb",
        })
    }
}

impl FromStr for Env {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Env::ALL
            .into_iter()
            .find(|e| e.to_string() == s)
            .ok_or_else(|| Error::schema("env", format!("unknown environment `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenOptions {
    pub env: Env,
    pub kind: ProblemKind,
    pub targets: usize,
    /// Candidate viewpoints (gtsp only).
    pub viewpoints: usize,
    pub m: usize,
    pub t_m: f64,
    pub seed: u64,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            env: Env::Square,
            kind: ProblemKind::Chain,
            targets: 5,
            viewpoints: 0,
            m: 2,
            t_m: 1.0,
            seed: 0,
        }
    }
}

fn pts(v: &[(f64, f64)]) -> Vec<Point> {
    v.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

/// Staircase corridor: cells of random width whose floor and ceiling
/// heights jump at the cell borders, with a curve through the middle.
fn staircase(rng: &mut ChaCha8Rng) -> (Vec<Point>, Vec<Point>) {
    let k = rng.gen_range(3..=6);
    let mut xs = vec![0.0];
    let mut cells: Vec<(f64, f64)> = Vec::with_capacity(k);
    for i in 0..k {
        xs.push(xs[i] + rng.gen_range(1.0..2.5));
        loop {
            let b = rng.gen_range(0.0..1.5);
            let t = b + rng.gen_range(1.5..3.0);
            match cells.last() {
                Some(&(pb, pt)) if pb.max(b) + 0.5 > pt.min(t) => continue,
                _ => {
                    cells.push((b, t));
                    break;
                }
            }
        }
    }
    let mut poly = vec![Point::new(xs[0], cells[0].0)];
    for i in 0..k {
        poly.push(Point::new(xs[i + 1], cells[i].0));
        if i + 1 < k {
            poly.push(Point::new(xs[i + 1], cells[i + 1].0));
        }
    }
    for i in (0..k).rev() {
        poly.push(Point::new(xs[i + 1], cells[i].1));
        if i > 0 {
            poly.push(Point::new(xs[i], cells[i].1));
        } else {
            poly.push(Point::new(xs[0], cells[0].1));
        }
    }
    poly.dedup();
    let mid = |(b, t): (f64, f64)| 0.5 * (b + t);
    let mut curve = vec![Point::new(xs[0] + 0.25, mid(cells[0]))];
    for i in 1..k {
        let (b, t) = (
            cells[i - 1].0.max(cells[i].0),
            cells[i - 1].1.min(cells[i].1),
        );
        curve.push(Point::new(xs[i], 0.5 * (b + t)));
    }
    curve.push(Point::new(xs[k] - 0.25, mid(cells[k - 1])));
    (poly, curve)
}

/// Star-shaped polygon around (4, 4) with a short curve through the centre.
fn star(rng: &mut ChaCha8Rng) -> (Vec<Point>, Vec<Point>) {
    let n = rng.gen_range(8..=14);
    let step = TAU / n as f64;
    let poly = (0..n)
        .map(|i| {
            let a = step * (i as f64 + rng.gen_range(-0.3..0.3));
            let r = rng.gen_range(1.0..3.0);
            Point::new(4.0 + r * a.cos(), 4.0 + r * a.sin())
        })
        .collect();
    (poly, pts(&[(3.6, 4.0), (4.4, 4.0)]))
}

/// Corridor `[0, 12] x [0, 1]` with narrow pockets of depth 2, four on top
/// and three below, offset from each other.
fn staggered_comb() -> Result<SimplePolygon> {
    let (w, d) = (0.3, 2.0);
    let mut v = vec![(0.0, 0.0)];
    for x in [2.5, 5.5, 8.5] {
        v.extend([(x - w, 0.0), (x - w, -d), (x + w, -d), (x + w, 0.0)]);
    }
    v.extend([(12.0, 0.0), (12.0, 1.0)]);
    for x in [10.0, 7.0, 4.0, 1.0] {
        v.extend([
            (x + w, 1.0),
            (x + w, 1.0 + d),
            (x - w, 1.0 + d),
            (x - w, 1.0),
        ]);
    }
    v.push((0.0, 1.0));
    SimplePolygon::new(pts(&v))
}

/// Every street witness sees one connected piece of the curve.
fn chain_visible_street(poly: &SimplePolygon, curve: &Curve) -> bool {
    street_witnesses(poly, &WitnessOptions::default())
        .into_iter()
        .all(|w| visible_pieces(poly, curve, w).is_ok_and(|p| p.len() == 1))
}

fn environment(env: Env, rng: &mut ChaCha8Rng) -> Result<(SimplePolygon, Vec<Point>)> {
    let fixed = |poly: SimplePolygon, curve: &[(f64, f64)]| Ok((poly, pts(curve)));
    match env {
        Env::Square => fixed(shapes::rect(0.0, 0.0, 4.0, 4.0), &[(0.5, 2.0), (3.5, 2.0)]),
        Env::Lshape => fixed(
            SimplePolygon::new(pts(&[
                (0., 0.),
                (4., 0.),
                (4., 2.),
                (2., 2.),
                (2., 4.),
                (0., 4.),
            ]))?,
            &[(1.0, 3.5), (1.0, 1.0), (3.5, 1.0)],
        ),
        Env::U2 => fixed(shapes::u_shape(), &[(0.5, 0.5), (2.5, 0.5)]),
        Env::Comb => fixed(staggered_comb()?, &[(0.25, 0.5), (11.75, 0.5)]),
        Env::RandomStreet => {
            for _ in 0..MAX_TRIES {
                let (p, c) = staircase(rng);
                let poly = SimplePolygon::new(p)?;
                let curve = Curve::new(c.clone(), &poly)?;
                if chain_visible_street(&poly, &curve) {
                    return Ok((poly, c));
                }
            }
            Err(Error::Infeasible("no chain-visible staircase found".into()))
        }
        Env::RandomSimple => {
            let (p, c) = star(rng);
            Ok((SimplePolygon::new(p)?, c))
        }
    }
}

pub fn generate(opts: &GenOptions) -> Result<InstanceDocument> {
    if opts.m == 0 {
        return Err(Error::schema("m", "at least one robot is needed"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (poly, wp) = environment(opts.env, &mut rng)?;
    let mut doc = InstanceDocument {
        schema_version: SCHEMA_VERSION,
        polygon: poly.vertices().to_vec(),
        curve: None,
        targets: None,
        viewpoints: None,
        depots: None,
        scenario: None,
        m: opts.m,
        t_m: opts.t_m,
        seed: opts.seed,
    };
    match opts.kind {
        ProblemKind::Street => doc.curve = Some(wp),
        ProblemKind::Chain => {
            let curve = Curve::new(wp.clone(), &poly)?;
            let mut targets = Vec::with_capacity(opts.targets);
            while targets.len() < opts.targets {
                targets.push(draw(&mut rng, &poly, |x| {
                    chain_intervals(&poly, &curve, &[x]).is_ok()
                })?);
            }
            doc.curve = Some(wp);
            doc.targets = Some(targets);
        }
        ProblemKind::Gtsp => {
            if opts.viewpoints == 0 && opts.targets > 0 {
                return Err(Error::schema(
                    "viewpoints",
                    "targets need at least one candidate viewpoint",
                ));
            }
            let vps: Vec<Point> = (0..opts.viewpoints)
                .map(|_| sample_interior(&poly, &mut rng))
                .collect();
            let depots: Vec<Point> = (0..=opts.m)
                .map(|_| sample_interior(&poly, &mut rng))
                .collect();
            let mut targets = Vec::with_capacity(opts.targets);
            while targets.len() < opts.targets {
                targets.push(draw(&mut rng, &poly, |x| {
                    vps.iter().any(|&v| poly.sees_unchecked(v, x))
                })?);
            }
            doc.viewpoints = Some(vps);
            doc.depots = Some(depots);
            doc.targets = Some(targets);
        }
    }
    doc.validate()?;
    Ok(doc)
}

/// Rejection-samples an interior point satisfying `ok`.
fn draw(rng: &mut ChaCha8Rng, poly: &SimplePolygon, ok: impl Fn(Point) -> bool) -> Result<Point> {
    for _ in 0..MAX_TRIES {
        let x = sample_interior(poly, rng);
        if ok(x) {
            return Ok(x);
        }
    }
    Err(Error::Infeasible(format!(
        "no admissible target after {MAX_TRIES} draws"
    )))
}
