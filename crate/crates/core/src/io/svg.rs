//! SVG plots: polygon, curve, targets as stars, viewpoints as squares and
//! one colour per robot.

use std::fmt::Write;

use super::document::{InstanceDocument, SolutionDocument};
use crate::geometry::Point;

const WIDTH: f64 = 600.0;
const PAD: f64 = 20.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Frame {
    lo: Point,
    hi: Point,
    k: f64,
}

impl Frame {
    fn new(poly: &[Point]) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in poly {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Frame {
            lo,
            hi,
            k: (WIDTH - 2.0 * PAD) / span,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            PAD + (p.x - self.lo.x) * self.k,
            PAD + (self.hi.y - p.y) * self.k,
        )
    }

    fn height(&self) -> f64 {
        2.0 * PAD + (self.hi.y - self.lo.y) * self.k
    }

    fn points(&self, pts: &[Point]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn star(out: &mut String, (cx, cy): (f64, f64), r: f64) {
    let pts: Vec<String> = (0..10)
        .map(|i| {
            let a = std::f64::consts::PI * (i as f64 / 5.0 - 0.5);
            let rr = if i % 2 == 0 { r } else { 0.4 * r };
            format!("{:.2},{:.2}", cx + rr * a.cos(), cy + rr * a.sin())
        })
        .collect();
    writeln!(out, r##"<polygon class="target" points="{}" fill="#f2c200" stroke="#000" stroke-width="0.6"/>"##, pts.join(" ")).unwrap();
}

fn square(out: &mut String, class: &str, (cx, cy): (f64, f64), r: f64, fill: &str, stroke: &str) {
    writeln!(
        out,
        r#"<rect class="{class}" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="{stroke}" stroke-width="1"/>"#,
        cx - r,
        cy - r,
        2.0 * r,
        2.0 * r
    )
    .unwrap();
}

/// Deterministic SVG of an instance and, optionally, a solution.
pub fn render_svg(inst: &InstanceDocument, sol: Option<&SolutionDocument>) -> String {
    let f = Frame::new(&inst.polygon);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{:.0}" viewBox="0 0 {WIDTH:.0} {:.2}">"#,
        f.height().ceil(),
        f.height()
    )
    .unwrap();
    writeln!(
        out,
        r##"<polygon class="environment" points="{}" fill="#f4f4f4" stroke="#333" stroke-width="1.5"/>"##,
        f.points(&inst.polygon)
    )
    .unwrap();
    if let Some(c) = &inst.curve {
        writeln!(
            out,
            r##"<polyline class="curve" points="{}" fill="none" stroke="#999" stroke-width="1.2" stroke-dasharray="6 4"/>"##,
            f.points(c)
        )
        .unwrap();
    }
    for &v in inst.viewpoints.iter().flatten() {
        square(&mut out, "viewpoint", f.map(v), 3.5, "none", "#666");
    }
    for &d in inst.depots.iter().flatten() {
        let (x, y) = f.map(d);
        writeln!(
            out,
            r##"<circle class="depot" cx="{x:.2}" cy="{y:.2}" r="5" fill="#333"/>"##
        )
        .unwrap();
    }
    if let Some(sol) = sol {
        for (k, r) in sol.robots.iter().enumerate() {
            let col = PALETTE[k % PALETTE.len()];
            if r.polyline.len() > 1 {
                writeln!(
                    out,
                    r#"<polyline class="robot-{k}" points="{}" fill="none" stroke="{col}" stroke-width="2.5"/>"#,
                    f.points(&r.polyline)
                )
                .unwrap();
            }
            for &v in &r.viewpoints {
                square(&mut out, &format!("robot-{k}"), f.map(v), 4.5, col, "#000");
            }
        }
    }
    for &t in inst.targets.iter().flatten() {
        star(&mut out, f.map(t), 7.0);
    }
    out.push_str("</svg>\n");
    out
}
