//! TSPLIB `EXPLICIT` / `FULL_MATRIX` documents.
//!
//! Costs are multiplied by `scale` and rounded half up. Forbidden arcs are
//! written as the sentinel `scale * (B * n + 1)`, where `B` is the
//! instance penalty (or the largest finite cost when there is none); the
//! sentinel is recorded in the `COMMENT` line so that import can map it
//! back to infinity.

use std::fmt::Write;

use super::AtspInstance;
use crate::error::{Error, Result};

pub const DEFAULT_SCALE: u32 = 1000;

const SENTINEL_TAG: &str = "infinity sentinel";

fn scaled(c: f64, scale: u32) -> f64 {
    (c * scale as f64 + 0.5).floor()
}

pub fn export_tsplib(inst: &AtspInstance, scale: u32) -> Result<String> {
    if scale == 0 {
        return Err(Error::Domain("scale must be positive".into()));
    }
    let n = inst.n();
    let limit = i32::MAX as f64;
    let max_finite = inst
        .cost
        .iter()
        .flatten()
        .filter(|c| c.is_finite())
        .fold(0.0f64, |a, &c| a.max(c.abs()));
    let b = inst.penalty.unwrap_or(max_finite);
    let sentinel = scaled(b * n as f64 + 1.0, scale);
    if sentinel > limit {
        return Err(Error::Overflow(format!(
            "infinity sentinel {sentinel} exceeds {} (penalty {b}, {n} nodes, scale {scale})",
            i32::MAX
        )));
    }
    let kind = if inst.is_symmetric() { "TSP" } else { "ATSP" };
    let mut out = String::new();
    writeln!(out, "NAME: {}", inst.name).unwrap();
    writeln!(out, "TYPE: {kind}").unwrap();
    writeln!(
        out,
        "COMMENT: scale {scale}, {SENTINEL_TAG} {}",
        sentinel as i64
    )
    .unwrap();
    writeln!(out, "DIMENSION: {n}").unwrap();
    writeln!(out, "EDGE_WEIGHT_TYPE: EXPLICIT").unwrap();
    writeln!(out, "EDGE_WEIGHT_FORMAT: FULL_MATRIX").unwrap();
    writeln!(out, "EDGE_WEIGHT_SECTION").unwrap();
    for (i, row) in inst.cost.iter().enumerate() {
        let mut line = Vec::with_capacity(n);
        for (j, &c) in row.iter().enumerate() {
            let v = if i == j {
                0.0
            } else if c.is_infinite() {
                sentinel
            } else {
                let v = scaled(c, scale);
                if v.abs() > limit || v >= sentinel {
                    return Err(Error::Overflow(format!(
                        "cost[{i}][{j}] = {c} scales to {v}, outside the export range"
                    )));
                }
                v
            };
            line.push((v as i64).to_string());
        }
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out.push_str("EOF\n");
    Ok(out)
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Inverse of [`export_tsplib`]; costs stay in scaled units.
pub fn import_tsplib(text: &str) -> Result<AtspInstance> {
    let mut name = String::from("unnamed");
    let mut dim: Option<usize> = None;
    let mut sentinel: Option<i64> = None;
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    let mut section_line = 0;
    for (ln, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        if line == "EDGE_WEIGHT_SECTION" {
            section_line = ln;
            break;
        }
        let Some((key, val)) = line.split_once(':') else {
            return Err(perr(ln, format!("expected `KEY: value`, found `{line}`")));
        };
        let val = val.trim();
        match key.trim() {
            "NAME" => name = val.to_string(),
            "TYPE" => {
                if val != "ATSP" && val != "TSP" {
                    return Err(perr(ln, format!("unsupported TYPE `{val}`")));
                }
            }
            "COMMENT" => {
                if let Some(rest) = val.split(SENTINEL_TAG).nth(1) {
                    sentinel = Some(
                        rest.trim()
                            .parse()
                            .map_err(|_| perr(ln, "malformed infinity sentinel"))?,
                    );
                }
            }
            "DIMENSION" => {
                let d: i64 = val
                    .parse()
                    .map_err(|_| perr(ln, format!("bad DIMENSION `{val}`")))?;
                if d < 0 {
                    return Err(perr(ln, format!("negative DIMENSION {d}")));
                }
                dim = Some(d as usize);
            }
            "EDGE_WEIGHT_TYPE" => {
                if val != "EXPLICIT" {
                    return Err(perr(ln, format!("unsupported EDGE_WEIGHT_TYPE `{val}`")));
                }
            }
            "EDGE_WEIGHT_FORMAT" => {
                if val != "FULL_MATRIX" {
                    return Err(perr(ln, format!("unsupported EDGE_WEIGHT_FORMAT `{val}`")));
                }
            }
            other => return Err(perr(ln, format!("unknown header `{other}`"))),
        }
    }
    if section_line == 0 {
        return Err(perr(text.lines().count(), "missing EDGE_WEIGHT_SECTION"));
    }
    let n = dim.ok_or_else(|| perr(section_line, "DIMENSION must precede EDGE_WEIGHT_SECTION"))?;
    let mut values = Vec::with_capacity(n * n);
    let mut last = section_line;
    for (ln, line) in lines {
        last = ln;
        if line == "EOF" {
            break;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| perr(ln, format!("bad weight `{tok}`")))?;
            values.push(v);
        }
    }
    if values.len() != n * n {
        return Err(perr(
            last,
            format!("expected {} weights, found {}", n * n, values.len()),
        ));
    }
    let cost = values
        .chunks(n.max(1))
        .take(n)
        .map(|row| {
            row.iter()
                .map(|&v| {
                    if Some(v) == sentinel {
                        f64::INFINITY
                    } else {
                        v as f64
                    }
                })
                .collect()
        })
        .collect();
    AtspInstance::new(name, cost)
}

/// A `TOUR_SECTION` with 1-based node ids, terminated by `-1`.
pub fn write_tour(name: &str, order: &[usize]) -> String {
    let mut out = format!(
        "NAME: {name}\nTYPE: TOUR\nDIMENSION: {}\nTOUR_SECTION\n",
        order.len()
    );
    for &v in order {
        writeln!(out, "{}", v + 1).unwrap();
    }
    out.push_str("-1\nEOF\n");
    out
}

/// Node order (0-based) from a TSPLIB tour file.
pub fn parse_tour(text: &str) -> Result<Vec<usize>> {
    let mut in_section = false;
    let mut order = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if !in_section {
            in_section = line == "TOUR_SECTION";
            continue;
        }
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| perr(k + 1, format!("bad node id `{tok}`")))?;
            if v == -1 {
                return Ok(order);
            }
            if v < 1 {
                return Err(perr(k + 1, format!("node ids start at 1, found {v}")));
            }
            order.push(v as usize - 1);
        }
    }
    if in_section {
        Err(perr(
            text.lines().count(),
            "TOUR_SECTION is not terminated by -1",
        ))
    } else {
        Err(perr(1, "missing TOUR_SECTION"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> AtspInstance {
        AtspInstance::new(
            "three",
            vec![
                vec![0.0, 1.2345, f64::INFINITY],
                vec![2.0005, 0.0, 0.5],
                vec![0.25, 3.9999, 0.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn rounds_half_up_and_round_trips() {
        let text = export_tsplib(&three(), 1000).unwrap();
        assert!(text.contains("\n0 1235 "), "{text}");
        assert!(text.contains("\n2001 0 500\n"));
        let back = import_tsplib(&text).unwrap();
        assert_eq!(back.cost[0][1], 1235.0);
        assert_eq!(back.cost[0][2], f64::INFINITY);
        assert_eq!(back.name, "three");
        assert_eq!(
            export_tsplib(&back, 1).unwrap().lines().count(),
            text.lines().count()
        );
    }

    #[test]
    fn overflow_is_an_error() {
        let mut inst = three();
        inst.cost[1][2] = 1e9;
        assert!(matches!(
            export_tsplib(&inst, 1000),
            Err(Error::Overflow(_))
        ));
        let mut inst = three();
        inst.penalty = Some(1e8);
        assert!(matches!(
            export_tsplib(&inst, 1000),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn malformed_headers() {
        let neg = "NAME: x\nTYPE: ATSP\nDIMENSION: -3\nEDGE_WEIGHT_SECTION\nEOF\n";
        assert!(matches!(
            import_tsplib(neg),
            Err(Error::Parse { line: 3, .. })
        ));
        let euc = "NAME: x\nTYPE: ATSP\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\n";
        assert!(matches!(
            import_tsplib(euc),
            Err(Error::Parse { line: 4, .. })
        ));
        let short = "DIMENSION: 2\nEDGE_WEIGHT_SECTION\n0 1 2\nEOF\n";
        assert!(matches!(import_tsplib(short), Err(Error::Parse { .. })));
        assert!(import_tsplib("DIMENSION: 2\n").is_err());
    }

    #[test]
    fn tours() {
        let t = write_tour("t", &[0, 2, 1]);
        assert_eq!(parse_tour(&t).unwrap(), vec![0, 2, 1]);
        assert!(parse_tour("TOUR_SECTION\n1\n2\n").is_err());
        assert!(parse_tour("1 2 3").is_err());
    }
}
