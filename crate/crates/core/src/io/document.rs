use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainInstance, RoutePlan};
use crate::error::{Error, Result};
use crate::geometry::{Curve, Point, SimplePolygon};
use crate::gtsp::{DecodedPlan, DepotScenario, GtspInstance};
use crate::street::StreetInstance;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Chain,
    Street,
    Gtsp,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Chain => "chain",
            ProblemKind::Street => "street",
            ProblemKind::Gtsp => "gtsp",
        })
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [ProblemKind::Chain, ProblemKind::Street, ProblemKind::Gtsp]
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::schema("kind", format!("unknown problem kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    #[default]
    SameDepot,
    SameFinish,
    Interchangeable,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::SameDepot,
        ScenarioKind::SameFinish,
        ScenarioKind::Interchangeable,
    ];

    /// Depots needed by `m` robots.
    pub fn depots_needed(self, m: usize) -> usize {
        match self {
            ScenarioKind::SameDepot => 1,
            ScenarioKind::SameFinish => m + 1,
            ScenarioKind::Interchangeable => m,
        }
    }

    /// Scenario over the first depots of `depots`.
    pub fn build(self, depots: &[Point], m: usize) -> Result<DepotScenario> {
        let need = self.depots_needed(m);
        if depots.len() < need {
            return Err(Error::schema(
                "depots",
                format!(
                    "{self} with {m} robots needs {need} depots, got {}",
                    depots.len()
                ),
            ));
        }
        Ok(match self {
            ScenarioKind::SameDepot => DepotScenario::SameDepot { depot: depots[0] },
            ScenarioKind::SameFinish => DepotScenario::SameFinish {
                starts: depots[..m].to_vec(),
                finish: depots[m],
            },
            ScenarioKind::Interchangeable => DepotScenario::Interchangeable {
                depots: depots[..m].to_vec(),
            },
        })
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::SameDepot => "same-depot",
            ScenarioKind::SameFinish => "same-finish",
            ScenarioKind::Interchangeable => "interchangeable",
        })
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::schema("scenario", format!("unknown scenario `{s}`")))
    }
}

/// A problem instance on disk.
///
/// A curve with targets is a chain instance, a curve without targets is a
/// street instance (the whole polygon must be seen), and viewpoints with
/// targets and depots form a GTSP instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub schema_version: u32,
    pub polygon: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewpoints: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depots: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioKind>,
    pub m: usize,
    #[serde(default)]
    pub t_m: f64,
    #[serde(default)]
    pub seed: u64,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    }
}

impl InstanceDocument {
    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(json_error)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> Result<ProblemKind> {
        if self.viewpoints.is_some() {
            if self.curve.is_some() {
                return Err(Error::schema(
                    "curve",
                    "a gtsp instance has viewpoints and no curve",
                ));
            }
            if self.targets.is_none() {
                return Err(Error::schema("targets", "a gtsp instance needs targets"));
            }
            if self.depots.as_ref().is_none_or(|d| d.is_empty()) {
                return Err(Error::schema(
                    "depots",
                    "a gtsp instance needs at least one depot",
                ));
            }
            return Ok(ProblemKind::Gtsp);
        }
        if self.depots.is_some() || self.scenario.is_some() {
            return Err(Error::schema(
                "depots",
                "depots and scenario belong to gtsp instances",
            ));
        }
        match (&self.curve, &self.targets) {
            (Some(_), Some(_)) => Ok(ProblemKind::Chain),
            (Some(_), None) => Ok(ProblemKind::Street),
            (None, _) => Err(Error::schema(
                "curve",
                "chain and street instances need a curve, gtsp instances need viewpoints",
            )),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::schema(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, got {}", self.schema_version),
            ));
        }
        if self.m == 0 {
            return Err(Error::schema("m", "at least one robot is needed"));
        }
        if !(self.t_m.is_finite() && self.t_m >= 0.0) {
            return Err(Error::schema("t_m", "must be finite and non-negative"));
        }
        let kind = self.kind()?;
        let poly = self.polygon()?;
        let inside = |field: &str, pts: &Option<Vec<Point>>| -> Result<()> {
            for (i, p) in pts.iter().flatten().enumerate() {
                if !p.is_finite() || !poly.contains(*p) {
                    return Err(Error::schema(
                        field,
                        format!("point {i} ({}, {}) lies outside the polygon", p.x, p.y),
                    ));
                }
            }
            Ok(())
        };
        inside("curve", &self.curve)?;
        inside("targets", &self.targets)?;
        inside("viewpoints", &self.viewpoints)?;
        inside("depots", &self.depots)?;
        if let Some(c) = &self.curve {
            if c.is_empty() {
                return Err(Error::schema("curve", "needs at least one waypoint"));
            }
        }
        if kind == ProblemKind::Gtsp {
            self.scenario(None)?;
        }
        Ok(())
    }

    pub fn polygon(&self) -> Result<SimplePolygon> {
        SimplePolygon::new(self.polygon.clone())
            .map_err(|e| Error::schema("polygon", e.to_string()))
    }

    pub fn curve(&self, poly: &SimplePolygon) -> Result<Curve> {
        let wp = self
            .curve
            .clone()
            .ok_or_else(|| Error::schema("curve", "missing"))?;
        Curve::new(wp, poly).map_err(|e| Error::schema("curve", e.to_string()))
    }

    pub fn chain_instance(&self) -> Result<ChainInstance> {
        let polygon = self.polygon()?;
        let curve = self.curve(&polygon)?;
        Ok(ChainInstance {
            polygon,
            curve,
            targets: self.targets.clone().unwrap_or_default(),
            m: self.m,
            t_m: self.t_m,
        })
    }

    pub fn street_instance(&self) -> Result<StreetInstance> {
        let polygon = self.polygon()?;
        let curve = self.curve(&polygon)?;
        Ok(StreetInstance {
            polygon,
            curve,
            m: self.m,
            t_m: self.t_m,
        })
    }

    /// Depot scenario, with `kind` overriding the stored one.
    pub fn scenario(&self, kind: Option<ScenarioKind>) -> Result<DepotScenario> {
        let kind = kind.or(self.scenario).unwrap_or_default();
        kind.build(self.depots.as_deref().unwrap_or(&[]), self.m)
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

fn round_pts(p: &[Point]) -> Vec<Point> {
    p.iter()
        .map(|q| Point::new(round12(q.x), round12(q.y)))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotPath {
    /// Arc-length span on the curve (chain and street).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub viewpoint_s: Vec<f64>,
    /// Indices into the instance's viewpoint list (gtsp).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub viewpoint_ids: Vec<usize>,
    #[serde(default)]
    pub viewpoints: Vec<Point>,
    #[serde(default)]
    pub polyline: Vec<Point>,
    pub cost: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverMeta {
    pub algorithm: String,
    pub m: usize,
    pub t_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    /// Accepted guess of the street binary search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioKind>,
    #[serde(default)]
    pub runtime_s: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    pub schema_version: u32,
    pub kind: ProblemKind,
    pub robots: Vec<RobotPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub makespan: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_cost: Option<f64>,
    pub solver: SolverMeta,
}

impl SolutionDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(json_error)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::schema(
                "schema_version",
                format!("expected {SCHEMA_VERSION}, got {}", doc.schema_version),
            ));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    /// Arc-length plan of a chain or street solve.
    pub fn from_route_plan(
        kind: ProblemKind,
        plan: &RoutePlan,
        curve: &Curve,
        solver: SolverMeta,
    ) -> Self {
        let robots = plan
            .paths
            .iter()
            .map(|p| {
                if p.is_idle() {
                    return RobotPath::default();
                }
                RobotPath {
                    s_start: Some(round12(p.s_start)),
                    s_end: Some(round12(p.s_end)),
                    viewpoint_s: p.viewpoints.iter().map(|&s| round12(s)).collect(),
                    viewpoint_ids: Vec::new(),
                    viewpoints: round_pts(
                        &p.viewpoints
                            .iter()
                            .map(|&s| curve.point_at(s))
                            .collect::<Vec<_>>(),
                    ),
                    polyline: round_pts(&curve.subcurve(p.s_start, p.s_end)),
                    cost: round12(p.cost),
                }
            })
            .collect();
        SolutionDocument {
            schema_version: SCHEMA_VERSION,
            kind,
            robots,
            makespan: Some(round12(plan.makespan)),
            total_cost: None,
            solver,
        }
    }

    /// Viewpoint tours of a GTSP solve; ids refer to the caller's list.
    pub fn from_decoded(plan: &DecodedPlan, inst: &GtspInstance, solver: SolverMeta) -> Self {
        let robots = plan
            .robots
            .iter()
            .map(|r| {
                let polyline = if r.path.is_empty() {
                    let mut p = vec![r.start];
                    p.extend(r.viewpoints.iter().map(|&v| inst.viewpoints[v]));
                    p.push(r.finish);
                    p
                } else {
                    r.path.clone()
                };
                RobotPath {
                    viewpoint_ids: r.viewpoints.iter().map(|&v| inst.original_ids[v]).collect(),
                    viewpoints: round_pts(
                        &r.viewpoints
                            .iter()
                            .map(|&v| inst.viewpoints[v])
                            .collect::<Vec<_>>(),
                    ),
                    polyline: round_pts(&polyline),
                    cost: round12(r.length),
                    ..Default::default()
                }
            })
            .collect();
        SolutionDocument {
            schema_version: SCHEMA_VERSION,
            kind: ProblemKind::Gtsp,
            robots,
            makespan: None,
            total_cost: Some(round12(plan.total_cost)),
            solver,
        }
    }

    /// Reported objective: makespan for chain and street, total cost for gtsp.
    pub fn objective(&self) -> Option<f64> {
        match self.kind {
            ProblemKind::Gtsp => self.total_cost,
            _ => self.makespan,
        }
    }
}
