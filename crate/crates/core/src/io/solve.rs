use serde::{Deserialize, Serialize};

use super::document::{InstanceDocument, ProblemKind, ScenarioKind, SolutionDocument, SolverMeta};
use crate::chain::solve_chain;
use crate::error::{Error, Result};
use crate::gtsp::{solve_gtsp, GtspOptions};
use crate::street::solve_street;
use crate::tsp::{Solver, SolverOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Overrides the document's robot count.
    pub m: Option<usize>,
    /// Overrides the document's measurement time.
    pub t_m: Option<f64>,
    pub rel_tol: f64,
    pub scenario: Option<ScenarioKind>,
    pub solver: Solver,
    /// Seconds.
    pub time_budget: Option<f64>,
    pub symmetrize: bool,
    pub seed: Option<u64>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            m: None,
            t_m: None,
            rel_tol: 1e-3,
            scenario: None,
            solver: Solver::BranchAndBound,
            time_budget: None,
            symmetrize: false,
            seed: None,
        }
    }
}

impl SolveConfig {
    /// The document with the overrides applied.
    pub fn apply(&self, doc: &InstanceDocument) -> Result<InstanceDocument> {
        let mut d = doc.clone();
        if let Some(m) = self.m {
            d.m = m;
        }
        if let Some(t) = self.t_m {
            d.t_m = t;
        }
        if let Some(s) = self.scenario {
            d.scenario = Some(s);
        }
        if let Some(s) = self.seed {
            d.seed = s;
        }
        d.validate()?;
        Ok(d)
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t0 = std::time::Instant::now();
    let out = f();
    (out, t0.elapsed().as_secs_f64())
}

#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    (f(), 0.0)
}

/// Solves the instance with the algorithm matching its kind.
pub fn solve_document(doc: &InstanceDocument, cfg: &SolveConfig) -> Result<SolutionDocument> {
    let doc = cfg.apply(doc)?;
    let kind = doc.kind()?;
    let mut meta = SolverMeta {
        m: doc.m,
        t_m: doc.t_m,
        seed: doc.seed,
        ..Default::default()
    };
    match kind {
        ProblemKind::Chain => {
            let inst = doc.chain_instance()?;
            let (plan, rt) = timed(|| solve_chain(&inst));
            meta.algorithm = "chain-dp".into();
            meta.runtime_s = rt;
            Ok(SolutionDocument::from_route_plan(
                kind,
                &plan?,
                &inst.curve,
                meta,
            ))
        }
        ProblemKind::Street => {
            let inst = doc.street_instance()?;
            if !(inst.t_m > 0.0) {
                return Err(Error::schema(
                    "t_m",
                    "street instances need a positive measurement time",
                ));
            }
            let (sol, rt) = timed(|| solve_street(&inst, cfg.rel_tol));
            let sol = sol?;
            meta.algorithm = "street-binary-search".into();
            meta.rel_tol = Some(cfg.rel_tol);
            meta.t_hat = Some(sol.t_hat);
            meta.runtime_s = rt;
            Ok(SolutionDocument::from_route_plan(
                kind,
                &sol.plan,
                &inst.curve,
                meta,
            ))
        }
        ProblemKind::Gtsp => {
            let poly = doc.polygon()?;
            let scenario = doc.scenario(None)?;
            let opts = GtspOptions {
                solver: SolverOptions {
                    solver: cfg.solver,
                    time_budget: cfg.time_budget,
                },
                symmetrize: cfg.symmetrize,
            };
            let vps = doc.viewpoints.clone().unwrap_or_default();
            let targets = doc.targets.clone().unwrap_or_default();
            let (res, rt) = timed(|| solve_gtsp(&poly, &vps, &targets, scenario, doc.m, &opts));
            let (inst, plan) = res?;
            meta.algorithm = match (cfg.solver, cfg.symmetrize) {
                (Solver::HeldKarp, false) => "noon-bean+held-karp",
                (Solver::HeldKarp, true) => "noon-bean+karp+held-karp",
                (Solver::BranchAndBound, false) => "noon-bean+branch-and-bound",
                (Solver::BranchAndBound, true) => "noon-bean+karp+branch-and-bound",
            }
            .into();
            meta.scenario = Some(doc.scenario.unwrap_or_default());
            meta.runtime_s = rt;
            Ok(SolutionDocument::from_decoded(&plan, &inst, meta))
        }
    }
}
