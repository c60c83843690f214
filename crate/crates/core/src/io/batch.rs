//! Repeated seeded trials over a range of robot or target counts.
//!
//! Trial `i` uses the same seed for every sweep value, so a robots sweep
//! solves one fixed instance per trial with more and more robots, and a
//! targets sweep grows one target list per trial.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::document::{ProblemKind, ScenarioKind};
use super::gen::{generate, Env, GenOptions};
use super::solve::{solve_document, SolveConfig};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sweep {
    Robots,
    Targets,
}

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "robots" => Ok(Sweep::Robots),
            "targets" => Ok(Sweep::Targets),
            _ => Err(Error::schema(
                "sweep",
                format!("expected robots or targets, got `{s}`"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub problem: ProblemKind,
    pub env: Env,
    pub sweep: Sweep,
    /// Inclusive range of sweep values.
    pub from: usize,
    pub to: usize,
    pub trials: usize,
    /// Held fixed when sweeping robots.
    pub targets: usize,
    /// Held fixed when sweeping targets.
    pub m: usize,
    pub viewpoints: usize,
    pub t_m: f64,
    pub scenario: ScenarioKind,
    pub master_seed: u64,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig {
            problem: ProblemKind::Chain,
            env: Env::Comb,
            sweep: Sweep::Robots,
            from: 1,
            to: 5,
            trials: 50,
            targets: 15,
            m: 3,
            viewpoints: 6,
            t_m: 1.0,
            scenario: ScenarioKind::SameDepot,
            master_seed: 2024,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchRow {
    pub value: usize,
    pub mean: f64,
    pub stddev: f64,
    pub mean_runtime_s: f64,
    pub trials: usize,
}

/// Seed of trial `i`, independent of the sweep value.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    // splitmix64
    let mut z = master.wrapping_add((trial as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run_batch(cfg: &BatchConfig) -> Result<Vec<BatchRow>> {
    if cfg.trials == 0 || cfg.from > cfg.to {
        return Err(Error::schema(
            "range",
            "need at least one trial and from <= to",
        ));
    }
    if cfg.sweep == Sweep::Robots && cfg.from == 0 {
        return Err(Error::schema("range", "robot counts start at 1"));
    }
    // depots are drawn before targets, so keep their number fixed
    let gen_m = match cfg.sweep {
        Sweep::Robots => cfg.to,
        Sweep::Targets => cfg.m,
    };
    let mut rows = Vec::new();
    for value in cfg.from..=cfg.to {
        let (m, targets) = match cfg.sweep {
            Sweep::Robots => (value, cfg.targets),
            Sweep::Targets => (cfg.m, value),
        };
        let mut costs = Vec::with_capacity(cfg.trials);
        let mut runtime = 0.0;
        for trial in 0..cfg.trials {
            let doc = generate(&GenOptions {
                env: cfg.env,
                kind: cfg.problem,
                targets,
                viewpoints: cfg.viewpoints,
                m: gen_m,
                t_m: cfg.t_m,
                seed: trial_seed(cfg.master_seed, trial),
            })?;
            let solve = SolveConfig {
                m: Some(m),
                scenario: (cfg.problem == ProblemKind::Gtsp).then_some(cfg.scenario),
                ..Default::default()
            };
            let sol = solve_document(&doc, &solve)?;
            costs.push(sol.objective().expect("solvers report an objective"));
            runtime += sol.solver.runtime_s;
        }
        let (mean, stddev) = mean_sd(&costs);
        log::info!(
            "{:?} = {value}: mean {mean:.6} over {} trials",
            cfg.sweep,
            cfg.trials
        );
        rows.push(BatchRow {
            value,
            mean,
            stddev,
            mean_runtime_s: runtime / cfg.trials as f64,
            trials: cfg.trials,
        });
    }
    Ok(rows)
}

pub fn rows_to_csv(sweep: Sweep, rows: &[BatchRow]) -> String {
    let name = match sweep {
        Sweep::Robots => "robots",
        Sweep::Targets => "targets",
    };
    let mut out = format!("{name},mean,stddev,mean_runtime_s,trials\n");
    for r in rows {
        writeln!(
            out,
            "{},{:.9},{:.9},{:.6},{}",
            r.value, r.mean, r.stddev, r.mean_runtime_s, r.trials
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_robot_sweep_is_monotone_and_reproducible() {
        let cfg = BatchConfig {
            trials: 4,
            targets: 6,
            to: 3,
            ..Default::default()
        };
        let a = run_batch(&cfg).unwrap();
        assert!(
            a.windows(2).all(|w| w[1].mean <= w[0].mean + 1e-12),
            "{a:?}"
        );
        let b = run_batch(&cfg).unwrap();
        let strip = |r: &[BatchRow]| {
            r.iter()
                .map(|x| (x.value, x.mean, x.stddev))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        assert!(rows_to_csv(Sweep::Robots, &a)
            .starts_with("robots,mean,stddev,mean_runtime_s,trials\n1,"));
    }

    #[test]
    fn seeds_differ_per_trial() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }
}
