//! `watchmen`: solve, generate, verify and plot visibility routing instances.
//!
//! Exit codes: 0 success, 1 bad input or failed verification, 2 infeasible
//! instance, 3 solver timeout.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use watchmen::io::{
    decode_document_tour, export_document, generate, render_svg, rows_to_csv, run_batch, solve_document, verify,
    BatchConfig, Env, GenOptions, InstanceDocument, ProblemKind, ScenarioKind, SolutionDocument, SolveConfig, Sweep,
    VerifyOptions,
};
use watchmen::tsp::{Solver, DEFAULT_SCALE};
use watchmen::Error;

#[derive(Parser)]
#[command(name = "watchmen", version, about = "Multi-robot visibility route planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal min-max routes on a chain-visible curve.
    SolveChain(SolveArgs),
    /// 4-approximate min-max routes covering a street polygon.
    SolveStreet(SolveArgs),
    /// Minimum total length tours over discrete viewpoints.
    SolveGtsp(SolveArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Mean and standard deviation of the objective over seeded trials.
    Batch(BatchArgs),
    /// Recompute coverage and cost of a solution.
    Verify(VerifyArgs),
    /// Render an instance and optionally a solution as SVG.
    Plot(PlotArgs),
    /// Write the Noon-Bean TSPLIB file of a gtsp instance.
    ExportTsplib(ExportArgs),
    /// Turn a TSPLIB tour of an exported file into a solution.
    DecodeTour(DecodeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    SameDepot,
    SameFinish,
    Interchangeable,
}

impl From<ScenarioArg> for ScenarioKind {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::SameDepot => ScenarioKind::SameDepot,
            ScenarioArg::SameFinish => ScenarioKind::SameFinish,
            ScenarioArg::Interchangeable => ScenarioKind::Interchangeable,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    HeldKarp,
    Bnb,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Chain,
    Street,
    Gtsp,
}

impl From<KindArg> for ProblemKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Chain => ProblemKind::Chain,
            KindArg::Street => ProblemKind::Street,
            KindArg::Gtsp => ProblemKind::Gtsp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvArg {
    Square,
    Lshape,
    U2,
    RandomStreet,
    RandomSimple,
    Comb,
}

impl From<EnvArg> for Env {
    fn from(e: EnvArg) -> Self {
        match e {
            EnvArg::Square => Env::Square,
            EnvArg::Lshape => Env::Lshape,
            EnvArg::U2 => Env::U2,
            EnvArg::RandomStreet => Env::RandomStreet,
            EnvArg::RandomSimple => Env::RandomSimple,
            EnvArg::Comb => Env::Comb,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Robots,
    Targets,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance document (JSON).
    instance: PathBuf,
    /// Number of robots.
    #[arg(long)]
    m: Option<usize>,
    /// Measurement time per viewpoint.
    #[arg(long)]
    tm: Option<f64>,
    /// Relative tolerance of the street binary search.
    #[arg(long, default_value_t = 1e-3)]
    rel_tol: f64,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long, value_enum, default_value = "bnb")]
    solver: SolverArg,
    /// Branch and bound budget in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Solve the symmetrized TSP instead of the directed one.
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Solution file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    env: EnvArg,
    /// Problem shape; gtsp when viewpoints are requested, chain otherwise.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, default_value_t = 5)]
    targets: usize,
    #[arg(long, default_value_t = 0)]
    viewpoints: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 1.0)]
    tm: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, value_enum, default_value = "chain")]
    problem: KindArg,
    #[arg(long, value_enum, default_value = "comb")]
    env: EnvArg,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, value_enum)]
    sweep: SweepArg,
    /// Inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    range: (usize, usize),
    /// Targets when sweeping robots.
    #[arg(long, default_value_t = 15)]
    targets: usize,
    /// Robots when sweeping targets.
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 6)]
    viewpoints: usize,
    #[arg(long, default_value_t = 1.0)]
    tm: f64,
    #[arg(long, value_enum, default_value = "same-depot")]
    scenario: ScenarioArg,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    /// Monte Carlo samples for street coverage.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also run the brute-force oracle and report the gap.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    scale: u32,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    instance: PathBuf,
    /// TSPLIB tour file.
    #[arg(long)]
    tour: PathBuf,
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    /// The tour belongs to the symmetrized file.
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    Ok((a, b))
}

enum Failure {
    Core(Error),
    /// A document that failed to load, with its path.
    Document(PathBuf, Error),
    Io(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<InstanceDocument, Failure> {
    InstanceDocument::from_json(&read(path)?).map_err(|e| Failure::Document(path.to_path_buf(), e))
}

fn solve(args: SolveArgs, expect: ProblemKind) -> Result<(), Failure> {
    let doc = load_instance(&args.instance)?;
    let kind = doc.kind()?;
    if kind != expect {
        return Err(Error::Schema {
            field: "kind".into(),
            msg: format!("{} is a {kind} instance, not {expect}", args.instance.display()),
        }
        .into());
    }
    let cfg = SolveConfig {
        m: args.m,
        t_m: args.tm,
        rel_tol: args.rel_tol,
        scenario: args.scenario.map(Into::into),
        solver: match args.solver {
            SolverArg::HeldKarp => Solver::HeldKarp,
            SolverArg::Bnb => Solver::BranchAndBound,
        },
        time_budget: args.time_budget,
        symmetrize: args.symmetrize,
        seed: args.seed,
    };
    let sol = solve_document(&doc, &cfg)?;
    if let Some(svg) = &args.svg {
        write(Some(svg), &render_svg(&cfg.apply(&doc)?, Some(&sol)))?;
    }
    write(args.out.as_deref(), &sol.to_json())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::SolveChain(a) => solve(a, ProblemKind::Chain),
        Command::SolveStreet(a) => solve(a, ProblemKind::Street),
        Command::SolveGtsp(a) => solve(a, ProblemKind::Gtsp),
        Command::Gen(a) => {
            let kind = a.kind.map(Into::into).unwrap_or(if a.viewpoints > 0 {
                ProblemKind::Gtsp
            } else {
                ProblemKind::Chain
            });
            let doc = generate(&GenOptions {
                env: a.env.into(),
                kind,
                targets: a.targets,
                viewpoints: a.viewpoints,
                m: a.m,
                t_m: a.tm,
                seed: a.seed,
            })?;
            write(a.out.as_deref(), &doc.to_json())
        }
        Command::Batch(a) => {
            let sweep = match a.sweep {
                SweepArg::Robots => Sweep::Robots,
                SweepArg::Targets => Sweep::Targets,
            };
            let rows = run_batch(&BatchConfig {
                problem: a.problem.into(),
                env: a.env.into(),
                sweep,
                from: a.range.0,
                to: a.range.1,
                trials: a.trials,
                targets: a.targets,
                m: a.m,
                viewpoints: a.viewpoints,
                t_m: a.tm,
                scenario: a.scenario.into(),
                master_seed: a.seed,
            })?;
            write(a.out.as_deref(), &rows_to_csv(sweep, &rows))
        }
        Command::Verify(a) => {
            let doc = load_instance(&a.instance)?;
            let sol = SolutionDocument::from_json(&read(&a.solution)?)
                .map_err(|e| Failure::Document(a.solution.clone(), e))?;
            let rep = verify(
                &doc,
                &sol,
                &VerifyOptions {
                    samples: a.samples,
                    seed: a.seed,
                    oracle: a.oracle,
                    ..Default::default()
                },
            )?;
            print!("{rep}");
            if rep.pass {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Command::Plot(a) => {
            let doc = load_instance(&a.instance)?;
            let sol = match &a.solution {
                Some(p) => Some(SolutionDocument::from_json(&read(p)?).map_err(|e| Failure::Document(p.clone(), e))?),
                None => None,
            };
            write(Some(&a.out), &render_svg(&doc, sol.as_ref()))
        }
        Command::ExportTsplib(a) => {
            let doc = load_instance(&a.instance)?;
            let text = export_document(&doc, a.scenario.map(Into::into), a.symmetrize, a.scale)?;
            write(a.out.as_deref(), &text)
        }
        Command::DecodeTour(a) => {
            let doc = load_instance(&a.instance)?;
            let tour = read(&a.tour)?;
            let sol = decode_document_tour(&doc, a.scenario.map(Into::into), a.symmetrize, &tour)?;
            write(a.out.as_deref(), &sol.to_json())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Document(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible(_) => 2,
                Error::Timeout { .. } => 3,
                _ => 1,
            })
        }
    }
}
