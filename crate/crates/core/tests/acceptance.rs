//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.
//!
//! Run with `cargo test -p watchmen-core --test acceptance`.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use watchmen::chain::solve_chain;
use watchmen::geometry::shapes::{comb, l_shape, rect, u_shape};
use watchmen::geometry::{
    coverage_fraction, sample_interior, shortest_path, visibility_polygon, Point, SimplePolygon,
};
use watchmen::gtsp::{build_gtsp, solve_instance};
use watchmen::io::{
    export_document, generate, run_batch, solve_document, BatchConfig, BatchRow, Env, GenOptions,
    InstanceDocument, ProblemKind, ScenarioKind, Sweep,
};
use watchmen::oracles::{brute_chain, brute_gtsp, brute_street, geodesic_distance, raycast_vp};
use watchmen::street::{solve_street, Status};
use watchmen::tsp::{
    branch_and_bound, brute_force_tsp, export_tsplib, held_karp, write_tour, AtspInstance,
    DEFAULT_SCALE,
};

/// Absolute tolerance of criteria 1 and 2.
const CHAIN_TOL: f64 = 1e-9;
/// Coverage threshold and sample count of criterion 3.
const COVERAGE: f64 = 0.999;
const COVERAGE_SAMPLES: usize = 100_000;
/// Absolute tolerance of criteria 5 and 6.
const GTSP_TOL: f64 = 1e-6;
/// Hit-distance tolerance of the visibility comparison.
const RAY_TOL: f64 = 1e-6;
/// Geodesic distance tolerance.
const PATH_TOL: f64 = 1e-9;
/// Curve samples of the chain oracle.
const CHAIN_GRID: usize = 1001;
/// Curve samples of the street oracle.
const STREET_GRID: usize = 200;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn repo_instance(name: &str) -> InstanceDocument {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name);
    InstanceDocument::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn c1_chain_dp_optimality() -> Outcome {
    let envs = [Env::Square, Env::Lshape, Env::U2];
    let t_ms = [0.0, 0.5, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let doc = generate(&GenOptions {
            env: envs[case % 3],
            kind: ProblemKind::Chain,
            targets: rng.gen_range(1..=5),
            m: rng.gen_range(1..=3),
            t_m: t_ms[(case / 3) % 3],
            seed: rng.gen(),
            ..Default::default()
        })
        .map_err(e)?;
        let inst = doc.chain_instance().map_err(e)?;
        let dp = solve_chain(&inst).map_err(e)?.makespan;
        let brute = brute_chain(&inst, CHAIN_GRID).map_err(e)?;
        worst = worst.max((dp - brute).abs());
        ensure!(
            (dp - brute).abs() <= CHAIN_TOL,
            "case {case} ({:?}, m={}, t_m={}): dp {dp} vs brute {brute}",
            envs[case % 3],
            inst.m,
            inst.t_m
        );
    }
    Ok(format!("100 instances, max |dp - brute| = {worst:.1e}"))
}

fn c2_named_chain_values() -> Outcome {
    let doc = repo_instance("u_chain.json");
    let mut out = Vec::new();
    for (m, expected) in [(2, 1.0), (1, 8.0 / 18.0 + 2.0)] {
        let mut inst = doc.chain_instance().map_err(e)?;
        inst.m = m;
        let dp = solve_chain(&inst).map_err(e)?.makespan;
        let brute = brute_chain(&inst, CHAIN_GRID).map_err(e)?;
        ensure!(
            (dp - expected).abs() <= CHAIN_TOL,
            "m={m}: dp {dp}, expected {expected}"
        );
        ensure!(
            (brute - expected).abs() <= CHAIN_TOL,
            "m={m}: brute {brute}, expected {expected}"
        );
        out.push(format!("m={m}: {dp:.12}"));
    }
    Ok(out.join(", "))
}

struct StreetRun {
    failures_checked: usize,
    failure_soundness: Result<(), String>,
}

fn c3_street_approximation() -> (Outcome, StreetRun) {
    let mut run = StreetRun {
        failures_checked: 0,
        failure_soundness: Ok(()),
    };
    let mut worst_ratio: f64 = 0.0;
    let mut min_cov: f64 = 1.0;
    let outcome = (|| -> Outcome {
        for case in 0..30u64 {
            let doc = generate(&GenOptions {
                env: Env::RandomStreet,
                kind: ProblemKind::Street,
                m: 1 + (case % 3) as usize,
                t_m: [0.5, 1.0][(case % 2) as usize],
                seed: 3000 + case,
                ..Default::default()
            })
            .map_err(e)?;
            let inst = doc.street_instance().map_err(e)?;
            let sol = solve_street(&inst, 1e-3).map_err(e)?;
            let oracle = brute_street(&inst, STREET_GRID).map_err(e)?;
            let bound = 4.0 * (oracle.makespan + oracle.gap);
            ensure!(
                sol.plan.makespan <= bound + 1e-9,
                "case {case}: makespan {} exceeds 4 (opt {} + gap {})",
                sol.plan.makespan,
                oracle.makespan,
                oracle.gap
            );
            worst_ratio = worst_ratio.max(sol.plan.makespan / (oracle.makespan + oracle.gap));
            for (k, p) in sol.plan.paths.iter().enumerate() {
                ensure!(
                    p.cost <= 4.0 * sol.t_hat + 1e-9,
                    "case {case}: path {k} costs {} > 4 T^ = {}",
                    p.cost,
                    4.0 * sol.t_hat
                );
            }
            let pts: Vec<Point> = sol
                .plan
                .viewpoints()
                .map(|s| inst.curve.point_at(s))
                .collect();
            let cov = coverage_fraction(&inst.polygon, &pts, COVERAGE_SAMPLES, case).map_err(e)?;
            min_cov = min_cov.min(cov);
            ensure!(cov >= COVERAGE, "case {case}: coverage {cov} < {COVERAGE}");
            for &(t_hat, status) in &sol.trace {
                if status == Status::Failure {
                    run.failures_checked += 1;
                    if run.failure_soundness.is_ok() && !(oracle.makespan > t_hat) {
                        run.failure_soundness = Err(format!(
                            "case {case}: Failure at T^ = {t_hat} but brute optimum {}",
                            oracle.makespan
                        ));
                    }
                }
            }
        }
        Ok(format!(
            "30 instances, max makespan / (opt + gap) = {worst_ratio:.3}, min coverage {min_cov:.5}"
        ))
    })();
    (outcome, run)
}

fn c5_gtsp_exactness() -> Outcome {
    let envs = [Env::Square, Env::Lshape, Env::U2, Env::RandomSimple];
    let scenarios = [
        ScenarioKind::SameDepot,
        ScenarioKind::SameFinish,
        ScenarioKind::Interchangeable,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut done = 0;
    let mut per_scenario = [0usize; 3];
    let mut worst: f64 = 0.0;
    let mut drawn = 0;
    while done < 50 {
        drawn += 1;
        ensure!(
            drawn < 1000,
            "could not draw 50 instances within the size caps"
        );
        let m = rng.gen_range(1..=2);
        let doc = generate(&GenOptions {
            env: envs[drawn % envs.len()],
            kind: ProblemKind::Gtsp,
            targets: rng.gen_range(1..=5),
            viewpoints: rng.gen_range(2..=8),
            m,
            seed: rng.gen(),
            ..Default::default()
        })
        .map_err(e)?;
        let sk = scenarios[done % 3];
        let poly = doc.polygon().map_err(e)?;
        let g = build_gtsp(
            &poly,
            doc.viewpoints.as_deref().unwrap(),
            doc.targets.as_deref().unwrap(),
            doc.scenario(Some(sk)).map_err(e)?,
            m,
        )
        .map_err(e)?;
        if g.clusters.iter().map(Vec::len).sum::<usize>() > 12 {
            continue;
        }
        let plan = solve_instance(&g, &Default::default()).map_err(e)?;
        let brute = brute_gtsp(&g).map_err(e)?;
        ensure!(
            (plan.total_cost - brute).abs() <= GTSP_TOL,
            "instance {done} ({sk}, m={m}): solver {} vs brute {brute}",
            plan.total_cost
        );
        ensure!(
            g.uncovered(&plan.visited()).is_empty(),
            "instance {done}: decoded plan misses clusters"
        );
        worst = worst.max((plan.total_cost - brute).abs());
        per_scenario[done % 3] += 1;
        done += 1;
    }
    Ok(format!(
        "50 instances ({}/{}/{} per scenario), max |solver - brute| = {worst:.1e}",
        per_scenario[0], per_scenario[1], per_scenario[2]
    ))
}

fn c6_square_depot() -> Outcome {
    let doc = repo_instance("square_gtsp.json");
    let sol = solve_document(&doc, &Default::default()).map_err(e)?;
    let cost = sol.total_cost.ok_or("no total cost")?;
    let expected = 2.0 * 0.02f64.sqrt();
    ensure!(
        (cost - expected).abs() <= GTSP_TOL,
        "total cost {cost}, expected {expected}"
    );
    Ok(format!("total_cost {cost:.12}"))
}

fn monotone(rows: &[BatchRow], increasing: bool) -> Result<(), String> {
    for w in rows.windows(2) {
        let (a, b) = (w[0].mean, w[1].mean);
        let slack = 1e-9 * a.abs().max(1.0);
        let ok = if increasing {
            b >= a - slack
        } else {
            b <= a + slack
        };
        ensure!(
            ok,
            "mean goes from {a} at {} to {b} at {}",
            w[0].value,
            w[1].value
        );
    }
    Ok(())
}

fn means(rows: &[BatchRow]) -> String {
    rows.iter()
        .map(|r| format!("{:.3}", r.mean))
        .collect::<Vec<_>>()
        .join(" ")
}

fn c7_trends() -> Outcome {
    let robots = run_batch(&BatchConfig {
        sweep: Sweep::Robots,
        from: 1,
        to: 5,
        trials: 50,
        targets: 15,
        ..Default::default()
    })
    .map_err(e)?;
    monotone(&robots, false).map_err(|s| format!("chain robots sweep: {s}"))?;
    let targets = run_batch(&BatchConfig {
        sweep: Sweep::Targets,
        from: 5,
        to: 25,
        trials: 50,
        m: 3,
        ..Default::default()
    })
    .map_err(e)?;
    monotone(&targets, true).map_err(|s| format!("chain targets sweep: {s}"))?;
    let gtsp = run_batch(&BatchConfig {
        problem: ProblemKind::Gtsp,
        sweep: Sweep::Robots,
        from: 1,
        to: 3,
        trials: 20,
        targets: 10,
        scenario: ScenarioKind::SameDepot,
        ..Default::default()
    })
    .map_err(e)?;
    monotone(&gtsp, false).map_err(|s| format!("gtsp robots sweep: {s}"))?;
    Ok(format!(
        "chain m=1..5: [{}]; chain |X|=5..25: [{} .. {}]; gtsp m=1..3: [{}]",
        means(&robots),
        means(&targets[..1]),
        means(&targets[targets.len() - 1..]),
        means(&gtsp)
    ))
}

fn test_polygons() -> Vec<SimplePolygon> {
    let mut polys = vec![rect(0.0, 0.0, 3.0, 2.0), l_shape(), u_shape(), comb()];
    for seed in 0..4 {
        for env in [Env::RandomStreet, Env::RandomSimple] {
            let doc = generate(&GenOptions {
                env,
                kind: ProblemKind::Street,
                seed,
                ..Default::default()
            })
            .unwrap();
            polys.push(doc.polygon().unwrap());
        }
    }
    polys
}

fn c8_geometry() -> Outcome {
    let polys = test_polygons();
    let mut rng = ChaCha8Rng::seed_from_u64(808);

    let mut seen = 0;
    for i in 0..10_000 {
        let poly = &polys[i % polys.len()];
        let p = sample_interior(poly, &mut rng);
        let q = sample_interior(poly, &mut rng);
        let (a, b) = (poly.sees(p, q).map_err(e)?, poly.sees(q, p).map_err(e)?);
        ensure!(a == b, "sees is not symmetric for {p:?} and {q:?}");
        seen += a as usize;
    }

    let mut worst_ray: f64 = 0.0;
    let mut rays = 0;
    for (i, poly) in polys.iter().enumerate() {
        for j in 0..3 {
            let p = sample_interior(poly, &mut rng);
            let region = visibility_polygon(poly, p).map_err(e)?;
            let sig = raycast_vp(poly, p, 1000, (10 * i + j) as u64).map_err(e)?;
            for (d, &hit) in sig.directions.iter().zip(&sig.hits) {
                let r = region.reach(*d);
                worst_ray = worst_ray.max((r - hit).abs());
                ensure!(
                    (r - hit).abs() <= RAY_TOL,
                    "polygon {i}, {p:?} along {d:?}: {r} vs {hit}"
                );
                rays += 1;
            }
        }
    }

    let mut worst_path: f64 = 0.0;
    for i in 0..600 {
        let poly = &polys[i % polys.len()];
        let s = sample_interior(poly, &mut rng);
        let t = sample_interior(poly, &mut rng);
        let a = shortest_path(poly, s, t).map_err(e)?.length;
        let b = geodesic_distance(poly, s, t).map_err(e)?;
        worst_path = worst_path.max((a - b).abs());
        ensure!(
            (a - b).abs() <= PATH_TOL,
            "{s:?} -> {t:?}: shortest_path {a} vs Dijkstra {b}"
        );
    }
    Ok(format!(
        "10000 pairs ({seen} visible), {rays} rays max err {worst_ray:.1e}, 600 paths max err {worst_path:.1e}"
    ))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> AtspInstance {
    let cost = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else if rng.gen_bool(0.1) {
                        f64::INFINITY
                    } else {
                        rng.gen_range(0..1000) as f64 / 10.0
                    }
                })
                .collect()
        })
        .collect();
    AtspInstance::new("random", cost).unwrap()
}

fn same_optimum(a: &watchmen::Result<f64>, b: &watchmen::Result<f64>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => (x - y).abs() <= 1e-9 * x.abs().max(1.0),
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

fn golden_matches(name: &str, actual: &str) -> Result<(), String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let expected =
        std::fs::read_to_string(&path).map_err(|err| format!("{}: {err}", path.display()))?;
    ensure!(expected == actual, "{name} differs from its golden file");
    Ok(())
}

fn c9_solvers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for case in 0..100 {
        let n = rng.gen_range(2..=8);
        let inst = random_matrix(&mut rng, n);
        let hk = held_karp(&inst).map(|t| t.cost);
        let brute = brute_force_tsp(&inst).map(|t| t.cost);
        ensure!(
            same_optimum(&hk, &brute),
            "matrix {case}: held_karp {hk:?} vs brute {brute:?}"
        );
    }
    let mut compared = 0;
    for n in 2..=18 {
        for _ in 0..3 {
            let inst = random_matrix(&mut rng, n);
            let hk = held_karp(&inst).map(|t| t.cost);
            let bnb = branch_and_bound(&inst, None).map(|t| t.cost);
            ensure!(
                same_optimum(&hk, &bnb),
                "n = {n}: held_karp {hk:?} vs bnb {bnb:?}"
            );
            compared += 1;
        }
    }

    let inf = f64::INFINITY;
    let small = AtspInstance::new(
        "small",
        vec![
            vec![0.0, 1.5, inf, 2.25],
            vec![0.125, 0.0, 3.0, inf],
            vec![4.0, 0.5, 0.0, 1.0],
            vec![1.0, inf, 2.0005, 0.0],
        ],
    )
    .unwrap();
    golden_matches(
        "small_atsp.tsp",
        &export_tsplib(&small, DEFAULT_SCALE).map_err(e)?,
    )?;
    golden_matches("small_atsp.tour", &write_tour("small", &[0, 1, 2, 3]))?;
    let square = repo_instance("square_gtsp.json");
    golden_matches(
        "square_noon_bean.tsp",
        &export_document(&square, None, false, DEFAULT_SCALE).map_err(e)?,
    )?;
    golden_matches(
        "square_noon_bean_sym.tsp",
        &export_document(&square, None, true, DEFAULT_SCALE).map_err(e)?,
    )?;
    Ok(format!(
        "100 matrices vs brute force, {compared} matrices bnb vs held_karp, 4 golden files"
    ))
}

struct Line {
    id: &'static str,
    status: &'static str,
    detail: String,
    elapsed: Duration,
}

fn judge(id: &'static str, budget: Duration, elapsed: Duration, outcome: Outcome) -> Line {
    let (status, mut detail) = match outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let mut status = status;
    if status == "PASS" && elapsed > budget {
        status = "FAIL";
        detail = format!(
            "{detail}; exceeded the {}s runtime budget",
            budget.as_secs()
        );
    }
    Line {
        id,
        status,
        detail,
        elapsed,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let out = f();
    (out, t0.elapsed())
}

fn caught(r: std::thread::Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    })
}

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let mut lines: Vec<Line> = std::thread::scope(|s| {
        let simple: Vec<(&'static str, Duration, fn() -> Outcome)> = vec![
            ("1", min(2), c1_chain_dp_optimality),
            ("2", min(1), c2_named_chain_values),
            ("5", min(5), c5_gtsp_exactness),
            ("6", min(1), c6_square_depot),
            ("7", min(15), c7_trends),
            ("8", min(5), c8_geometry),
            ("9", min(5), c9_solvers),
        ];
        let street = s.spawn(|| timed(c3_street_approximation));
        let handles: Vec<_> = simple
            .into_iter()
            .map(|(id, budget, f)| (id, budget, s.spawn(move || timed(f))))
            .collect();
        let mut lines: Vec<Line> = handles
            .into_iter()
            .map(|(id, budget, h)| match h.join() {
                Ok((outcome, elapsed)) => judge(id, budget, elapsed, outcome),
                Err(p) => judge(id, budget, Duration::ZERO, caught(Err(p))),
            })
            .collect();
        match street.join() {
            Ok(((outcome, run), elapsed)) => {
                lines.push(judge("3", min(10), elapsed, outcome));
                let soundness = run.failure_soundness.map(|()| {
                    format!(
                        "{} Failure guesses, brute optimum > T^ for each",
                        run.failures_checked
                    )
                });
                let soundness = match soundness {
                    Ok(_) if run.failures_checked == 0 => {
                        Err("the binary search never reported Failure".to_string())
                    }
                    other => other,
                };
                lines.push(judge("4", min(10), elapsed, soundness));
            }
            Err(p) => {
                let msg = caught(Err(p)).unwrap_err();
                lines.push(judge("3", min(10), Duration::ZERO, Err(msg.clone())));
                lines.push(judge("4", min(10), Duration::ZERO, Err(msg)));
            }
        }
        lines
    });
    lines.push(Line {
        id: "10",
        status: "N/A",
        detail: "timing tables and robot experiments are not reproduced; their roles are covered by criteria 5 and 9"
            .into(),
        elapsed: Duration::ZERO,
    });
    lines.sort_by_key(|l| l.id.parse::<u32>().unwrap());

    println!();
    for l in &lines {
        println!(
            "criterion {:>2}: {:<4} [{:>6.1}s] {}",
            l.id,
            l.status,
            l.elapsed.as_secs_f64(),
            l.detail
        );
    }
    let failed = lines.iter().filter(|l| l.status == "FAIL").count();
    println!();
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
