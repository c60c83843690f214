use proptest::prelude::*;
use watchmen::chain::plan_from_intervals;
use watchmen::geometry::shapes::{comb, l_shape, u_shape};
use watchmen::geometry::{CurveInterval, Point, SimplePolygon};
use watchmen::io::{
    generate, round12, solve_document, Env, GenOptions, InstanceDocument, ProblemKind,
    SolutionDocument,
};
use watchmen::tsp::{export_tsplib, import_tsplib, parse_tour, write_tour, AtspInstance};

fn polygon(i: usize) -> SimplePolygon {
    [l_shape(), u_shape(), comb()][i % 3].clone()
}

fn point_in(poly: &SimplePolygon, u: f64, v: f64) -> Point {
    let (lo, hi) = poly.bbox();
    Point::new(lo.x + u * (hi.x - lo.x), lo.y + v * (hi.y - lo.y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sees_is_symmetric(i in 0usize..3, a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64, d in 0.0..1.0f64) {
        let poly = polygon(i);
        let (p, q) = (point_in(&poly, a, b), point_in(&poly, c, d));
        prop_assume!(poly.contains(p) && poly.contains(q));
        prop_assert_eq!(poly.sees(p, q).unwrap(), poly.sees(q, p).unwrap());
    }

    #[test]
    fn instance_and_solution_documents_round_trip(env in 0usize..6, kind in 0usize..3, targets in 0usize..5, seed in any::<u64>()) {
        let kind = [ProblemKind::Chain, ProblemKind::Street, ProblemKind::Gtsp][kind];
        let doc = generate(&GenOptions {
            env: Env::ALL[env],
            kind,
            targets,
            viewpoints: 4,
            m: 2,
            seed,
            ..Default::default()
        })
        .unwrap();
        let back = InstanceDocument::from_json(&doc.to_json()).unwrap();
        prop_assert_eq!(&back, &doc);
        if kind == ProblemKind::Chain {
            let sol = solve_document(&doc, &Default::default()).unwrap();
            prop_assert_eq!(SolutionDocument::from_json(&sol.to_json()).unwrap(), sol);
        }
    }

    #[test]
    fn round12_is_idempotent(x in -1e9..1e9f64) {
        prop_assert_eq!(round12(round12(x)), round12(x));
        prop_assert!((round12(x) - x).abs() <= 1e-11 * x.abs().max(1e-300));
    }

    #[test]
    fn tsplib_round_trips_integer_matrices(n in 2usize..8, cells in prop::collection::vec(prop::option::weighted(0.85, 0u32..500), 64)) {
        let cost: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { cells[i * 8 + j].map_or(f64::INFINITY, f64::from) }).collect())
            .collect();
        let inst = AtspInstance::new("p", cost.clone()).unwrap();
        let back = import_tsplib(&export_tsplib(&inst, 1).unwrap()).unwrap();
        prop_assert_eq!(back.cost, cost);
    }

    #[test]
    fn tours_round_trip(order in Just((0..9usize).collect::<Vec<_>>()).prop_shuffle()) {
        prop_assert_eq!(parse_tour(&write_tour("t", &order)).unwrap(), order);
    }

    #[test]
    fn chain_makespan_never_grows_with_robots(ends in prop::collection::vec((0u8..20, 0u8..20), 1..6), t_m in 0.0..2.0f64) {
        let iv: Vec<CurveInterval> = ends
            .iter()
            .enumerate()
            .map(|(id, &(a, b))| CurveInterval { target_id: id, s_left: a.min(b) as f64 * 0.5, s_right: a.max(b) as f64 * 0.5 })
            .collect();
        let costs: Vec<f64> = (1..=4).map(|m| plan_from_intervals(&iv, m, t_m).unwrap().makespan).collect();
        prop_assert!(costs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{:?}", costs);
    }
}
