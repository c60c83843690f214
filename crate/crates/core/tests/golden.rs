//! Byte-exact golden files. Set `WATCHMEN_BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};

use watchmen::io::{export_document, render_svg, solve_document, InstanceDocument};
use watchmen::tsp::{export_tsplib, write_tour, AtspInstance, DEFAULT_SCALE};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn instance(name: &str) -> InstanceDocument {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(name);
    InstanceDocument::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn check(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("WATCHMEN_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from the golden file");
}

fn small_atsp() -> AtspInstance {
    let inf = f64::INFINITY;
    AtspInstance::new(
        "small",
        vec![
            vec![0.0, 1.5, inf, 2.25],
            vec![0.125, 0.0, 3.0, inf],
            vec![4.0, 0.5, 0.0, 1.0],
            vec![1.0, inf, 2.0005, 0.0],
        ],
    )
    .unwrap()
}

#[test]
fn small_atsp_tsplib() {
    check(
        "small_atsp.tsp",
        &export_tsplib(&small_atsp(), DEFAULT_SCALE).unwrap(),
    );
    check("small_atsp.tour", &write_tour("small", &[0, 1, 2, 3]));
}

#[test]
fn square_noon_bean_tsplib() {
    let doc = instance("square_gtsp.json");
    check(
        "square_noon_bean.tsp",
        &export_document(&doc, None, false, DEFAULT_SCALE).unwrap(),
    );
    check(
        "square_noon_bean_sym.tsp",
        &export_document(&doc, None, true, DEFAULT_SCALE).unwrap(),
    );
}

#[test]
fn plots() {
    for (inst, svg) in [
        ("square_gtsp.json", "square_gtsp.svg"),
        ("u_chain.json", "u_chain.svg"),
    ] {
        let doc = instance(inst);
        let sol = solve_document(&doc, &Default::default()).unwrap();
        check(svg, &render_svg(&doc, Some(&sol)));
    }
}
