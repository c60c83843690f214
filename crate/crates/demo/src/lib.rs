//! wasm-bindgen bindings for the static page in `www/`.
//!
//! Every function takes and returns JSON or SVG text. Errors come back as
//! JavaScript exceptions carrying the error message.

use wasm_bindgen::prelude::*;
use watchmen::io::{
    generate, render_svg, solve_document, Env, GenOptions, InstanceDocument, ProblemKind,
    SolutionDocument, SolveConfig,
};

fn js(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Random instance as JSON. `viewpoints` is only used by gtsp instances.
#[wasm_bindgen]
pub fn generate_instance(
    env: &str,
    kind: &str,
    targets: usize,
    viewpoints: usize,
    m: usize,
    seed: u64,
) -> Result<String, JsValue> {
    let doc = generate(&GenOptions {
        env: env.parse::<Env>().map_err(js)?,
        kind: kind.parse::<ProblemKind>().map_err(js)?,
        targets,
        viewpoints,
        m,
        seed,
        ..Default::default()
    })
    .map_err(js)?;
    Ok(doc.to_json())
}

/// Solves an instance document with `m` robots and returns the solution JSON.
#[wasm_bindgen]
pub fn solve(instance_json: &str, m: usize) -> Result<String, JsValue> {
    let doc = InstanceDocument::from_json(instance_json).map_err(js)?;
    let cfg = SolveConfig {
        m: Some(m),
        ..Default::default()
    };
    Ok(solve_document(&doc, &cfg).map_err(js)?.to_json())
}

/// SVG of an instance, with the routes of `solution_json` if it is non-empty.
#[wasm_bindgen]
pub fn plot(instance_json: &str, solution_json: &str) -> Result<String, JsValue> {
    let doc = InstanceDocument::from_json(instance_json).map_err(js)?;
    let sol = if solution_json.trim().is_empty() {
        None
    } else {
        Some(SolutionDocument::from_json(solution_json).map_err(js)?)
    };
    Ok(render_svg(&doc, sol.as_ref()))
}
