//! TSPLIB round trips through an external TSP solver.

use super::document::{InstanceDocument, ProblemKind, ScenarioKind, SolutionDocument, SolverMeta};
use crate::error::{Error, Result};
use crate::gtsp::{build_gtsp, decode_tour, noon_bean_transform, GtspInstance, NoonBeanGraph};
use crate::tsp::{export_tsplib, karp_symmetrize, parse_tour, AtspInstance};

fn transformed(
    doc: &InstanceDocument,
    scenario: Option<ScenarioKind>,
) -> Result<(GtspInstance, NoonBeanGraph)> {
    if doc.kind()? != ProblemKind::Gtsp {
        return Err(Error::schema(
            "viewpoints",
            "TSPLIB exchange needs a gtsp instance",
        ));
    }
    let poly = doc.polygon()?;
    let g = build_gtsp(
        &poly,
        doc.viewpoints.as_deref().unwrap_or(&[]),
        doc.targets.as_deref().unwrap_or(&[]),
        doc.scenario(scenario)?,
        doc.m,
    )?;
    let nb = noon_bean_transform(&g);
    Ok((g, nb))
}

/// The Noon-Bean instance of a gtsp document as a TSPLIB file.
pub fn export_document(
    doc: &InstanceDocument,
    scenario: Option<ScenarioKind>,
    symmetrize: bool,
    scale: u32,
) -> Result<String> {
    let (_, nb) = transformed(doc, scenario)?;
    let inst: AtspInstance = if symmetrize {
        karp_symmetrize(&nb.atsp).instance
    } else {
        nb.atsp
    };
    export_tsplib(&inst, scale)
}

/// Maps a TSPLIB tour of the exported file back onto robot routes.
pub fn decode_document_tour(
    doc: &InstanceDocument,
    scenario: Option<ScenarioKind>,
    symmetrize: bool,
    tour_text: &str,
) -> Result<SolutionDocument> {
    let (g, nb) = transformed(doc, scenario)?;
    let order = parse_tour(tour_text)?;
    let order = if symmetrize {
        karp_symmetrize(&nb.atsp).decode(&order, &nb.atsp)?.order
    } else {
        order
    };
    let mut plan = decode_tour(&nb, &order)?;
    let missed = g.uncovered(&plan.visited());
    if !missed.is_empty() {
        return Err(Error::Decode(format!("tour misses clusters {missed:?}")));
    }
    plan.expand_paths(&doc.polygon()?, &g)?;
    let meta = SolverMeta {
        algorithm: "external-tour".into(),
        m: doc.m,
        t_m: doc.t_m,
        scenario: Some(scenario.or(doc.scenario).unwrap_or_default()),
        seed: doc.seed,
        ..Default::default()
    };
    Ok(SolutionDocument::from_decoded(&plan, &g, meta))
}
