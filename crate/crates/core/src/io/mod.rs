//! Documents, instance generation, experiments, verification and plots.

mod batch;
mod document;
mod exchange;
mod gen;
mod solve;
mod svg;
mod verify;

pub use batch::{rows_to_csv, run_batch, trial_seed, BatchConfig, BatchRow, Sweep};
pub use document::{
    round12, InstanceDocument, ProblemKind, RobotPath, ScenarioKind, SolutionDocument, SolverMeta,
    SCHEMA_VERSION,
};
pub use exchange::{decode_document_tour, export_document};
pub use gen::{generate, Env, GenOptions};
pub use solve::{solve_document, SolveConfig};
pub use svg::render_svg;
pub use verify::{verify, OracleCheck, VerifyOptions, VerifyReport, STREET_COVERAGE};
