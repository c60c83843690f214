//! Visibility-based route planning for teams of robots.
//!
//! * [`chain`] solves the min-max problem on a chain-visible curve exactly.
//! * [`street`] covers a whole street polygon from a curve within a factor 4.
//! * [`gtsp`] reduces discrete viewpoint selection with depots to an
//!   asymmetric TSP (Noon-Bean) and decodes optimal tours back into routes.
//! * [`tsp`] holds the exact TSP solvers and TSPLIB exchange.
//! * [`oracles`] are slow brute-force references for all of the above.
//! * [`io`] reads and writes instance and solution documents, generates
//!   random instances, runs batch experiments and renders SVG.

pub mod chain;
pub mod error;
pub mod geometry;
pub mod gtsp;
pub mod io;
pub mod oracles;
pub mod street;
pub mod tsp;

pub use error::{Error, Result};
