//! Slow reference solvers.
//!
//! These share no geometry code with the solvers beyond [`Point`]: they
//! use their own segment tests, winding-number containment and grid
//! sampling, and enumerate instead of optimizing.
//!
//! [`Point`]: crate::geometry::Point

mod chain;
mod gtsp;
pub mod prim;
mod raycast;
mod street;

pub use chain::{
    brute_chain, brute_chain_intervals, oracle_intervals, CHAIN_MAX_ROBOTS, CHAIN_MAX_TARGETS,
};
pub use gtsp::{brute_gtsp, GTSP_MAX_ROBOTS, GTSP_MAX_VIEWPOINTS};
pub use raycast::{geodesic_distance, ray_reach, raycast_vp, RaySignature};
pub use street::{brute_street, brute_street_with, StreetOracle, STREET_MAX_GRID};
