//! Infection resilience of balanced bipartite networks.
//!
//! Graphs have `n` vertices per side, with a minimum degree `d` required of
//! the right side. Infection follows the independent cascade: each vertex is
//! infected by nature with probability `mu`, then each newly infected vertex
//! gets one chance to infect each uninfected neighbor with probability `p`.
//!
//! - [`graph`]: representation, generators, canonical forms, enumeration.
//! - [`percolation`]: exact and sampled expectations of component functionals.
//! - [`infection`]: the infection objective, cascade simulation, closed
//!   forms for stars and `K_{d,d}` / `K_{d,n}`, and the threshold model.
//! - [`extremal`]: optimal-graph search, phase diagrams, the optimal
//!   subnetwork problem and its reduction instances.

pub mod error;
pub mod extremal;
pub mod format;
pub mod graph;
pub mod infection;
pub mod percolation;
pub mod rng;
mod unionfind;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, DegreeConstraint};
pub use infection::InfectionParams;
pub use percolation::{Estimate, Functional, PercParams};
