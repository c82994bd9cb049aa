//! Tight cycle decompositions of 3-uniform hypergraphs.
//!
//! The crate builds and checks the objects that appear when decomposing a
//! 3-graph into tight cycles: divisibility conditions, a dense family with no
//! tour decomposition together with a parity certificate, tour-trail
//! decompositions and their residual digraphs, absorbing gadgets, randomized
//! packing by cycle extension, exact and fractional decomposition oracles and
//! Euler tour assembly.

pub mod cli;
pub mod counterexample;
pub mod decomposer;
pub mod error;
pub mod euler;
pub mod extender;
pub mod gadgets;
pub mod generate;
pub mod graph;
pub mod io;
pub mod pathfinder;
pub mod rng;
pub mod tour_trail;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{DivisibilityKind, EdgeSet, Graph2, ThreeGraph, Triple, Vertex, VertexSet};
pub use walks::{WalkKind, WalkSeq};
