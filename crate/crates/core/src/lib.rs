//! Combinatorics of decorated dual graphs for log maps relative to a simple
//! normal crossings divisor.
//!
//! The crate validates decorated dual graphs, builds the lattice map from
//! edge/vertex parameters to node coordinates, and derives everything that
//! follows from it: kernel, image, cokernel torsion, the tropical feasibility
//! verdict, the gluing cone and its binomial equations, expected dimensions,
//! and the numerical obstruction test.

pub mod cone;
pub mod corpus;
pub mod decorations;
pub mod dims;
pub mod error;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod order;
pub mod report;
pub mod toric;
pub mod tropical;

pub use error::{Error, Result};
pub use graph::{DecoratedDualGraph, GeometryContext, GraphBuilder, Pairing};

/// Format tag carried by every file this crate reads or writes.
pub const SCHEMA: &str = "logcone/1";
