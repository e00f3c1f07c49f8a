//! Hamiltonian paths and cycles whose vertex order must extend a given
//! partial order, with structural solvers, an exact oracle and
//! instance generators.

pub mod blocklike;
pub mod cliquemod;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod planar;
pub mod poset;
pub mod sparse;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::Graph;
pub use instance::{
    read_instance, validate_solution, write_instance, Certificates, Embedding, Instance,
    Objective, Solution, ValidationReport, Variant,
};
pub use poset::{build_poset, Poset};
