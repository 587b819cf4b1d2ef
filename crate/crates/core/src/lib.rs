//! Shortlex normal forms, geodesic analysis and kernel free-basis elimination
//! for large and even Artin groups.

pub mod cli;
pub mod dihedral;
pub mod geodesic;
pub mod graph;
pub mod kernel;
pub mod linear;
pub mod oracle;
pub mod rewriting;
pub mod words;

pub use graph::ArtinGraph;
pub use rewriting::ShortlexEngine;
pub use words::{Letter, LexOrder, Word};
