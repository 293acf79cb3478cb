//! Executable constructions around word problems of pairs of groups: Schreier
//! graphs, cone types of context-free graphs, pushdown automata and grammars,
//! each checked against brute-force oracles.

pub mod backends;
pub mod cones;
pub mod error;
pub mod gallery;
pub mod grammar;
pub mod graph;
pub mod pda;
pub mod regular;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use graph::{GraphBall, LabelledGraph, Structure, VertexId};
pub use words::{Alphabet, Letter, ReducedWord, Word};
