//! Finite graphs, rooted trees and their epimorphisms: map classes,
//! factorizations, amalgamations, inverse sequences and brute-force oracles.

pub mod amalgamate;
pub mod canon;
pub mod dot;
pub mod error;
pub mod factorize;
pub mod graph;
pub mod morphism;
pub mod ops;
pub mod sequences;
pub mod suite;
pub mod oracle;
pub mod tree;

pub use error::{Error, Result};
pub use graph::FiniteGraph;
pub use morphism::{compose, ClassReport, Morphism};
pub use tree::{RootedTree, VertexKind, VertexProfile};
