//! Graph complexes, graph operads and the maps between them.

pub mod canon;
pub mod complexes;
pub mod error;
pub mod enumerate;
pub mod graph;
pub mod homology;
pub mod gtmaps;
pub mod linalg;
pub mod operads;
pub mod verify;
pub mod vector;

pub use canon::{automorphism_edge_signs, canonicalize, Sign, SignedCanonGraph};
pub use error::{Error, GraphError, Result};
pub use graph::{parse_graph, serialize_graph, Edge, Graph, GraphKind, KindTag, TadpolePolicy, Vertex};
pub use enumerate::{enumerate_graphs, Constraints};
pub use vector::{int, parse_terms, parse_vector, rat, vadd, vcoeff, vequal, vscale, vterm, GraphVector, Rational};
