//! Structural graph algorithms around tree-decompositions of small
//! adhesion: separations, torsos, treewidth, automorphisms, quasi-isometry
//! certificates, fat minors, planarity and the planar gluing construction.

pub mod fatminor;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metric;
pub mod planarity;
pub mod planarize;
pub mod separations;
pub mod symmetry;
pub mod treedecomp;
pub(crate) mod util;

pub use graph::{vset, Distance, Graph, GraphError, Vertex, VertexSet};
pub use separations::{enumerate_tight, is_separation, is_tight, Separation, SeparationError};
pub use treedecomp::{TdError, TreeCenter, TreeDecomposition, Violation};
