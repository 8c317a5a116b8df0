//! Combinatorial 2-complexes and their coverings.
//!
//! Complexes are built from darts (directed edges paired by an involution)
//! and faces attached along closed dart words. On top of that the crate
//! provides maps with rotation offsets, quotients, pushouts, pullbacks,
//! Higman composition, covering certification and lifting, coset
//! enumeration, monodromy, Galois groups and the correspondence between
//! intermediate covers and subgroups.

pub mod complex;
pub mod constructions;
pub mod corpus;
pub mod covering;
pub mod error;
pub mod galois;
pub mod graph;
pub mod homotopy;
pub mod io;
pub mod map;
pub mod permgroup;
pub mod report;

pub use complex::{subdivide_face, validate_complex, FaceId, Subcomplex, TwoComplex};
pub use error::{
    ComplexError, ConstructionError, CoveringAxiom, CoveringError, CoveringFailure, GaloisError, PermError,
};
pub use graph::{
    components, is_connected, is_homeomorphic, quotient_graph, spanning_tree, spanning_tree_by, subdivide_edge,
    topological_normal_form, validate_graph, DartId, DartImage, Graph, GraphCell, GraphError, Orientation, Path,
    SpanningTree, VertexId,
};
pub use homotopy::{apply_move, homotopic_bounded, reduce_path, HomotopyBounds, HomotopyMove, HomotopyVerdict};
pub use map::{
    complex_isomorphism, compose_maps, is_isomorphism, local_continuity, validate_map, ComplexMap, FaceImage,
    MapBuilder,
};
pub use permgroup::{PermGroup, Permutation, SubgroupLattice};
pub use report::ValidationReport;
