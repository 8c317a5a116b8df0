use std::fmt;

use thiserror::Error;

use crate::complex::FaceId;
use crate::graph::{DartId, GraphError, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("duplicate cell name `{0}`")]
    DuplicateName(String),
    #[error("unknown cell `{0}`")]
    UnknownName(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown dart {0}")]
    UnknownDart(DartId),
    #[error("unknown face {0}")]
    UnknownFace(FaceId),
    #[error("face `{0}` has an empty boundary")]
    EmptyBoundary(String),
    #[error("boundary of face `{0}` is not a closed path")]
    BoundaryNotClosed(String),
    #[error("bad split positions {i}, {j} on face `{face}`")]
    BadPositions { face: String, i: usize, j: usize },
    #[error("maps are not composable: target and source differ")]
    TargetMismatch,
    #[error("map is not dimension preserving")]
    NotDimensionPreserving,
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("square does not commute: {0}")]
    SquareDoesNotCommute(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("not a quotient relation: {0}")]
    NotQuotientRelation(String),
    #[error("group action is not orientation preserving: {0}")]
    NotOrientationPreserving(String),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("subcomplexes are not disjoint")]
    NotDisjoint,
    #[error("face `{0}` degenerates to a point outside the collapsed parts")]
    DegenerateFace(String),
    #[error("not a handle configuration: {0}")]
    NotHandleConfiguration(String),
}

impl From<GraphError> for ConstructionError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::NotQuotientRelation(d) => ConstructionError::NotQuotientRelation(format!(
                "class of dart `{d}` contains its inverse but no vertex"
            )),
            other => ConstructionError::Complex(ComplexError::Graph(other)),
        }
    }
}

/// Which covering axiom failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoveringAxiom {
    /// The map is not dimension preserving.
    C1,
    /// Local continuity on darts is not a bijection.
    C2,
    /// Local continuity on face appearances is not a bijection.
    C3,
    /// The target is disconnected or fibers differ in size.
    Fibers,
}

/// Details of a failed covering check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringFailure {
    pub axiom: CoveringAxiom,
    /// Where the failure was observed, as cell names.
    pub location: String,
    /// Whether injectivity (as opposed to surjectivity) broke.
    pub injectivity: bool,
    /// All local continuity maps are injective: an immersion.
    pub immersion: bool,
}

impl fmt::Display for CoveringFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = if self.injectivity { "injectivity" } else { "surjectivity" };
        match self.axiom {
            CoveringAxiom::C1 => write!(f, "C1 fails: {}", self.location),
            CoveringAxiom::Fibers => write!(f, "fiber check fails: {}", self.location),
            ax => write!(f, "{ax:?} {what} fails at {}", self.location),
        }?;
        if self.immersion {
            write!(f, " (map is an immersion)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoveringError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("not a covering: {0}")]
    NotCovering(CoveringFailure),
    #[error("vertex `{0}` is not in the fiber over the basepoint")]
    BasepointNotInFiber(String),
    #[error("subgroup condition fails on generator loop {0}")]
    SubgroupConditionFails(String),
    #[error("subcomplex is not connected")]
    NotConnected,
    #[error("subcomplex is not simply connected: {0}")]
    NotSimplyConnected(String),
    #[error("bounded search inconclusive: {0}")]
    Inconclusive(String),
    #[error("coset table is not closed")]
    TableNotClosed,
    #[error("relator violation: {0}")]
    RelatorViolation(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

impl From<GraphError> for CoveringError {
    fn from(e: GraphError) -> Self {
        CoveringError::Complex(ComplexError::Graph(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutations act on different domains ({0} vs {1})")]
    DomainMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("group of order {0} exceeds the enumeration cap {1}")]
    TooLarge(usize, usize),
    #[error("not a subgroup")]
    NotSubgroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("no covering automorphism: lifts of loop {0} disagree on closedness")]
    DaggerFails(String),
    #[error("not a subgroup of the Galois group")]
    NotSubgroup,
    #[error("covering is not Galois")]
    NotGalois,
    #[error("covering is not a map of graphs")]
    NotGraph,
    #[error("correspondence check failed: {0}")]
    CorrespondenceFails(String),
}
