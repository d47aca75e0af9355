//! Crate-wide error type.
//!
//! Math-level failures (invalid geometry, non-invertible elements, totals
//! that fail a rationality check) are reported here with enough witnessing
//! data to reproduce the failure; malformed user input is kept separate so
//! the CLI can map the two classes to distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rational parse error: {0:?}")]
    RationalParse(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("root of unity of order {required} does not embed in the ring of order {ambient}")]
    OrderMismatch { required: u64, ambient: u64 },

    #[error("series has a zero constant term and is not invertible")]
    NonInvertibleSeries,

    #[error("series composition requires the inner series to have zero constant term")]
    CompositionConstantTerm,

    #[error("variable count mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: usize, found: usize },

    #[error("truncation order {found} is not supported here (need {need})")]
    BadTruncation { need: String, found: usize },

    #[error("derivative order {need} exceeds the function's smoothness {have}")]
    NotSmoothEnough { need: usize, have: usize },

    #[error("function support is unbounded; this operation needs compact support")]
    UnboundedSupport,

    #[error("halfspace {index} has a non-primitive normal {normal:?}")]
    NonPrimitiveNormal { index: usize, normal: Vec<i64> },

    #[error("halfspace {index} has a zero normal")]
    ZeroNormal { index: usize },

    #[error("polytope is unbounded in direction {direction:?}")]
    Unbounded { direction: Vec<i64> },

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("polytope is not full-dimensional (affine hull of vertices has dimension {hull_dim} < {dim})")]
    NotFullDimensional { hull_dim: usize, dim: usize },

    #[error("vertex {location:?} lies on {count} facets {facets:?}; a simple {dim}-polytope allows exactly {dim}")]
    NonSimpleVertex {
        location: Vec<String>,
        facets: Vec<usize>,
        count: usize,
        dim: usize,
    },

    #[error("vertex {location:?} is not a lattice point")]
    NonIntegralVertex { location: Vec<String> },

    #[error("halfspace {index} is redundant: it supports no face of the polytope")]
    RedundantFacet { index: usize },

    #[error("dimension {dim} with {count} halfspaces cannot bound a polytope")]
    TooFewHalfspaces { dim: usize, count: usize },

    #[error("polarizing vector {xi:?} pairs to zero with edge vector of facet {facet} at vertex {vertex:?}")]
    NotPolarizing {
        xi: Vec<String>,
        vertex: Vec<String>,
        facet: usize,
    },

    #[error("point {point:?} is not on the edge-vector lattice of vertex {vertex:?}")]
    OffLattice {
        point: Vec<String>,
        vertex: Vec<String>,
    },

    #[error("total failed the rationality check; residual coefficients {residual:?}")]
    NonRationalTotal { residual: Vec<String> },

    #[error("geometry consistency check failed: {0}")]
    Inconsistent(String),

    #[error("cone normals are not linearly independent")]
    DegenerateCone,

    #[error("triangulation produced a degenerate simplex at h = 0")]
    DegenerateSimplex,

    #[error("polytope is not regular: vertex {vertex:?} has index {index}")]
    NotRegular { vertex: Vec<String>, index: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of user-supplied data shape (exit code 2), as
    /// opposed to mathematically meaningful validation failures (exit 1).
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::RationalParse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
