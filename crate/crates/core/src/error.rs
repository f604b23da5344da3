use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("facet {facet}: expected {expected} coefficients, got {got}")]
    DimensionMismatch { facet: String, expected: usize, got: usize },

    #[error("cannot parse {0:?} as an exact rational")]
    BadScalar(String),

    #[error("duplicate facet name {0:?}")]
    DuplicateName(String),

    #[error("redundant inequalities: {}", .0.join(", "))]
    Redundant(Vec<String>),

    #[error("inequality system is unbounded")]
    Unbounded,

    #[error("inequality system is infeasible")]
    Empty,

    #[error("polytope is not full-dimensional")]
    LowerDimensional,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("unknown builtin polytope {0:?}")]
    UnknownBuiltin(String),

    #[error("dimension {dim} exceeds the limit of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("displacement loses facets: {}", .0.join(", "))]
    FacetLost(Vec<String>),

    #[error("displacement vector has length {got}, expected {expected}")]
    DisplacementLength { expected: usize, got: usize },

    #[error("ordering {0:?} did not stabilize within the retry budget")]
    NotStabilized(Vec<usize>),

    #[error("{0}")]
    GuardExceeded(String),

    #[error("no base vertex lies on all of {}", .0.join(", "))]
    EmptyLocus(Vec<String>),

    #[error("resolutions are over different base polytopes")]
    BaseMismatch,

    #[error("polytope is not simple")]
    NotSimple,

    #[error("top-degree volume form vanishes")]
    ZeroTopForm,

    #[error("expected degree {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("product degree {got} exceeds dimension {max}")]
    DegreeOverflow { got: usize, max: usize },

    #[error("point is not interior: facet {0} has nonpositive slack")]
    NotInterior(String),

    #[error("face poset is not Eulerian")]
    NotEulerian,

    #[error("h-vector {0:?} is not palindromic")]
    NonPalindromicInput(Vec<i64>),

    #[error("unknown facet {0:?}")]
    UnknownFacet(String),

    #[error("cannot parse expression: {0}")]
    BadExpression(String),

    #[error("empty resolution family")]
    EmptyFamily,
}
