use thiserror::Error;

use crate::subset::SubsetMask;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range {1}..={2}")]
    DimensionOutOfRange(usize, usize, usize),

    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed rational `{0}` (expected an integer or p/q)")]
    MalformedRational(String),

    #[error("malformed subset `{0}` (expected comma-separated ascending elements)")]
    MalformedSubset(String),

    #[error("subset `{key}` names element {element}, but n = {n}")]
    ElementOutOfRange {
        key: String,
        element: usize,
        n: usize,
    },

    #[error("duplicate key `{0}`")]
    DuplicateKey(String),

    #[error("empty subset is not a valid index here")]
    EmptySubset,

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("cover enumeration exceeded the cap of {0} covers")]
    EnumerationCap(usize),
    #[error("cover search exceeded the budget of {0} visited multisets")]
    SearchBudget(usize),

    #[error("coefficient for `{0}` is negative")]
    NegativeCoefficient(String),

    #[error("linear program exceeded the pivot cap of {0}")]
    PivotCap(usize),

    #[error("vector is outside the cone ({violated} generator(s) violated)")]
    NotInCone { violated: usize },

    #[error("vector does not satisfy every nontrivial generator strictly")]
    NotStrict,

    #[error("box system for ground {ground} is infeasible: {reason}")]
    Infeasible { ground: SubsetMask, reason: String },

    #[error("no realization found with lambda <= {cap}; last failure: {last}")]
    Inconclusive { cap: String, last: String },

    #[error("realized body misses its target on {subset}: {detail}")]
    VerificationFailed { subset: SubsetMask, detail: String },

    #[error("coverage precondition violated: element {element} lies in {count} of the sets, need at least {k}")]
    CoverageViolated {
        element: usize,
        count: usize,
        k: u32,
    },

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
