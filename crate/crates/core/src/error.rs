use alloc::string::String;
use alloc::vec::Vec;

/// Errors reported by validation and construction.
///
/// Computation itself is total: once inputs pass construction, the
/// operations cannot fail. Every variant therefore names malformed input
/// or a violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("elements belong to different groups")]
    MismatchedParents,
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("closure exceeded the group order cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("{0} is not contained in {1}")]
    NotContained(String, String),
    #[error("invalid module action")]
    InvalidAction(Vec<ActionViolation>),
    #[error("map is not well defined on cosets (relation column {column})")]
    NotWellDefined { column: usize },
    #[error("invalid place `{id}`: {reason}")]
    InvalidPlace { id: String, reason: String },
    #[error("invalid place set: {0}")]
    InvalidPlaceSet(String),
    #[error("sequence is not short exact: {0}")]
    NotShortExact(String),
    #[error("element class has infinite order in the coinvariant group")]
    NotTorsion,
    #[error("invalid radical data: {0}")]
    InvalidRadical(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid preset parameters: {0}")]
    BadPresetParams(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// One failed module-action check, pinpointing the offending data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionViolation {
    /// The matrix attached to the identity element does not act as the
    /// identity on the carrier.
    IdentityNotIdentity,
    /// `action(g) * action(h)` and `action(g*h)` disagree as maps on the
    /// carrier.
    CompositionMismatch { g: usize, h: usize },
    /// `action(g)` does not map the relation span into itself.
    RelationNotPreserved { g: usize, column: usize },
    /// An action matrix has the wrong shape.
    WrongShape { g: usize },
    /// The number of matrices does not match the group order.
    WrongCount { expected: usize, got: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
