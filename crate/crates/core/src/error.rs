use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumthError {
    #[error("value out of range: {0}")]
    OutOfRange(u128),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("invalid field parameters: {0}")]
    InvalidParams(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Numth(#[from] NumthError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("closure exceeded the enumeration cap of {0} elements")]
    ClosureLimitExceeded(usize),
    #[error("group is not enumerated")]
    NotEnumerated,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("class count {count} exceeds the class cap {cap}")]
    ClassCapExceeded { count: usize, cap: usize },
    #[error("eigenspace splitting failed: {0}")]
    SplitFailure(String),
    #[error("modulus {ell} is not valid for this group: {reason}")]
    ModulusMismatch { ell: u64, reason: String },
    #[error("degree identity violated: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Numth(#[from] NumthError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PGroupError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("centers do not match: {0}")]
    CenterMismatch(String),
    #[error("unsupported group for this certificate: {0}")]
    UnsupportedKind(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActError {
    #[error("automorphisms act on different targets")]
    TargetMismatch,
    #[error("automorphism kind does not match the element kind")]
    KindMismatch,
    #[error("subgroup is not invariant under the automorphism")]
    NotInvariant,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Gf(#[from] GfError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error(transparent)]
    Numth(#[from] NumthError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    PGroup(#[from] PGroupError),
    #[error(transparent)]
    Act(#[from] ActError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Family(#[from] FamilyError),
}
