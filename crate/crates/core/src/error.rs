use thiserror::Error;

/// Problems with the requested configuration. These are reported separately
/// from relation failures (CLI exit status 2 rather than 1).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("need m + n >= 1 (got m = {m}, n = {n})")]
    EmptySystem { m: usize, n: usize },
    #[error("order p must be at least 1")]
    ZeroOrder,
    #[error("boson cutoff {cutoff} is below 3; degree-3 relations would have no safe columns")]
    CutoffTooSmall { cutoff: usize },
    #[error("basis dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: String, cap: usize },
    #[error("family {family} requires {requirement} (got m = {m}, n = {n})")]
    FamilyNotApplicable {
        family: String,
        requirement: &'static str,
        m: usize,
        n: usize,
    },
    #[error("no relation families requested")]
    NoFamilies,
    #[error("unknown relation family `{0}`")]
    UnknownFamily(String),
    #[error("instance {id} has no safe columns at cutoff {cutoff}; the check would be vacuous")]
    NoSafeColumns { id: String, cutoff: usize },
    #[error("generator {0} is out of range for this representation")]
    OutOfRange(String),
    #[error("cyclic subspace level {level} exceeds the boson cutoff {cutoff}")]
    LevelBeyondCutoff { level: usize, cutoff: usize },
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{0}` is not diagonal")]
    NotDiagonal(String),
    #[error("representation construction failed: {0}")]
    Construction(String),
    #[error("mutation self-check needs m >= 1 and n >= 1")]
    SelfCheckNeedsMixedSystem,
}
