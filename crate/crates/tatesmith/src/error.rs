use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composition d_out * d_in is nonzero")]
    CompositionNonzero,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("unsupported prime {0}: an odd prime is required")]
    InvalidPrime(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid sheaf: {0}")]
    InvalidSheaf(String),
    #[error("unknown stratum {0:?}")]
    UnknownStratum(String),
    #[error("subset is not upward closed")]
    NotUpSet,
    #[error("subset is not downward closed")]
    NotDownSet,
    #[error("sheaves live on different posets")]
    BaseMismatch,
    #[error("stabilization failure: {0}")]
    StabilizationFailure(String),
    #[error("action is not regular: {0}")]
    NotRegular(String),
    #[error("not Tate-parity: {0}")]
    NotTateParity(String),
    #[error("not normal: {0}")]
    NotNormal(String),
    #[error("negative extensions present: {0}")]
    NegativeExtensions(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
