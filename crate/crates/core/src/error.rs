use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid variety: {0}")]
    InvalidVariety(&'static str),
    #[error("classes live on different varieties")]
    VarietyMismatch,
    #[error("monomial has {found} exponents, variety has {expected} factors")]
    ArityMismatch { expected: usize, found: usize },
    #[error("monomial of degree {found} in a class of codimension {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("codimension {codim} exceeds the dimension {dim}")]
    CodimensionTooLarge { codim: u32, dim: u32 },
    #[error("expected a class of codimension {expected}, got {found}")]
    WrongCodimension { expected: u32, found: u32 },
    #[error("cycle dimension k = {k} outside 0 <= k < n = {n}")]
    DimensionOutOfRange { k: i64, n: i64 },
    #[error("constant undefined at (n, k) = ({n}, {k}): the recursion divides by zero")]
    UndefinedConstant { n: u32, k: u32 },
    #[error("divisor is not nef")]
    NotNef,
    #[error("divisor is not big")]
    NotBig,
    #[error("divisor is not very ample (needs integer coordinates >= 1)")]
    NotVeryAmple,
    #[error("class is not pseudo-effective")]
    NotPseudoEffective,
    #[error("expected integer coordinates")]
    NotIntegral,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
