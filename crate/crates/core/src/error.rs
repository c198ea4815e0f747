use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{0} is not a discriminant (must be 0 or 1 mod 4)")]
    NotADiscriminant(BigInt),
    #[error("discriminant {0} must be negative")]
    NonNegativeDiscriminant(BigInt),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error("singular relations need p = 1 mod 4, got p = {0}")]
    PrimeNotOneModFour(BigInt),
    #[error("invalid theta characteristic: {0}")]
    InvalidCharacteristic(String),
    #[error("{0} is not a ramification point")]
    NotRamificationPoint(String),
    #[error("level class {0} is odd")]
    OddLevelClass(String),
    #[error("P and Q must be distinct")]
    SameTorsionPoints,
    #[error("degree n = {n} must be positive and coprime to 2k = {two_k}")]
    DegreeNotCoprime { n: BigInt, two_k: BigInt },
    #[error("invalid calibration fixture: {0}")]
    Calibration(String),
    #[error("tau must lie in the upper half plane")]
    TauOutsideUpperHalfPlane,
}

pub type Result<T> = std::result::Result<T, Error>;
