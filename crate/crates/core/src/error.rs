use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: i64, modulus: u64 },
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u64, u64),
    #[error("character modulus {char_modulus} does not divide {modulus}")]
    ModulusMismatch { char_modulus: u64, modulus: u64 },
    #[error("argument out of range: {0}")]
    RangeExceeded(String),
    #[error("first-term domination needs z < 2*sqrt(nu+1) (nu={nu}, z={z})")]
    DominanceNotApplicable { nu: u32, z: f64 },
    #[error("weight {0} is below 3; the series does not converge absolutely")]
    WeightTooSmall(u32),
    #[error("tolerance {tol:e} would need more than {limit} terms")]
    ToleranceUnreachable { tol: f64, limit: u64 },
    #[error("character parity does not match weight {k}")]
    ParityMismatch { k: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotInvertible { .. } => "NotInvertible",
            Error::NonCoprimeModuli(..) => "NonCoprimeModuli",
            Error::ModulusMismatch { .. } => "ModulusMismatch",
            Error::RangeExceeded(_) => "RangeExceeded",
            Error::DominanceNotApplicable { .. } => "DominanceNotApplicable",
            Error::WeightTooSmall(_) => "WeightTooSmall",
            Error::ToleranceUnreachable { .. } => "ToleranceUnreachable",
            Error::ParityMismatch { .. } => "ParityMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
