use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice rank must be at least 1")]
    ZeroRank,
    #[error("lattice rank {0} exceeds the supported maximum of {max}", max = crate::fan::MAX_RANK)]
    RankTooLarge(usize),
    #[error("fan has no rays")]
    NoRays,
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayDimension { index: usize, expected: usize, found: usize },
    #[error("rays {first} and {second} span the same ray")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} references ray {index}, which does not exist")]
    RayIndexOutOfRange { cone: usize, index: usize },
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("fan is not complete")]
    NotComplete,
    #[error("fan is not simplicial")]
    NotSimplicial,
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("rays do not span N_R; the class group sequence needs no torus factors")]
    RaysDoNotSpan,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("divisor is not Cartier")]
    NotCartier,
    #[error("divisor polytope is unbounded on a non-complete fan")]
    Unbounded,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("mismatched ambient data: {0}")]
    AmbientMismatch(String),
    #[error("too many maximal cones ({0}) for the Čech cover")]
    TooManyCones(usize),
    #[error("search region of {0} lattice points exceeds the enumeration limit")]
    SearchRegionTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
