use num_bigint::BigInt;

use crate::lattice::MukaiVector;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("context requires d >= 1, got {0}")]
    InvalidDegree(BigInt),

    #[error("vector {0} is not spherical (square != -2)")]
    NonSpherical(MukaiVector),

    #[error("vector {0} is not isotropic (square != 0)")]
    NotIsotropic(MukaiVector),

    #[error("vector {0} is not primitive")]
    NotPrimitive(MukaiVector),

    #[error("enumeration window is empty")]
    WindowEmpty,

    #[error("half-plane point requires t > 0")]
    NotInUpperHalfPlane,

    #[error("coincident points do not span a geodesic")]
    CoincidentPoints,

    #[error("moebius map requires positive determinant")]
    NonPositiveDeterminant,

    #[error("matrix does not preserve the pairing")]
    NotAnIsometry,

    #[error("induced map reverses orientation")]
    OrientationReversed,

    #[error("rank-zero vector: the induced map is a translation, not a linear fractional one")]
    RankZero,

    #[error("rank product must be positive")]
    NegativeRankProduct,

    #[error("rank product must be a perfect square")]
    NotPerfectSquare,

    #[error("wall requires a spherical first vector and a positive-rank isotropic second vector")]
    BadVectors,

    #[error("central charges are proportional: the wall is degenerate")]
    DegenerateProportional,

    #[error("wall is not of type II")]
    NotTypeII,

    #[error("vector must be primitive isotropic with positive rank")]
    BadVector,

    #[error("cannot parse rational: {0}")]
    BadRational(String),
}
