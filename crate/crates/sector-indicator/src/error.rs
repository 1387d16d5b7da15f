//! Crate-wide error type.

use num_complex::Complex64;

/// Errors produced by geometry construction, quadrature and transform
/// evaluation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("sector angle {0} outside the open interval (0, pi/2)")]
    InvalidSectorAngle(f64),

    #[error("degenerate angle {0}: sin or cos vanishes within working precision")]
    DegenerateAngle(f64),

    #[error("evaluation ray angle {theta} not strictly inside the sector of half-angle {alpha}")]
    RayOutsideSector { theta: f64, alpha: f64 },

    #[error("support line at level {level} does not cut both contour branches away from the apex")]
    NoIntersection { level: f64 },

    #[error("point {0} lies outside the closed sector product")]
    OutOfSector(Complex64),

    #[error("evaluation overflows f64 range (log-magnitude {0}); use the log-magnitude channel")]
    Overflow(f64),

    #[error("omega {omega} lies in neither half-plane of coordinate {coordinate}")]
    OutsideDomain { omega: Complex64, coordinate: usize },

    #[error("transform precondition violated: Re(omega e^(i b alpha)) = {lhs} is not < {rhs}")]
    PreconditionViolated { lhs: f64, rhs: f64 },

    #[error("decay rate {0} is not negative; certified truncation impossible")]
    NonNegativeDecay(f64),

    #[error("quadrature budget exceeded: {panels} panels, error estimate {err_est}")]
    BudgetExceeded { panels: usize, err_est: f64 },

    #[error("|z| = {z_abs} too small for certified contour truncation (minimum {z_min})")]
    ZTooSmall { z_abs: f64, z_min: f64 },

    #[error("arg z = {arg_z} does not match the contour's evaluation angle {theta}")]
    AngleMismatch { arg_z: f64, theta: f64 },

    #[error("|omega| = {omega_abs} inside the Borel convergence radius {radius}")]
    ConvergenceRadius { omega_abs: f64, radius: f64 },

    #[error("zero modulus argument")]
    ZeroModulus,

    #[error("empty sample set")]
    EmptySamples,

    #[error("source function carries no separated representation; contour inversion needs one")]
    UnsupportedSource,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
