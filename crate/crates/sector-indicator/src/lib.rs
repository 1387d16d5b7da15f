//! Numerical tools for analytic functions of finite exponential type on
//! products of plane sectors.
//!
//! The crate evaluates the two-dimensional concatenated Laplace transform of
//! such functions, reconstructs them through sectorial contour inversion,
//! estimates directional growth (indicator) sets empirically, and computes
//! the trigonometric-convexity bound that links boundary-ray growth rates to
//! interior ones. A classical one-variable Borel/Polya baseline and a batch
//! CLI round out the toolkit.
//!
//! Modules follow the pipeline:
//!
//! * [`geometry`]: sectors, half-plane domains, integration contours.
//! * [`functions`]: the catalog of test functions with growth envelopes.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration over rays and contours.
//! * [`transform`]: one- and two-variable sectorial Laplace transforms.
//! * [`inversion`]: contour inversion and the deformed-contour estimate.
//! * [`indicator`]: growth-set membership tests and convexity bounds.
//! * [`polya`]: Borel transform and Polya circle reconstruction.
//! * [`cli`]: batch command implementations used by the `sector-indicator` binary.

pub mod cli;
pub mod error;
pub mod functions;
pub mod geometry;
pub mod indicator;
pub mod inversion;
pub mod polya;
pub mod quadrature;
pub mod transform;

pub use error::{Error, Result};
pub use functions::{AnalyticFunctionModel, GrowthEnvelope};
pub use geometry::{GammaContour, HalfPlaneDomain, LambdaContour, SectorPair};
pub use quadrature::{QuadResult, QuadratureConfig};
pub use transform::ConcatenatedLaplace;
