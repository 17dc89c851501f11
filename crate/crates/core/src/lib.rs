//! Distribution-free absorption probabilities for convex hulls of random
//! walks and bridges, computed from the characteristic polynomials of the
//! reflection arrangements `A_{n-1}`, `B_n`, `D_n` and cross-checked against
//! region enumeration, conic intrinsic volumes and simulation.

pub mod error;
pub mod scalar;
pub mod linalg;
pub mod lp;
pub mod combinatorics;
pub mod arrangement;
pub mod special;
pub mod absorption;
pub mod asymptotics;
pub mod sampling;
pub mod hull;
pub mod conic;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational carrier for every exact probability.
pub type ExactRational = num_rational::BigRational;
/// Simplex instances used by the exact oracles and the samplers.
pub type ExactLp = lp::LinearProgram<ExactRational>;
pub type FloatLp = lp::LinearProgram<f64>;
pub use conic::{ExactVolumes, FloatVolumes};
