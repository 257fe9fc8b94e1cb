//! Geometry of finite-dimensional real normed spaces and of the operator
//! spaces between them.
//!
//! The crate evaluates norms, dual norms and norming functionals, decides
//! Birkhoff–James orthogonality (plain, strong and approximate),
//! norm-parallelism and its approximate variant, locates norm-attainment sets
//! of linear operators, and ships randomized property suites that exercise the
//! operator-space characterizations of these relations.
//!
//! Everything is `no_std` + `alloc`; file formats and the command-line front
//! end live in the companion `normgeom-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod geometry;
pub mod lab;
pub mod linalg;
mod lp;
pub mod operator;
pub mod search;
#[cfg(feature = "serde")]
mod serde_impl;
pub mod space;

pub use error::GeomError;
pub use geometry::{SublevelInterval, Verdict, Witness};
pub use linalg::Matrix;
pub use operator::{LinearOperator, NormAttainmentSet, NormMethod, OperatorNormResult, ScanReport};
pub use space::{Covector, DirDeriv, Gauge, NormKind, Side, SpaceSpec};

/// Tolerance for closed-form and extreme-point evaluations.
pub const TAU_EQ: f64 = 1e-9;
/// Tolerance for sampled or iteratively refined evaluations.
pub const TAU_SAMP: f64 = 1e-6;
/// Relative width below which a sublevel interval counts as the singleton `{0}`.
pub const DELTA_SB: f64 = 1e-6;
/// Relative slack used when measuring sublevel intervals for strong orthogonality.
///
/// A few dozen ulps: large enough to absorb rounding jitter on flat segments,
/// small enough that a unit-curvature minimum still yields a width under `DELTA_SB`.
pub const SB_SLACK: f64 = 1e-14;

pub type Result<T, E = GeomError> = core::result::Result<T, E>;
