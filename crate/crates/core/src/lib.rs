//! Saddle-point search toolkit built around the spring pair method: a
//! Hessian-free walker that locates index-1 saddle points by alternating
//! drifting and climbing dynamics of a spring-coupled particle pair, using
//! the minimum energy path tangent as the ascent direction.
//!
//! The crate bundles:
//!
//! - [`spm`] — the spring pair walker itself;
//! - [`baselines`] — dimer and gentlest-ascent-dynamics walkers for
//!   comparison experiments;
//! - [`potentials`] — test surfaces (two 2D functions, Lennard-Jones
//!   clusters, the spectral Lifshitz–Petrich functional);
//! - [`landscape`] — minima discovery, saddle enumeration, minimum-energy-path
//!   reconstruction, and barrier-graph assembly;
//! - [`fd`] — finite-difference oracles for gradient checks and index-1
//!   verification;
//! - [`io`] — the on-disk formats (XYZ, raw field dumps, trace CSV, result
//!   and graph JSON).
//!
//! All math is generic over the scalar type via [`num::Scalar`] (`f32` or
//! `f64`); the aliases at the crate root pin the 64-bit instantiations used
//! by the CLI and the test suite, since the stock convergence thresholds are
//! unreachable in 32-bit.

pub mod baselines;
pub mod fd;
pub mod io;
pub mod landscape;
pub mod num;
pub mod pair;
pub mod pes;
pub mod potentials;
pub mod spm;
pub mod vector;

pub use num::{cast, Scalar};
pub use pair::{decompose_force, ForceSplit, PairError, SpringPair};
pub use pes::{IdentityPreconditioner, PesError, PotentialSurface, Preconditioner};
pub use spm::{CycleRecord, RunStatus, SaddleResult, SpmConfig, SpmError};
pub use vector::{StateVector, VectorError};

/// 64-bit state vector, the working instantiation.
pub type StateVector64 = StateVector<f64>;
/// 64-bit spring pair.
pub type SpringPair64 = SpringPair<f64>;
/// 64-bit walker configuration.
pub type SpmConfig64 = SpmConfig<f64>;
/// 64-bit walker result.
pub type SaddleResult64 = SaddleResult<f64>;
