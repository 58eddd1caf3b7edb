//! Concrete potential energy surfaces: two analytic 2D test functions, the
//! N-particle Lennard-Jones cluster, and the spectral Lifshitz–Petrich
//! functional.

pub mod lj;
pub mod lp;
pub mod v1;
pub mod v2;

pub use lj::{pentagonal_bipyramid, LJCluster};
pub use lp::{LpPreconditioner, LpSurface};
pub use v1::V1Surface;
pub use v2::V2Surface;
