//! Desk-scale verification toolkit for a family of magnetic Schrödinger
//! operators on the plane whose automorphy couples two weights through an
//! equivariant pair of maps.
//!
//! The crate works symbolically on a closed class of functions — polynomials
//! in (z, z̄) times a Gaussian-type exponential — so that operator identities
//! (supersymmetric factorizations, ladder relations, intertwining, kernel
//! invariances) can be checked exactly, and numerically where a claim is
//! analytic in nature (projector idempotence, dimension counts, lattice
//! sums). An independent finite-difference oracle cross-validates the
//! symbolic operator on grids.

pub mod automorphy;
pub mod cplx;
pub mod error;
pub mod fd;
pub mod kernels;
pub mod lattice;
pub mod model;
pub mod sample;
pub mod spectral;
pub mod verify;
pub mod wick;

pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeSpec, PeriodizedForm};
pub use model::{EquivariantPair, GroupElement, ModelParams, ModelSpec, PairSpec};
pub use verify::SuiteResult;
pub use wick::WickFunction;

/// Cap the global rayon thread pool. `None` keeps the default (one thread
/// per logical CPU). Call before any parallel work; later calls are no-ops
/// because the pool is global, in which case an `Err` from rayon is ignored
/// deliberately.
pub fn configure_threads(n: Option<usize>) {
    if let Some(n) = n.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
