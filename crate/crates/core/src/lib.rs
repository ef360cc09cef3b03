//! Exact recovery of two balanced communities in the symmetric latent space
//! model.
//!
//! Nodes carry hidden +-1 labels; each node's latent position is a Gaussian
//! centered at its label times a fixed mean vector, and edges appear
//! independently with probability given by a kernel of the two positions.
//! This crate provides:
//!
//! - instance generation with deterministic, stream-split seeding ([`model`]),
//! - closed-form and Monte-Carlo edge moments ([`moments`]),
//! - classification of parameter regimes into impossible / recoverable
//!   ([`regimes`]),
//! - an ADMM solver for the community-detection SDP relaxation ([`solver`]),
//! - the dual certificate that proves an instance is exactly recoverable
//!   ([`certificate`]),
//! - an exhaustive maximum-likelihood oracle for small n ([`mle`]),
//! - experiment orchestration: sweeps, large-n replication, and real-data
//!   scoring ([`harness`]).
//!
//! Everything is deterministic given a master seed. Numerical work uses
//! dense symmetric eigendecompositions (LAPACK via [`linalg`]).

// Linked for its registration side effect: lapack-sys resolves symbols from
// the system OpenBLAS at link time only if the crate is pulled in.
extern crate openblas_src;

pub mod certificate;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod mle;
pub mod model;
pub mod moments;
pub mod regimes;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
