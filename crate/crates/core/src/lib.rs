//! Recovery of an N-periodic source driving the linear system
//! `x(n+1) = A x(n) + w(n)` from space-time samples `<x(n), g_j>`.
//!
//! The crate certifies the per-frequency frame conditions on the spatial
//! sampling system, simulates driven trajectories, and reconstructs the
//! source through the per-residue limit operator followed by a spectral
//! correction with the resolvent family — with an independent least-squares
//! identification oracle and an ambiguity witness for failing systems.

pub mod dft;
pub mod error;
pub mod frame;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod recovery;
pub mod rng;
pub mod samples;
pub mod system;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, Subspace, Tolerances};
pub use samples::SampleMatrix;
pub use system::{SourceSignal, SystemInstance};
