//! Two-mode bosonic SU(2) polarization algebra.
//!
//! Everything in this crate lives on the two-mode Fock space truncated at a
//! total photon number `n_max`. Because every transformation of interest
//! conserves the total photon number, operators and states are stored as
//! direct sums of dense blocks, one block per excitation manifold. The
//! manifold with `n` photons has dimension `n + 1` and is indexed by `n`
//! throughout (the vacuum is manifold 0).
//!
//! Modules:
//! - [`fock`]: basis bookkeeping and the block/direct-sum data model,
//! - [`su2`]: the Schwinger generators, photon number and Casimir blocks,
//! - [`transforms`]: lossless (photon-number-conserving) unitaries,
//! - [`states`]: density operators, including the unpolarized family and
//!   two-mode thermal states,
//! - [`analysis`]: unpolarization detectors, the commutant oracle, moment
//!   tensors and rotation eigenstates.

pub mod analysis;
mod error;
pub mod fock;
pub mod states;
pub mod su2;
pub mod tolerance;
pub mod transforms;

pub(crate) mod linalg;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;
