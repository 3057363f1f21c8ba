//! Spectral theory of two detuned qubits decaying into a common bath.
//!
//! The master equation for two two-level emitters with individual decay
//! rates `gamma1`, `gamma2`, a collective decay rate `gamma12` and a
//! coherent dipole-dipole coupling `s12` generates a Liouvillian that
//! decomposes into five invariant sectors. Every sector admits a closed
//! eigen-system built around a single complex coupling parameter `V`;
//! the real part of `V` sets the synchronization (and super/subradiance)
//! time scale and its imaginary part shifts the locked frequency.
//!
//! The crate provides:
//!
//! - [`params::SystemParams`]: validated model parameters,
//! - [`hilbert`]: states, observables and named initial conditions,
//! - [`hs`]: Hilbert-Schmidt vectorization of density matrices,
//! - [`liouvillian`]: the full 16x16 superoperator and its sector blocks,
//! - [`spectral`]: collective states, analytic eigen-systems and modal
//!   decompositions cross-checked against a numeric eigensolver,
//! - [`dynamics`]: modal time evolution and an independent RK4 integrator,
//! - [`analysis`]: Bloch-vector signals, Pearson synchronization measures,
//!   emitted radiation rate and the subradiance ratio.

pub mod analysis;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod hilbert;
pub mod hs;
pub mod liouvillian;
pub mod params;
pub mod spectral;

pub use error::CoreError;
pub use params::SystemParams;

/// Convenient result alias used across the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
