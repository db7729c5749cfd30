//! PT-symmetric tight-binding chains with a balanced gain/loss impurity pair.
//!
//! * [`lattice`]: hopping profiles, bandwidth and the Hamiltonian.
//! * [`spectral`]: eigenvalues and their real/complex classification.
//! * [`phase`]: critical strengths, phase curves, scaling fits, staircases.
//! * [`dynamics`]: wavepacket evolution, static and under a gain ramp.
//! * [`sweep`]: the batch front end behind the `ptlattice` binary.

pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod phase;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
