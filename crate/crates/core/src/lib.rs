//! Numerical laboratory for Dirac-sea dynamics in prescribed external fields.
//!
//! The crate is organised along the physics:
//!
//! * [`dirac1p1`]: one-particle Dirac evolution on a periodic 1+1 lattice,
//!   spectral projectors, gauge phases and charge conjugation.
//! * [`polarization`]: projector algebra for polarization classes: Shale
//!   block diagnostics, the local-gauge projector `P^A`, the operator `Q^A`
//!   and class distances.
//! * [`wedge`]: finite-rank Dirac seas, the determinant pairing, left/right
//!   operations, the lifted (second-quantized) evolution and an
//!   exterior-algebra oracle.
//! * [`observables`]: pair numbers, vacuum persistence, pair spectra and
//!   the Bogolyubov current under an explicit phase convention.
//! * [`kernel3p1`]: first-order pair-creation kernels of the 3+1 continuum
//!   Dirac equation and their UV cutoff scaling.

extern crate blas_src;

pub mod dirac1p1;
pub mod error;
pub mod fit;
pub mod kernel3p1;
pub mod linalg;
pub mod observables;
pub mod polarization;
pub mod wedge;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
