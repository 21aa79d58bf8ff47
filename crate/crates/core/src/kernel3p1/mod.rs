//! First-order pair-creation kernels of the 3+1 continuum Dirac equation.
//!
//! The field is switched on from the far past and cut off at the out-surface
//! `t_final`. The first-order amplitude for creating an electron `(p, s)`
//! from the negative-energy state `(p′, s′)` is
//! `M = −ie[Â⁰⟨u₊,u₋⟩ − Σ_i Â^i⟨u₊,α^i u₋⟩]` evaluated at
//! `ω = E(p) + E(p′)` and `q = p − p′`. This is a perturbative proxy for the
//! full evolution; its UV behaviour separates scalar from vector potentials.

pub mod faddeeva;
mod kernel;
mod potential;
mod sampler;
pub mod spinors;

pub use kernel::{pair_kernel_element, Difference, PairKernel, Single};
pub use potential::{fourier_potential, spatial_transform, truncated_time_transform, Potential3p1, Pulse3};
pub use sampler::{
    classify, cutoff_probe, hs_norm_squared, probe, tangential_probe, CutoffProbeResult, SamplerSpec, Verdict,
    VerdictThresholds,
};
pub use spinors::Helicity;
