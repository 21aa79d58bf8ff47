//! One-particle Dirac dynamics on a periodic 1+1 lattice.
//!
//! The Hamiltonian is `H(t) = σ¹(p̂ − eA₁) + σ³m + eA₀` acting on two-component
//! spinors sampled at `x_k = −L/2 + kΔx`. Vectors and matrices use the
//! component-major index `c·N + k` over an orthonormal site basis, so the
//! evolution matrices are unitary in the ordinary sense.
//!
//! The derivative symbol is `p_j = 2πj/L` except at the Nyquist mode
//! `j = −N/2`, where it is set to zero. That keeps `p̂` odd under complex
//! conjugation, which charge conjugation needs.

mod evolve;
mod gauge;
mod hamiltonian;
mod potential;
mod spectral;
mod spinor;

pub use evolve::{evolve, evolve_columns, evolve_steps, Propagator, UnitaryMap};
pub use gauge::{gauge_phase, gauge_phase_diagonal};
pub use hamiltonian::{free_hamiltonian, hamiltonian, kinetic_matrix};
pub use potential::{Potential1p1, Pulse, SUPPORT_THRESHOLD};
pub use spectral::{
    free_mode, free_polarization, mode_energy, spectral_polarization, spectral_projectors,
    DEGENERACY_THRESHOLD,
};
pub use spinor::{charge_conjugate_operator, charge_conjugation, SpinorField};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Error, Result};

/// Discretized 1+1 model and evolution window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// Grid points; a power of two, at least 4.
    pub n: usize,
    /// Box length.
    pub l: f64,
    pub m: f64,
    pub e: f64,
    pub t0: f64,
    pub t1: f64,
    pub nsteps: usize,
    pub tol_unitarity: f64,
}

impl LatticeConfig {
    pub fn new(n: usize, l: f64, m: f64, e: f64, t0: f64, t1: f64, nsteps: usize) -> Result<Self> {
        let cfg = LatticeConfig { n, l, m, e, t0, t1, nsteps, tol_unitarity: 1e-10 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 || !self.n.is_power_of_two() {
            return Err(Error::invalid("N", format!("must be a power of two >= 4, got {}", self.n)));
        }
        if !(self.l > 0.0) || !self.l.is_finite() {
            return Err(Error::invalid("L", format!("must be positive, got {}", self.l)));
        }
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::invalid("m", format!("must be positive, got {}", self.m)));
        }
        if !self.e.is_finite() {
            return Err(Error::invalid("e", "must be finite"));
        }
        if !self.t0.is_finite() || !self.t1.is_finite() || self.t1 < self.t0 {
            return Err(Error::invalid("t1", format!("window [{}, {}] is inverted or non-finite", self.t0, self.t1)));
        }
        if self.nsteps == 0 {
            return Err(Error::invalid("nsteps", "must be at least 1"));
        }
        if !(self.tol_unitarity > 0.0) {
            return Err(Error::invalid("tol_unitarity", "must be positive"));
        }
        Ok(())
    }

    /// One-particle dimension `2N`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn dx(&self) -> f64 {
        self.l / self.n as f64
    }

    /// Nominal time step `(t1 − t0)/nsteps`.
    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / self.nsteps as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        -0.5 * self.l + k as f64 * self.dx()
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.x(k)).collect()
    }

    /// Signed mode number of FFT bin `b`, in `−N/2..N/2`.
    pub fn mode_number(&self, b: usize) -> i64 {
        let n = self.n as i64;
        let b = b as i64;
        if b < n / 2 { b } else { b - n }
    }

    /// Physical momentum `2πj/L` of FFT bin `b`.
    pub fn momentum(&self, b: usize) -> f64 {
        2.0 * PI * self.mode_number(b) as f64 / self.l
    }

    /// Derivative symbol of FFT bin `b`; zero at the Nyquist bin.
    pub fn symbol(&self, b: usize) -> f64 {
        if b == self.n / 2 { 0.0 } else { self.momentum(b) }
    }

    /// Signed minimal periodic displacement `x_l − x_k`, in `(−L/2, L/2]`.
    pub fn displacement(&self, k: usize, l: usize) -> f64 {
        let n = self.n as i64;
        let mut d = (l as i64 - k as i64).rem_euclid(n);
        if d > n / 2 {
            d -= n;
        }
        d as f64 * self.dx()
    }
}
