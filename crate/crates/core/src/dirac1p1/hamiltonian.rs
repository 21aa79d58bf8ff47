use ndarray::s;
use rustfft::FftPlanner;

use super::{LatticeConfig, Potential1p1};
use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};

/// Spectral momentum operator `p̂` as an `N×N` circulant matrix.
pub fn kinetic_matrix(cfg: &LatticeConfig) -> CMatrix {
    let n = cfg.n;
    let mut d: Vec<C64> = (0..n).map(|b| C64::new(cfg.symbol(b), 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut d);
    let inv_n = 1.0 / n as f64;
    CMatrix::from_shape_fn((n, n), |(k, l)| d[(k + n - l) % n] * inv_n)
}

/// `σ¹p̂ + σ³m`.
pub fn free_hamiltonian(cfg: &LatticeConfig) -> CMatrix {
    hamiltonian(cfg, &Potential1p1::zero(), cfg.t0).expect("free Hamiltonian is always valid")
}

/// `H(t) = σ¹(p̂ − eA₁(t,x̂)) + σ³m + eA₀(t,x̂)`, with the gauge-function
/// part of `A₁` realized as `e^{−ieΓ} p̂ e^{ieΓ}`.
pub fn hamiltonian(cfg: &LatticeConfig, pot: &Potential1p1, t: f64) -> Result<CMatrix> {
    let slack = 1e-12 * (cfg.t1 - cfg.t0).abs().max(1.0);
    if !(t >= cfg.t0 - slack && t <= cfg.t1 + slack) {
        return Err(Error::invalid("t", format!("{t} lies outside [{}, {}]", cfg.t0, cfg.t1)));
    }
    let n = cfg.n;
    let sample = pot.sample_split(cfg, t)?;
    let (a0, a1) = (&sample.a0, &sample.a1_site);
    let mut d = kinetic_matrix(cfg);
    if pot.has_gauge() {
        let g: Vec<C64> = sample.gamma.iter().map(|&v| C64::from_polar(1.0, -cfg.e * v)).collect();
        for k in 0..n {
            for l in 0..n {
                d[[k, l]] *= g[k] * g[l].conj();
            }
        }
    }
    let mut h = CMatrix::zeros((2 * n, 2 * n));
    let mut off = d;
    for k in 0..n {
        off[[k, k]] -= cfg.e * a1[k];
    }
    h.slice_mut(s![..n, n..]).assign(&off);
    h.slice_mut(s![n.., ..n]).assign(&off);
    for k in 0..n {
        h[[k, k]] = C64::new(cfg.m + cfg.e * a0[k], 0.0);
        h[[n + k, n + k]] = C64::new(-cfg.m + cfg.e * a0[k], 0.0);
    }
    Ok(h)
}
