use ndarray::{s, Array1};

use super::LatticeConfig;
use crate::linalg::{eigh, CMatrix, C64};
use crate::polarization::Polarization;
use crate::{Error, Result};

/// Eigenvalues closer than this to zero make the energy split ambiguous.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// `E = √(p̃² + m²)` for FFT bin `b`.
pub fn mode_energy(cfg: &LatticeConfig, b: usize) -> f64 {
    let p = cfg.symbol(b);
    (p * p + cfg.m * cfg.m).sqrt()
}

/// Normalized free eigenmode of FFT bin `b` with energy sign `positive`.
///
/// Spinor `(E+m, p)` for `+E` and `(−p, E+m)` for `−E`, times `e^{ipx}/√N`.
pub fn free_mode(cfg: &LatticeConfig, b: usize, positive: bool) -> Array1<C64> {
    let n = cfg.n;
    let p = cfg.symbol(b);
    let e = mode_energy(cfg, b);
    let norm = (2.0 * e * (e + cfg.m)).sqrt();
    let (u, v) = if positive { ((e + cfg.m) / norm, p / norm) } else { (-p / norm, (e + cfg.m) / norm) };
    let k = cfg.momentum(b);
    let amp = 1.0 / (n as f64).sqrt();
    let mut out = Array1::zeros(2 * n);
    for site in 0..n {
        let w = C64::from_polar(amp, k * cfg.x(site));
        out[site] = w * u;
        out[n + site] = w * v;
    }
    out
}

/// Free polarization with columns ordered by FFT bin.
pub fn free_polarization(cfg: &LatticeConfig) -> Polarization {
    let n = cfg.n;
    let mut sea = CMatrix::zeros((2 * n, n));
    let mut electrons = CMatrix::zeros((2 * n, n));
    for b in 0..n {
        sea.column_mut(b).assign(&free_mode(cfg, b, false));
        electrons.column_mut(b).assign(&free_mode(cfg, b, true));
    }
    let momenta = (0..n).map(|b| cfg.momentum(b)).collect();
    Polarization::from_bases(sea, electrons).with_momenta(momenta)
}

/// Spectral split of a Hermitian matrix into negative and positive parts.
pub fn spectral_polarization(h: &CMatrix) -> Result<Polarization> {
    let (vals, vecs) = eigh(h)?;
    if let Some(&v) = vals.iter().find(|v| v.abs() < DEGENERACY_THRESHOLD) {
        return Err(Error::Degenerate { eigenvalue: v, threshold: DEGENERACY_THRESHOLD });
    }
    let neg = vals.iter().filter(|&&v| v < 0.0).count();
    let sea = vecs.slice(s![.., ..neg]).to_owned();
    let electrons = vecs.slice(s![.., neg..]).to_owned();
    Ok(Polarization::from_bases(sea, electrons))
}

/// `(P⁺, P⁻)` of a Hermitian matrix.
pub fn spectral_projectors(h: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let pol = spectral_polarization(h)?;
    Ok((pol.plus, pol.minus))
}
