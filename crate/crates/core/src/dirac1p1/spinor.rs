use ndarray::{s, Array1};

use super::LatticeConfig;
use crate::linalg::{CMatrix, C64};

/// Two-component spinor sampled on the grid, component-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    pub values: Array1<C64>,
    pub dx: f64,
}

impl SpinorField {
    pub fn new(values: Array1<C64>, dx: f64) -> Self {
        assert!(values.len() % 2 == 0, "spinor field needs an even number of entries");
        SpinorField { values, dx }
    }

    pub fn zeros(cfg: &LatticeConfig) -> Self {
        SpinorField::new(Array1::zeros(cfg.dim()), cfg.dx())
    }

    /// Field whose orthonormal-basis coefficients are `c`, i.e. samples `c/√Δx`.
    pub fn from_coefficients(c: &Array1<C64>, dx: f64) -> Self {
        SpinorField::new(c.mapv(|z| z / dx.sqrt()), dx)
    }

    pub fn coefficients(&self) -> Array1<C64> {
        self.values.mapv(|z| z * self.dx.sqrt())
    }

    pub fn sites(&self) -> usize {
        self.values.len() / 2
    }

    /// `⟨self, other⟩ = Σ_k self(x_k)† other(x_k) Δx`.
    pub fn inner(&self, other: &SpinorField) -> C64 {
        self.values.iter().zip(other.values.iter()).map(|(a, b)| a.conj() * b).sum::<C64>() * self.dx
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }
}

/// `Cψ = σ¹ψ*`. Anti-unitary with `C² = +1`.
pub fn charge_conjugation(psi: &SpinorField) -> SpinorField {
    let n = psi.sites();
    let mut out = Array1::zeros(2 * n);
    out.slice_mut(s![..n]).assign(&psi.values.slice(s![n..]).mapv(|z| z.conj()));
    out.slice_mut(s![n..]).assign(&psi.values.slice(s![..n]).mapv(|z| z.conj()));
    SpinorField::new(out, psi.dx)
}

/// Matrix of the linear map `C·A·C⁻¹ = σ¹ Ā σ¹`.
pub fn charge_conjugate_operator(a: &CMatrix) -> CMatrix {
    let n = a.nrows() / 2;
    let mut out = CMatrix::zeros(a.raw_dim());
    for (ri, ro) in [(0, n), (n, 0)] {
        for (ci, co) in [(0, n), (n, 0)] {
            out.slice_mut(s![ro..ro + n, co..co + n])
                .assign(&a.slice(s![ri..ri + n, ci..ci + n]).mapv(|z| z.conj()));
        }
    }
    out
}
