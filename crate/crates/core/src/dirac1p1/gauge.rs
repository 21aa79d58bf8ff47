use ndarray::Array1;

use super::{LatticeConfig, Potential1p1, UnitaryMap};
use crate::linalg::{CMatrix, C64};

/// Diagonal of `e^{−ieΓ(t,x̂)}` in component-major order.
pub fn gauge_phase_diagonal(cfg: &LatticeConfig, pot: &Potential1p1, t: f64) -> Array1<C64> {
    let n = cfg.n;
    Array1::from_shape_fn(2 * n, |i| C64::from_polar(1.0, -cfg.e * pot.gamma(t, cfg.x(i % n))))
}

/// Multiplication operator `e^{−ieΓ(t,x̂)}` acting on both components.
pub fn gauge_phase(cfg: &LatticeConfig, pot: &Potential1p1, t: f64) -> UnitaryMap {
    let d = gauge_phase_diagonal(cfg, pot, t);
    let mut m = CMatrix::zeros((2 * cfg.n, 2 * cfg.n));
    m.diag_mut().assign(&d);
    let defect = d.iter().fold(0.0f64, |a, z| a.max((z.norm_sqr() - 1.0).abs()));
    UnitaryMap { matrix: m, t_from: t, t_to: t, unitarity_defect: defect }
}
