use std::sync::Arc;

use ndarray::Axis;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{LatticeConfig, Potential1p1};
use crate::linalg::{identity, unitarity_defect, CMatrix, C64, ZERO};
use crate::{Error, Result};

/// Dense one-particle evolution between two equal-time surfaces.
#[derive(Clone, Debug)]
pub struct UnitaryMap {
    pub matrix: CMatrix,
    pub t_from: f64,
    pub t_to: f64,
    pub unitarity_defect: f64,
}

impl UnitaryMap {
    /// Fails when `‖U†U − I‖_max` exceeds `tol`.
    pub fn new(matrix: CMatrix, t_from: f64, t_to: f64, tol: f64) -> Result<Self> {
        let defect = unitarity_defect(&matrix);
        if !(defect <= tol) {
            return Err(Error::Unitarity { defect, tolerance: tol });
        }
        Ok(UnitaryMap { matrix, t_from, t_to, unitarity_defect: defect })
    }

    pub fn identity(dim: usize, t: f64) -> Self {
        UnitaryMap { matrix: identity(dim), t_from: t, t_to: t, unitarity_defect: 0.0 }
    }

    /// `self ∘ earlier`.
    pub fn compose(&self, earlier: &UnitaryMap) -> UnitaryMap {
        let matrix = self.matrix.dot(&earlier.matrix);
        let defect = unitarity_defect(&matrix);
        UnitaryMap { matrix, t_from: earlier.t_from, t_to: self.t_to, unitarity_defect: defect }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Per-site symmetric factor `[[a, b], [b, a]]`.
type SiteFactor = (C64, C64);

fn combine(x: SiteFactor, y: SiteFactor) -> SiteFactor {
    (x.0 * y.0 + x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

/// Strang split-step propagator over a fixed window.
///
/// Each step applies the potential half-step at the step midpoint, the exact
/// kinetic factor per momentum mode, and the potential half-step again.
/// Adjacent potential half-steps are merged.
pub struct Propagator {
    n: usize,
    steps: usize,
    /// Per FFT bin `[k00, k01, k11]` of the symmetric kinetic factor, with
    /// the inverse-FFT normalization folded in.
    kinetic: Vec<[C64; 3]>,
    /// `steps + 1` site-factor layers, empty when the potential vanishes.
    layers: Vec<Vec<SiteFactor>>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    pub t_from: f64,
    pub t_to: f64,
}

impl Propagator {
    pub fn new(cfg: &LatticeConfig, pot: &Potential1p1, ta: f64, tb: f64, steps: usize) -> Result<Self> {
        cfg.validate()?;
        check_window(cfg, ta, tb)?;
        if steps == 0 && tb > ta {
            return Err(Error::invalid("nsteps", "must be at least 1"));
        }
        let n = cfg.n;
        let dt = if steps == 0 { 0.0 } else { (tb - ta) / steps as f64 };
        let inv_n = 1.0 / n as f64;
        let kinetic = (0..n)
            .map(|b| {
                let p = cfg.symbol(b);
                let e = (p * p + cfg.m * cfg.m).sqrt();
                let (s, c) = (e * dt).sin_cos();
                let r = s / e;
                [
                    C64::new(c, -r * cfg.m) * inv_n,
                    C64::new(0.0, -r * p) * inv_n,
                    C64::new(c, r * cfg.m) * inv_n,
                ]
            })
            .collect();

        let mut layers = Vec::new();
        if !pot.is_zero() && cfg.e != 0.0 && steps > 0 {
            let gauge = pot.has_gauge();
            let mut half = Vec::with_capacity(steps);
            let mut phases = Vec::with_capacity(if gauge { steps } else { 0 });
            for j in 0..steps {
                let t = ta + (j as f64 + 0.5) * dt;
                let smp = pot.sample_split(cfg, t)?;
                half.push(
                    smp.a0
                        .iter()
                        .zip(&smp.a1_site)
                        .map(|(&v0, &v1)| {
                            let ph = C64::from_polar(1.0, -cfg.e * v0 * dt * 0.5);
                            let (s, c) = (cfg.e * v1 * dt * 0.5).sin_cos();
                            (ph * c, ph * C64::new(0.0, s))
                        })
                        .collect::<Vec<SiteFactor>>(),
                );
                if gauge {
                    phases.push(smp.gamma.iter().map(|&g| C64::from_polar(1.0, -cfg.e * g)).collect::<Vec<C64>>());
                }
            }
            // Layer j sits between kinetic steps j−1 and j. The kinetic step j
            // is conjugated as G_j K G_j† with G_j = e^{−ieΓ(t_j)}.
            for j in 0..=steps {
                let mut layer: Vec<SiteFactor> = match (j, j == steps) {
                    (0, _) => half[0].clone(),
                    (_, true) => half[steps - 1].clone(),
                    _ => half[j - 1].iter().zip(&half[j]).map(|(&x, &y)| combine(x, y)).collect(),
                };
                if gauge {
                    for (k, f) in layer.iter_mut().enumerate() {
                        let mut w = C64::new(1.0, 0.0);
                        if j < steps {
                            w *= phases[j][k].conj();
                        }
                        if j > 0 {
                            w *= phases[j - 1][k];
                        }
                        *f = (f.0 * w, f.1 * w);
                    }
                }
                layers.push(layer);
            }
        }

        let mut planner = FftPlanner::new();
        Ok(Propagator {
            n,
            steps,
            kinetic,
            layers,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
            t_from: ta,
            t_to: tb,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn apply_layer(layer: &[SiteFactor], u: &mut [C64], v: &mut [C64]) {
        for ((x, y), &(a, b)) in u.iter_mut().zip(v.iter_mut()).zip(layer) {
            let (p, q) = (*x, *y);
            *x = a * p + b * q;
            *y = b * p + a * q;
        }
    }

    /// Evolves one component-major column in place.
    pub fn apply_column(&self, col: &mut [C64], scratch: &mut Vec<C64>) {
        let n = self.n;
        assert_eq!(col.len(), 2 * n, "column length must be 2N");
        let need = self.fft.get_inplace_scratch_len().max(self.ifft.get_inplace_scratch_len());
        if scratch.len() < need {
            scratch.resize(need, ZERO);
        }
        let (u, v) = col.split_at_mut(n);
        let driven = !self.layers.is_empty();
        for j in 0..self.steps {
            if driven {
                Self::apply_layer(&self.layers[j], u, v);
            }
            self.fft.process_with_scratch(u, scratch);
            self.fft.process_with_scratch(v, scratch);
            for ((x, y), k) in u.iter_mut().zip(v.iter_mut()).zip(&self.kinetic) {
                let (p, q) = (*x, *y);
                *x = k[0] * p + k[1] * q;
                *y = k[1] * p + k[2] * q;
            }
            self.ifft.process_with_scratch(u, scratch);
            self.ifft.process_with_scratch(v, scratch);
        }
        if driven {
            Self::apply_layer(&self.layers[self.steps], u, v);
        }
    }

    /// `U·Φ`, columns evolved independently (bit-identical for any thread count).
    pub fn apply(&self, phi: &CMatrix) -> CMatrix {
        assert_eq!(phi.nrows(), 2 * self.n, "operand must have 2N rows");
        let mut cols: Vec<Vec<C64>> = phi.axis_iter(Axis(1)).map(|c| c.to_vec()).collect();
        cols.par_iter_mut().for_each_init(Vec::new, |scratch, c| self.apply_column(c, scratch));
        let mut out = CMatrix::zeros(phi.raw_dim());
        for (j, c) in cols.iter().enumerate() {
            out.column_mut(j).iter_mut().zip(c).for_each(|(o, &z)| *o = z);
        }
        out
    }
}

fn check_window(cfg: &LatticeConfig, ta: f64, tb: f64) -> Result<()> {
    let slack = 1e-12 * (cfg.t1 - cfg.t0).abs().max(1.0);
    if !ta.is_finite() || !tb.is_finite() || tb < ta {
        return Err(Error::invalid("t_b", format!("window [{ta}, {tb}] is inverted")));
    }
    if ta < cfg.t0 - slack || tb > cfg.t1 + slack {
        return Err(Error::invalid("t_a", format!("window [{ta}, {tb}] leaves [{}, {}]", cfg.t0, cfg.t1)));
    }
    Ok(())
}

/// Number of steps covering `[ta, tb]` at the configuration's nominal step.
fn default_steps(cfg: &LatticeConfig, ta: f64, tb: f64) -> usize {
    if tb <= ta {
        return 0;
    }
    let dt = cfg.dt();
    if dt <= 0.0 {
        return 1;
    }
    (((tb - ta) / dt) - 1e-9).ceil().max(1.0) as usize
}

/// `U(t_b, t_a)` at the configuration's time step.
pub fn evolve(cfg: &LatticeConfig, pot: &Potential1p1, ta: f64, tb: f64) -> Result<UnitaryMap> {
    evolve_steps(cfg, pot, ta, tb, default_steps(cfg, ta, tb))
}

/// `U(t_b, t_a)` with an explicit step count.
pub fn evolve_steps(cfg: &LatticeConfig, pot: &Potential1p1, ta: f64, tb: f64, steps: usize) -> Result<UnitaryMap> {
    if steps == 0 && tb > ta {
        return Err(Error::invalid("nsteps", "must be at least 1"));
    }
    let prop = Propagator::new(cfg, pot, ta, tb, steps)?;
    let u = prop.apply(&identity(cfg.dim()));
    UnitaryMap::new(u, ta, tb, cfg.tol_unitarity)
}

/// `U(t_b, t_a)·Φ` without forming `U`.
pub fn evolve_columns(cfg: &LatticeConfig, pot: &Potential1p1, ta: f64, tb: f64, phi: &CMatrix) -> Result<CMatrix> {
    if phi.nrows() != cfg.dim() {
        return Err(Error::DimensionMismatch {
            context: "evolve_columns",
            expected: format!("{} rows", cfg.dim()),
            found: phi.nrows().to_string(),
        });
    }
    let prop = Propagator::new(cfg, pot, ta, tb, default_steps(cfg, ta, tb))?;
    Ok(prop.apply(phi))
}
