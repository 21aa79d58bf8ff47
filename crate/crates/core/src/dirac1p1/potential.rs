use serde::{Deserialize, Serialize};

use super::LatticeConfig;
use crate::{Error, Result};

/// Relative size a pulse may have at the box edge and at the window ends.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Space-time Gaussian `a·exp(−(t−t_c)²/2σ_t² − (x−x_c)²/2σ_x²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pulse {
    pub amplitude: f64,
    pub t_center: f64,
    pub x_center: f64,
    pub sigma_t: f64,
    pub sigma_x: f64,
}

impl Pulse {
    pub fn new(amplitude: f64, t_center: f64, x_center: f64, sigma_t: f64, sigma_x: f64) -> Self {
        Pulse { amplitude, t_center, x_center, sigma_t, sigma_x }
    }

    /// Unit-integral pulse at `(t, x)`.
    pub fn normalized_bump(t: f64, x: f64, sigma_t: f64, sigma_x: f64) -> Self {
        let amplitude = 1.0 / (2.0 * std::f64::consts::PI * sigma_t * sigma_x);
        Pulse::new(amplitude, t, x, sigma_t, sigma_x)
    }

    fn temporal(&self, t: f64) -> f64 {
        let u = (t - self.t_center) / self.sigma_t;
        (-0.5 * u * u).exp()
    }

    fn spatial(&self, x: f64) -> f64 {
        let u = (x - self.x_center) / self.sigma_x;
        (-0.5 * u * u).exp()
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        self.amplitude * self.temporal(t) * self.spatial(x)
    }

    pub fn dt(&self, t: f64, x: f64) -> f64 {
        -(t - self.t_center) / (self.sigma_t * self.sigma_t) * self.value(t, x)
    }

    pub fn dx(&self, t: f64, x: f64) -> f64 {
        -(x - self.x_center) / (self.sigma_x * self.sigma_x) * self.value(t, x)
    }

    /// Space-time integral `2π σ_t σ_x a`.
    pub fn integral(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.sigma_t * self.sigma_x * self.amplitude
    }

    fn check(&self, field: &str, cfg: &LatticeConfig, temporal_ends: (bool, bool)) -> Result<()> {
        let vals = [self.amplitude, self.t_center, self.x_center, self.sigma_t, self.sigma_x];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(field, "non-finite pulse parameter"));
        }
        if !(self.sigma_t > 0.0 && self.sigma_x > 0.0) {
            return Err(Error::invalid(field, "pulse widths must be positive"));
        }
        let half = 0.5 * cfg.l;
        if self.x_center.abs() >= half {
            return Err(Error::invalid(field, "pulse centre lies outside the box"));
        }
        let edge = self.spatial(-half).max(self.spatial(half));
        if edge >= SUPPORT_THRESHOLD {
            return Err(Error::invalid(
                field,
                format!("pulse is {edge:.3e} of its amplitude at the box edge; needs < {SUPPORT_THRESHOLD:e}"),
            ));
        }
        for (on, t, name) in [(temporal_ends.0, cfg.t0, "t0"), (temporal_ends.1, cfg.t1, "t1")] {
            if on && self.temporal(t) >= SUPPORT_THRESHOLD {
                return Err(Error::invalid(
                    field,
                    format!("pulse is {:.3e} of its amplitude at {name}; needs < {SUPPORT_THRESHOLD:e}", self.temporal(t)),
                ));
            }
        }
        Ok(())
    }
}

/// Grid samples at one time: effective `A₀`, site-coupled `A₁` and `Γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitSample {
    pub a0: Vec<f64>,
    pub a1_site: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// External potential `(A₀, A₁)` plus the gradient of a gauge function `Γ`.
///
/// The effective potential is `A₀ + ∂_tΓ` and `A₁ − ∂_xΓ`, matching the
/// spinor transformation `ψ → e^{−ieΓ}ψ`. On the lattice the spatial gradient
/// of `Γ` enters as the conjugation `e^{−ieΓ} p̂ e^{ieΓ}` rather than as a
/// site potential; the two agree below the momentum cutoff.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Potential1p1 {
    pub a0_pulses: Vec<Pulse>,
    pub a1_pulses: Vec<Pulse>,
    pub gamma_pulses: Vec<Pulse>,
}

impl Potential1p1 {
    /// Validates effective compact support. Gauge pulses only need to vanish
    /// at `t0`; their value at `t1` is the residual gauge transformation.
    pub fn new(cfg: &LatticeConfig, a0: Vec<Pulse>, a1: Vec<Pulse>, gamma: Vec<Pulse>) -> Result<Self> {
        let pot = Potential1p1 { a0_pulses: a0, a1_pulses: a1, gamma_pulses: gamma };
        pot.validate(cfg)?;
        Ok(pot)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn validate(&self, cfg: &LatticeConfig) -> Result<()> {
        for (i, p) in self.a0_pulses.iter().enumerate() {
            p.check(&format!("potential.a0_pulses[{i}]"), cfg, (true, true))?;
        }
        for (i, p) in self.a1_pulses.iter().enumerate() {
            p.check(&format!("potential.a1_pulses[{i}]"), cfg, (true, true))?;
        }
        for (i, p) in self.gamma_pulses.iter().enumerate() {
            p.check(&format!("potential.gamma_pulses[{i}]"), cfg, (true, false))?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.a0_pulses
            .iter()
            .chain(&self.a1_pulses)
            .chain(&self.gamma_pulses)
            .all(|p| p.amplitude == 0.0)
    }

    /// Every amplitude multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let sc = |v: &Vec<Pulse>| v.iter().map(|p| Pulse { amplitude: p.amplitude * s, ..*p }).collect();
        Potential1p1 {
            a0_pulses: sc(&self.a0_pulses),
            a1_pulses: sc(&self.a1_pulses),
            gamma_pulses: sc(&self.gamma_pulses),
        }
    }

    pub fn a0(&self, t: f64, x: f64) -> f64 {
        self.a0_pulses.iter().map(|p| p.value(t, x)).sum::<f64>()
            + self.gamma_pulses.iter().map(|p| p.dt(t, x)).sum::<f64>()
    }

    /// Effective `A₁`, including `−∂_xΓ`.
    pub fn a1(&self, t: f64, x: f64) -> f64 {
        self.a1_site(t, x) - self.gamma_pulses.iter().map(|p| p.dx(t, x)).sum::<f64>()
    }

    /// `A₁` from the vector pulses alone, the part coupled per site.
    pub fn a1_site(&self, t: f64, x: f64) -> f64 {
        self.a1_pulses.iter().map(|p| p.value(t, x)).sum::<f64>()
    }

    pub fn has_gauge(&self) -> bool {
        self.gamma_pulses.iter().any(|p| p.amplitude != 0.0)
    }

    pub fn gamma(&self, t: f64, x: f64) -> f64 {
        self.gamma_pulses.iter().map(|p| p.value(t, x)).sum()
    }

    /// Effective `(A₀, A₁)` on the grid at time `t`; rejects non-finite samples.
    pub fn sample(&self, cfg: &LatticeConfig, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let s = self.sample_split(cfg, t)?;
        let a1 = (0..cfg.n).map(|k| s.a1_site[k] - self.gamma_pulses.iter().map(|p| p.dx(t, cfg.x(k))).sum::<f64>()).collect();
        Ok((s.a0, a1))
    }

    /// Grid samples in the form the lattice dynamics consumes.
    pub fn sample_split(&self, cfg: &LatticeConfig, t: f64) -> Result<SplitSample> {
        let mut out = SplitSample { a0: Vec::with_capacity(cfg.n), a1_site: Vec::with_capacity(cfg.n), gamma: Vec::with_capacity(cfg.n) };
        for k in 0..cfg.n {
            let x = cfg.x(k);
            let (v0, v1, g) = (self.a0(t, x), self.a1_site(t, x), self.gamma(t, x));
            if !v0.is_finite() || !v1.is_finite() || !g.is_finite() {
                return Err(Error::invalid("potential", format!("non-finite sample at t={t}, x={x}")));
            }
            out.a0.push(v0);
            out.a1_site.push(v1);
            out.gamma.push(g);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> LatticeConfig {
        LatticeConfig::new(64, 40.0, 1.0, 0.05, 0.0, 8.0, 100).unwrap()
    }

    #[test]
    fn accepts_well_contained_pulse() {
        let p = Pulse::new(1.0, 4.0, 0.0, 0.5, 1.0);
        assert!(Potential1p1::new(&cfg(), vec![p], vec![], vec![]).is_ok());
    }

    #[test]
    fn rejects_pulse_touching_window_end() {
        let p = Pulse::new(1.0, 2.0, 0.0, 0.5, 1.0);
        let err = Potential1p1::new(&cfg(), vec![p], vec![], vec![]).unwrap_err();
        assert!(err.to_string().contains("t0"));
    }

    #[test]
    fn rejects_pulse_touching_box_edge() {
        let p = Pulse::new(1.0, 4.0, 15.0, 0.5, 1.0);
        assert!(Potential1p1::new(&cfg(), vec![], vec![p], vec![]).is_err());
    }

    #[test]
    fn gauge_pulse_may_persist_at_t1() {
        let g = Pulse::new(1.0, 8.0, 0.0, 1.0, 2.0);
        assert!(Potential1p1::new(&cfg(), vec![], vec![], vec![g]).is_ok());
    }

    #[test]
    fn gauge_gradient_matches_finite_difference() {
        let g = Pulse::new(0.7, 5.0, 0.3, 1.0, 2.0);
        let pot = Potential1p1 { gamma_pulses: vec![g], ..Default::default() };
        let (t, x, h) = (4.2, -0.6, 1e-5);
        let dt = (g.value(t + h, x) - g.value(t - h, x)) / (2.0 * h);
        let dx = (g.value(t, x + h) - g.value(t, x - h)) / (2.0 * h);
        assert!((pot.a0(t, x) - dt).abs() < 1e-9);
        assert!((pot.a1(t, x) + dx).abs() < 1e-9);
    }
}
