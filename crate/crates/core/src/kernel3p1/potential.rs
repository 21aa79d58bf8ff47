use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::faddeeva::faddeeva;
use crate::{Error, Result};

/// Component `A^μ` (contravariant) shaped as
/// `a·exp(−(t−t_c)²/2σ_t² − |x⃗−x⃗_c|²/2σ_x²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pulse3 {
    pub mu: usize,
    pub amplitude: f64,
    pub t_center: f64,
    pub x_center: [f64; 3],
    pub sigma_t: f64,
    pub sigma_x: f64,
}

impl Pulse3 {
    pub fn new(mu: usize, amplitude: f64, t_center: f64, x_center: [f64; 3], sigma_t: f64, sigma_x: f64) -> Self {
        Pulse3 { mu, amplitude, t_center, x_center, sigma_t, sigma_x }
    }

    pub fn value(&self, t: f64, x: [f64; 3]) -> f64 {
        let ut = (t - self.t_center) / self.sigma_t;
        let r2: f64 = (0..3).map(|i| (x[i] - self.x_center[i]).powi(2)).sum();
        self.amplitude * (-0.5 * ut * ut - 0.5 * r2 / (self.sigma_x * self.sigma_x)).exp()
    }
}

/// Gaussian four-potential switched on from `t = −∞` and cut off sharply at
/// `t_final`, the time of the out-surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Potential3p1 {
    pub m: f64,
    pub e: f64,
    pub t_final: f64,
    pub components: Vec<Pulse3>,
}

impl Potential3p1 {
    pub fn new(m: f64, e: f64, t_final: f64, components: Vec<Pulse3>) -> Result<Self> {
        let pot = Potential3p1 { m, e, t_final, components };
        pot.validate()?;
        Ok(pot)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::invalid("kernel3p1.m", "must be positive"));
        }
        if !self.e.is_finite() || !self.t_final.is_finite() {
            return Err(Error::invalid("kernel3p1", "coupling and t_final must be finite"));
        }
        for (i, c) in self.components.iter().enumerate() {
            let field = format!("kernel3p1.components[{i}]");
            if c.mu > 3 {
                return Err(Error::invalid(field, format!("mu must be in 0..=3, got {}", c.mu)));
            }
            if !(c.sigma_t > 0.0 && c.sigma_x > 0.0) {
                return Err(Error::invalid(field, "widths must be positive"));
            }
            let finite = [c.amplitude, c.t_center, c.sigma_t, c.sigma_x].iter().chain(&c.x_center).all(|v| v.is_finite());
            if !finite {
                return Err(Error::invalid(field, "non-finite parameter"));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.amplitude == 0.0)
    }

    /// Smallest spatial width, which sets the momentum-transfer scale.
    pub fn sigma_x_min(&self) -> Option<f64> {
        self.components.iter().filter(|c| c.amplitude != 0.0).map(|c| c.sigma_x).reduce(f64::min)
    }

    /// `A^μ(t, x⃗)`, zero after `t_final`.
    pub fn value(&self, mu: usize, t: f64, x: [f64; 3]) -> f64 {
        if t > self.t_final {
            return 0.0;
        }
        self.components.iter().filter(|c| c.mu == mu).map(|c| c.value(t, x)).sum()
    }
}

/// `∫_{−∞}^{t_f} e^{iωt} e^{−(t−t_c)²/2σ²} dt`.
pub fn truncated_time_transform(omega: f64, t_center: f64, sigma: f64, t_final: f64) -> C64 {
    let s2 = sigma * 2f64.sqrt();
    let x = (t_final - t_center) / s2;
    let k = omega * sigma / 2f64.sqrt();
    let sqrt_pi = PI.sqrt();
    let front = C64::from_polar((-x * x).exp(), 2.0 * k * x);
    let j = if x >= 0.0 {
        C64::new(sqrt_pi * (-k * k).exp(), 0.0) - 0.5 * sqrt_pi * front * faddeeva(C64::new(k, x))
    } else {
        0.5 * sqrt_pi * front * faddeeva(C64::new(-k, -x))
    };
    C64::from_polar(s2, omega * t_center) * j
}

/// `∫ e^{−iq⃗·x⃗} e^{−|x⃗−x⃗_c|²/2σ²} d³x`.
pub fn spatial_transform(q: [f64; 3], center: [f64; 3], sigma: f64) -> C64 {
    let q2: f64 = q.iter().map(|v| v * v).sum();
    let qx: f64 = (0..3).map(|i| q[i] * center[i]).sum();
    C64::from_polar((2.0 * PI).powf(1.5) * sigma.powi(3) * (-0.5 * q2 * sigma * sigma).exp(), -qx)
}

/// `Â^μ(ω, q⃗) = ∫ e^{iωt − iq⃗·x⃗} A^μ(t, x⃗) d⁴x` for all four components.
pub fn fourier_potential(pot: &Potential3p1, omega: f64, q: [f64; 3]) -> [C64; 4] {
    let mut out = [C64::new(0.0, 0.0); 4];
    for c in &pot.components {
        if c.amplitude == 0.0 {
            continue;
        }
        out[c.mu] += c.amplitude
            * truncated_time_transform(omega, c.t_center, c.sigma_t, pot.t_final)
            * spatial_transform(q, c.x_center, c.sigma_x);
    }
    out
}
