//! Pair creation, vacuum persistence and the Bogolyubov current.
//!
//! Phase-dependent quantities use the lift's own phase (prefactor real and
//! non-negative) unless a [`PhaseFunctional`] is supplied.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dirac1p1::{evolve_columns, free_polarization, gauge_phase_diagonal, LatticeConfig, Potential1p1, Pulse};
use crate::linalg::{dagger, hs_norm_sqr, identity, log_det, singular_values, CMatrix, C64};
use crate::polarization::Polarization;
use crate::wedge::{lift_sea, LiftedEvolution};
use crate::{Error, Result};

/// Channels kept when enumerating two-pair states.
pub const TWO_PAIR_CHANNEL_CAP: usize = 64;

/// `‖P⁺_out U P⁻_in‖²_HS`, the summed one-particle transition probability.
pub fn pair_number(u: &CMatrix, pin_minus: &CMatrix, pout_plus: &CMatrix) -> f64 {
    hs_norm_sqr(&pout_plus.dot(u).dot(pin_minus))
}

/// Same quantity from the evolved sea `UΦ` and the out-electron basis.
pub fn pair_number_sea(u_sea: &CMatrix, pout: &Polarization) -> f64 {
    hs_norm_sqr(&dagger(&pout.electrons).dot(u_sea))
}

/// `Σ_{n,m} |⟨χ_n, U φ_m⟩|²` as an explicit double sum over basis vectors.
pub fn pair_number_double_sum(u: &CMatrix, pin: &Polarization, pout: &Polarization) -> f64 {
    let mut total = 0.0;
    for m in 0..pin.sea.ncols() {
        let uphi = u.dot(&pin.sea.column(m));
        for n in 0..pout.electrons.ncols() {
            let chi = pout.electrons.column(n);
            let z: C64 = chi.iter().zip(uphi.iter()).map(|(a, b)| a.conj() * b).sum();
            total += z.norm_sqr();
        }
    }
    total
}

/// `|⟨Ω_out, Ũ Ω_in⟩|² = |det U₋₋|²`.
pub fn vacuum_persistence(lifted: &LiftedEvolution) -> f64 {
    lifted.prefactor * lifted.prefactor
}

/// `det(I − U₊₋†U₊₋)`, which the block identity equates with `|det U₋₋|²`.
pub fn persistence_from_off_diagonal(lifted: &LiftedEvolution) -> Result<f64> {
    let m = lifted.rank();
    let g = identity(m) - dagger(&lifted.u_pm).dot(&lifted.u_pm);
    Ok(log_det(&g)?.value().re)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    /// Out-electron mode indices.
    pub electrons: Vec<usize>,
    /// Emptied out-sea mode indices.
    pub holes: Vec<usize>,
    pub amplitude_re: f64,
    pub amplitude_im: f64,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSpectrum {
    pub max_pairs: usize,
    pub persistence: f64,
    pub one_pair: Vec<PairEntry>,
    pub two_pair: Vec<PairEntry>,
    pub one_pair_total: f64,
    /// Sum over the enumerated two-pair states.
    pub two_pair_total: f64,
    /// Exact two-pair sector probability, `prefactor² · e₂(σ²(X))`.
    pub two_pair_exact: f64,
    pub channel_cap: usize,
    /// True when the two-pair enumeration left states out.
    pub truncated: bool,
}

impl PairSpectrum {
    pub fn total(&self) -> f64 {
        self.persistence + self.one_pair_total + if self.max_pairs >= 2 { self.two_pair_total } else { 0.0 }
    }
}

/// One-pair (and optionally two-pair) amplitudes of a lift.
pub fn pair_spectrum(lifted: &LiftedEvolution, max_pairs: usize) -> Result<PairSpectrum> {
    if !(1..=2).contains(&max_pairs) {
        return Err(Error::invalid("max_pairs", format!("must be 1 or 2, got {max_pairs}")));
    }
    let (ne, nh) = lifted.x.dim();
    let persistence = vacuum_persistence(lifted);
    let mut one_pair = Vec::with_capacity(ne * nh);
    let mut one_pair_total = 0.0;
    for i in 0..ne {
        for j in 0..nh {
            let a = lifted.one_pair_amplitude(i, j);
            let p = a.norm_sqr();
            one_pair_total += p;
            one_pair.push(PairEntry { electrons: vec![i], holes: vec![j], amplitude_re: a.re, amplitude_im: a.im, probability: p });
        }
    }

    let sv = singular_values(&lifted.x)?;
    let s2: Vec<f64> = sv.iter().map(|s| s * s).collect();
    let sum: f64 = s2.iter().sum();
    let sum_sq: f64 = s2.iter().map(|v| v * v).sum();
    let two_pair_exact = persistence * 0.5 * (sum * sum - sum_sq);

    let mut two_pair = Vec::new();
    let mut two_pair_total = 0.0;
    let mut truncated = false;
    if max_pairs == 2 {
        let mut order: Vec<usize> = (0..one_pair.len()).collect();
        order.sort_by(|&a, &b| {
            one_pair[b].probability.partial_cmp(&one_pair[a].probability).unwrap().then(a.cmp(&b))
        });
        truncated = order.len() > TWO_PAIR_CHANNEL_CAP;
        order.truncate(TWO_PAIR_CHANNEL_CAP);
        let chans: Vec<(usize, usize)> = order.iter().map(|&k| (one_pair[k].electrons[0], one_pair[k].holes[0])).collect();
        let mut seen = HashSet::new();
        for a in 0..chans.len() {
            for b in a + 1..chans.len() {
                let (i1, j1) = chans[a];
                let (i2, j2) = chans[b];
                if i1 == i2 || j1 == j2 {
                    continue;
                }
                let (ia, ib) = (i1.min(i2), i1.max(i2));
                let (ja, jb) = (j1.min(j2), j1.max(j2));
                if !seen.insert((ia, ib, ja, jb)) {
                    continue;
                }
                let amp = lifted.two_pair_amplitude((ia, ib), (ja, jb));
                let p = amp.norm_sqr();
                two_pair_total += p;
                two_pair.push(PairEntry {
                    electrons: vec![ia, ib],
                    holes: vec![ja, jb],
                    amplitude_re: amp.re,
                    amplitude_im: amp.im,
                    probability: p,
                });
            }
        }
    }
    Ok(PairSpectrum {
        max_pairs,
        persistence,
        one_pair,
        two_pair,
        one_pair_total,
        two_pair_total,
        two_pair_exact,
        channel_cap: TWO_PAIR_CHANNEL_CAP,
        truncated,
    })
}

/// Persistence plus the enumerated sector probabilities.
pub fn total_probability_check(lifted: &LiftedEvolution, max_pairs: usize) -> Result<f64> {
    Ok(pair_spectrum(lifted, max_pairs)?.total())
}

/// Phase convention `Ũ_θ = e^{−iθ(A)} Ũ` for the lifted evolution.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PhaseFunctional {
    /// The lift's own phase, `θ = 0`.
    #[default]
    Construction,
    /// `θ(A) = c·∫ A_μ j^μ d²x` with Gaussian external currents.
    Linear {
        coefficient: f64,
        #[serde(default)]
        j0_pulses: Vec<Pulse>,
        #[serde(default)]
        j1_pulses: Vec<Pulse>,
    },
}

impl PhaseFunctional {
    fn currents(&self, mu: usize) -> &[Pulse] {
        match self {
            PhaseFunctional::Construction => &[],
            PhaseFunctional::Linear { j0_pulses, j1_pulses, .. } => {
                if mu == 0 { j0_pulses } else { j1_pulses }
            }
        }
    }

    fn coefficient(&self) -> f64 {
        match self {
            PhaseFunctional::Construction => 0.0,
            PhaseFunctional::Linear { coefficient, .. } => *coefficient,
        }
    }

    /// `θ` on the evolution grid: step midpoints times sites.
    pub fn evaluate(&self, cfg: &LatticeConfig, pot: &Potential1p1) -> f64 {
        let c = self.coefficient();
        if c == 0.0 {
            return 0.0;
        }
        let dt = cfg.dt();
        let mut total = 0.0;
        for step in 0..cfg.nsteps {
            let t = cfg.t0 + (step as f64 + 0.5) * dt;
            for k in 0..cfg.n {
                let x = cfg.x(k);
                let j0: f64 = self.currents(0).iter().map(|p| p.value(t, x)).sum();
                let j1: f64 = self.currents(1).iter().map(|p| p.value(t, x)).sum();
                total += pot.a0(t, x) * j0 + pot.a1(t, x) * j1;
            }
        }
        c * total * dt * cfg.dx()
    }

    /// `c·∫ b j^μ d²x` in closed form for a Gaussian bump `b`.
    pub fn analytic_shift(&self, bump: &Pulse, mu: usize) -> f64 {
        self.coefficient() * self.currents(mu).iter().map(|j| gaussian_overlap(bump, j)).sum::<f64>()
    }

    /// `c·j^μ(t, x)`, the shift for a point-like bump.
    pub fn pointwise_shift(&self, t: f64, x: f64, mu: usize) -> f64 {
        self.coefficient() * self.currents(mu).iter().map(|j| j.value(t, x)).sum::<f64>()
    }
}

/// `∫∫ p(t,x) q(t,x) dt dx` for two Gaussian pulses.
pub fn gaussian_overlap(p: &Pulse, q: &Pulse) -> f64 {
    let one = |s1: f64, s2: f64, c1: f64, c2: f64| {
        let v = s1 * s1 + s2 * s2;
        (2.0 * std::f64::consts::PI * s1 * s1 * s2 * s2 / v).sqrt() * (-(c1 - c2).powi(2) / (2.0 * v)).exp()
    };
    p.amplitude
        * q.amplitude
        * one(p.sigma_t, q.sigma_t, p.t_center, q.t_center)
        * one(p.sigma_x, q.sigma_x, p.x_center, q.x_center)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentSample {
    pub t: f64,
    pub x: f64,
    pub mu: usize,
    pub value: f64,
    /// Finite-difference estimates at `ε` and `ε/2`.
    pub coarse: f64,
    pub fine: f64,
    pub epsilon: f64,
    pub bump_sigma_t: f64,
    pub bump_sigma_x: f64,
    /// `|value − fine|`.
    pub residual: f64,
    pub resolved: bool,
    /// Imaginary part of the fine estimate; it vanishes up to discretization error.
    pub imaginary_part: f64,
}

/// Bump widths used for the functional derivative.
pub fn bump_widths(cfg: &LatticeConfig) -> (f64, f64) {
    (2.0 * cfg.dt(), 2.0 * cfg.dx())
}

fn evolved_sea(cfg: &LatticeConfig, pot: &Potential1p1, free: &Polarization) -> Result<CMatrix> {
    evolve_columns(cfg, pot, cfg.t0, cfg.t1, &free.sea)
}

/// Vacuum expectation of `J^μ(t, x)` from the lifted evolution over the full
/// window, by central differences in `ε` with Richardson extrapolation.
///
/// `mu` selects the `a0_pulses` (0) or `a1_pulses` (1) list of the potential.
pub fn bogolyubov_current(
    cfg: &LatticeConfig,
    pot: &Potential1p1,
    (t, x): (f64, f64),
    mu: usize,
    phase: &PhaseFunctional,
    epsilon: f64,
) -> Result<CurrentSample> {
    if mu > 1 {
        return Err(Error::invalid("mu", format!("component must be 0 or 1, got {mu}")));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    let (st, sx) = bump_widths(cfg);
    let bump = Pulse::normalized_bump(t, x, st, sx);
    let free = free_polarization(cfg);
    let base_sea = evolved_sea(cfg, pot, &free)?;
    let base = lift_sea(base_sea, &free)?;
    let theta0 = phase.evaluate(cfg, pot);

    let perturbed = |eps: f64| -> Result<Potential1p1> {
        let mut p = pot.clone();
        let b = Pulse { amplitude: bump.amplitude * eps, ..bump };
        if mu == 0 { p.a0_pulses.push(b) } else { p.a1_pulses.push(b) }
        p.validate(cfg)?;
        Ok(p)
    };
    let overlaps: Vec<Result<C64>> = {
        use rayon::prelude::*;
        [epsilon, -epsilon, 0.5 * epsilon, -0.5 * epsilon]
            .par_iter()
            .map(|&eps| {
                let p = perturbed(eps)?;
                let lifted = lift_sea(evolved_sea(cfg, &p, &free)?, &free)?;
                let dtheta = phase.evaluate(cfg, &p) - theta0;
                Ok(base.state_overlap(&lifted)? * C64::from_polar(1.0, -dtheta))
            })
            .collect()
    };
    let a: Vec<C64> = overlaps.into_iter().collect::<Result<_>>()?;
    let i = C64::new(0.0, 1.0);
    let coarse = i * (a[0] - a[1]) / (2.0 * epsilon);
    let fine = i * (a[2] - a[3]) / epsilon;
    let value = (4.0 * fine - coarse) / 3.0;
    let residual = (value - fine).norm();
    let resolved = residual <= 0.05 * value.re.abs() + 1e-10;
    Ok(CurrentSample {
        t,
        x,
        mu,
        value: value.re,
        coarse: coarse.re,
        fine: fine.re,
        epsilon,
        bump_sigma_t: st,
        bump_sigma_x: sx,
        residual,
        resolved,
        imaginary_part: fine.im,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeReport {
    /// Pair number against the free out-polarization.
    pub fixed: f64,
    /// Pair number against `e^{−ieΓ(t1)} V_free`.
    pub transformed: f64,
    /// Pair number of the same run with the gauge pulses removed.
    pub reference: f64,
}

/// Pair numbers of a run with gauge pulses against fixed and transformed
/// out-polarizations.
pub fn gauge_covariance_probe(cfg: &LatticeConfig, pot: &Potential1p1) -> Result<GaugeReport> {
    let free = free_polarization(cfg);
    let sea = evolved_sea(cfg, pot, &free)?;
    let fixed = pair_number_sea(&sea, &free);
    let g = gauge_phase_diagonal(cfg, pot, cfg.t1);
    let transformed = pair_number_sea(&sea, &free.transformed_diagonal(&g));
    let bare = Potential1p1 { gamma_pulses: Vec::new(), ..pot.clone() };
    let reference = if bare.is_zero() { 0.0 } else { pair_number_sea(&evolved_sea(cfg, &bare, &free)?, &free) };
    Ok(GaugeReport { fixed, transformed, reference })
}
