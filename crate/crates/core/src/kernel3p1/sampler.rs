//! Monte-Carlo estimates of `∫_{|p|,|p′|≤Λ} Σ_{s,s′}|M|² d³p d³p′/(2π)⁶`.
//!
//! The domain is split into shells `max(|p|,|p′|) ∈ (Λ_{k−1}, Λ_k]`, so the
//! estimate at a larger cutoff reuses every smaller shell and is monotone.
//! Within a shell the larger momentum is drawn uniformly in volume and the
//! momentum transfer from a Gaussian of width `1/σ_x`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{Difference, PairKernel, Single};
use super::potential::Potential3p1;
use crate::fit::loglog_slope;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    /// Samples per shell and ordering case.
    pub samples: usize,
    pub seed: u64,
    /// Samples per independently seeded chunk.
    #[serde(default = "default_chunk")]
    pub chunk: usize,
}

fn default_chunk() -> usize {
    4096
}

impl SamplerSpec {
    pub fn new(samples: usize, seed: u64) -> Self {
        SamplerSpec { samples, seed, chunk: default_chunk() }
    }

    fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::invalid("kernel3p1.samples", "need at least two samples"));
        }
        if self.chunk == 0 {
            return Err(Error::invalid("kernel3p1.chunk", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictThresholds {
    pub divergent_slope: f64,
    pub convergent_growth: f64,
    pub max_rel_stderr: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        VerdictThresholds { divergent_slope: 0.5, convergent_growth: 0.05, max_rel_stderr: 0.05 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffProbeResult {
    pub cutoffs: Vec<f64>,
    pub hs2: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Log-log slope over the upper half of the cutoffs.
    pub slope: Option<f64>,
    /// `(hs2[K] − hs2[K−1]) / hs2[K−1]`.
    pub last_growth: Option<f64>,
    pub verdict: Verdict,
    /// Points whose relative standard error exceeds the budget.
    pub flagged: Vec<bool>,
    pub thresholds: VerdictThresholds,
    pub samples: usize,
    pub seed: u64,
}

impl CutoffProbeResult {
    pub fn all_resolved(&self) -> bool {
        !self.flagged.iter().any(|&f| f)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chunk_seed(seed: u64, shell: u64, case: u64, chunk: u64) -> u64 {
    splitmix(splitmix(splitmix(splitmix(seed) ^ shell) ^ case) ^ chunk)
}

fn uniform_in_shell<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> [f64; 3] {
    let u: f64 = rng.random();
    let r = (lo.powi(3) + u * (hi.powi(3) - lo.powi(3))).cbrt();
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi: f64 = 2.0 * PI * rng.random::<f64>();
    let s = (1.0 - z * z).max(0.0).sqrt();
    [r * s * phi.cos(), r * s * phi.sin(), r * z]
}

fn norm(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

/// Mean and variance of the mean for one shell, both ordering cases summed.
fn shell_estimate<K: PairKernel>(kernel: &K, lo: f64, hi: f64, shell: u64, spec: &SamplerSpec) -> (f64, f64) {
    let sigma_q = 1.0 / kernel.sigma_x_min().unwrap_or(1.0);
    let volume = 4.0 / 3.0 * PI * (hi.powi(3) - lo.powi(3));
    let norm_q = (2.0 * PI * sigma_q * sigma_q).powf(1.5);
    let measure = (2.0 * PI).powi(6);
    let chunks = spec.samples.div_ceil(spec.chunk);
    let mut mean = 0.0;
    let mut var = 0.0;
    for case in 0..2u64 {
        let parts: Vec<(f64, f64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(spec.seed, shell, case, c as u64));
                let count = spec.chunk.min(spec.samples - c * spec.chunk);
                let (mut s1, mut s2) = (0.0, 0.0);
                for _ in 0..count {
                    let outer = uniform_in_shell(&mut rng, lo, hi);
                    let q: [f64; 3] = std::array::from_fn(|_| sigma_q * rng.sample::<f64, _>(StandardNormal));
                    let q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
                    let (p, pp, inner_ok) = if case == 0 {
                        let pp = [outer[0] - q[0], outer[1] - q[1], outer[2] - q[2]];
                        (outer, pp, norm(pp) <= norm(outer))
                    } else {
                        let p = [outer[0] + q[0], outer[1] + q[1], outer[2] + q[2]];
                        (p, outer, norm(p) < norm(outer))
                    };
                    if !inner_ok {
                        continue;
                    }
                    let density = (-0.5 * q2 / (sigma_q * sigma_q)).exp() / (norm_q * volume);
                    let w = kernel.spin_summed(p, pp) / measure / density;
                    s1 += w;
                    s2 += w * w;
                }
                (s1, s2)
            })
            .collect();
        let (s1, s2) = parts.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let n = spec.samples as f64;
        let m = s1 / n;
        mean += m;
        var += ((s2 / n - m * m) * n / (n - 1.0)).max(0.0) / n;
    }
    (mean, var)
}

fn shell_series<K: PairKernel>(kernel: &K, edges: &[f64], spec: &SamplerSpec) -> (Vec<f64>, Vec<f64>) {
    let mut hs2 = Vec::with_capacity(edges.len());
    let mut err = Vec::with_capacity(edges.len());
    let (mut total, mut var) = (0.0, 0.0);
    let mut lo = 0.0;
    for (k, &hi) in edges.iter().enumerate() {
        let (m, v) = shell_estimate(kernel, lo, hi, k as u64, spec);
        total += m;
        var += v;
        hs2.push(total);
        err.push(var.sqrt());
        lo = hi;
    }
    (hs2, err)
}

/// `(estimate, stderr)` of the squared HS norm of the first-order kernel at cutoff `Λ`.
pub fn hs_norm_squared<K: PairKernel>(kernel: &K, lambda: f64, spec: &SamplerSpec) -> Result<(f64, f64)> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid("cutoff", "must be positive"));
    }
    spec.validate()?;
    if kernel.sigma_x_min().is_none() {
        return Ok((0.0, 0.0));
    }
    let mut edges = vec![lambda];
    while edges[0] / 2.0 >= 2.5 * kernel.mass() {
        edges.insert(0, edges[0] / 2.0);
    }
    let (hs2, err) = shell_series(kernel, &edges, spec);
    Ok((*hs2.last().unwrap(), *err.last().unwrap()))
}

fn validate_cutoffs(cutoffs: &[f64]) -> Result<()> {
    if cutoffs.len() < 4 {
        return Err(Error::invalid("kernel3p1.cutoffs", "need at least four cutoffs"));
    }
    if cutoffs.iter().any(|c| !(*c > 0.0) || !c.is_finite()) || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("kernel3p1.cutoffs", "must be positive and strictly ascending"));
    }
    if cutoffs[cutoffs.len() - 1] < 8.0 * cutoffs[0] {
        return Err(Error::invalid("kernel3p1.cutoffs", "must span at least a factor of 8"));
    }
    Ok(())
}

/// Verdict from a cutoff series.
pub fn classify(cutoffs: &[f64], hs2: &[f64], thr: &VerdictThresholds) -> (Option<f64>, Option<f64>, Verdict) {
    if hs2.iter().all(|&v| v == 0.0) {
        return (None, None, Verdict::Convergent);
    }
    let start = cutoffs.len() / 2;
    let slope = loglog_slope(&cutoffs[start..], &hs2[start..]).ok();
    let k = hs2.len() - 1;
    let growth = if hs2[k - 1] > 0.0 { Some((hs2[k] - hs2[k - 1]) / hs2[k - 1]) } else { None };
    let verdict = if slope.is_some_and(|s| s >= thr.divergent_slope) {
        Verdict::Divergent
    } else if growth.is_some_and(|g| g <= thr.convergent_growth) {
        Verdict::Convergent
    } else {
        Verdict::Inconclusive
    };
    (slope, growth, verdict)
}

pub fn probe<K: PairKernel>(
    kernel: &K,
    cutoffs: &[f64],
    spec: &SamplerSpec,
    thresholds: &VerdictThresholds,
) -> Result<CutoffProbeResult> {
    validate_cutoffs(cutoffs)?;
    spec.validate()?;
    let (hs2, stderr) = if kernel.sigma_x_min().is_none() {
        (vec![0.0; cutoffs.len()], vec![0.0; cutoffs.len()])
    } else {
        shell_series(kernel, cutoffs, spec)
    };
    let flagged = hs2.iter().zip(&stderr).map(|(h, s)| *h > 0.0 && s / h > thresholds.max_rel_stderr).collect();
    let (slope, last_growth, verdict) = classify(cutoffs, &hs2, thresholds);
    Ok(CutoffProbeResult {
        cutoffs: cutoffs.to_vec(),
        hs2,
        stderr,
        slope,
        last_growth,
        verdict,
        flagged,
        thresholds: *thresholds,
        samples: spec.samples,
        seed: spec.seed,
    })
}

/// Cutoff scaling of the kernel of one potential.
pub fn cutoff_probe(
    pot: &Potential3p1,
    cutoffs: &[f64],
    spec: &SamplerSpec,
    thresholds: &VerdictThresholds,
) -> Result<CutoffProbeResult> {
    pot.validate()?;
    probe(&Single(pot), cutoffs, spec, thresholds)
}

/// Cutoff scaling of the difference kernel `M(A) − M(A′)`.
pub fn tangential_probe(
    a: &Potential3p1,
    b: &Potential3p1,
    cutoffs: &[f64],
    spec: &SamplerSpec,
    thresholds: &VerdictThresholds,
) -> Result<CutoffProbeResult> {
    a.validate()?;
    b.validate()?;
    if a.m != b.m || a.e != b.e || a.t_final != b.t_final {
        return Err(Error::invalid("kernel3p1.components_alt", "both potentials must share m, e and t_final"));
    }
    probe(&Difference(a, b), cutoffs, spec, thresholds)
}
