//! JSON run configuration, schema version 1.

use std::path::Path;

use diracsea_core::dirac1p1::{LatticeConfig, Potential1p1};
use diracsea_core::kernel3p1::{Potential3p1, Pulse3, SamplerSpec, VerdictThresholds};
use diracsea_core::observables::PhaseFunctional;
use diracsea_core::polarization::KernelSign;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Evolve,
    Shale,
    ClassProbe,
    CutoffProbe,
    TangentialProbe,
    Spectrum,
    Current,
    GaugeProbe,
    Sweep,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Evolve => "evolve",
            Experiment::Shale => "shale",
            Experiment::ClassProbe => "class-probe",
            Experiment::CutoffProbe => "cutoff-probe",
            Experiment::TangentialProbe => "tangential-probe",
            Experiment::Spectrum => "spectrum",
            Experiment::Current => "current",
            Experiment::GaugeProbe => "gauge-probe",
            Experiment::Sweep => "sweep",
        }
    }

    pub fn uses_kernel(self) -> bool {
        matches!(self, Experiment::CutoffProbe | Experiment::TangentialProbe)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    N,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "amplitude")]
    Amplitude,
    #[serde(rename = "Λ", alias = "Lambda", alias = "lambda")]
    Lambda,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "N" => Ok(Axis::N),
            "e" => Ok(Axis::E),
            "amplitude" => Ok(Axis::Amplitude),
            "Λ" | "Lambda" | "lambda" => Ok(Axis::Lambda),
            _ => Err(HarnessError::schema("axis", format!("unknown axis `{s}`; expected N, e, amplitude or Λ"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::N => "N",
            Axis::E => "e",
            Axis::Amplitude => "amplitude",
            Axis::Lambda => "Lambda",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub m: f64,
    pub e: f64,
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    pub nsteps: usize,
}

/// Widths applied to components that omit their own.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Widths {
    pub sigma_t: f64,
    pub sigma_x: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub mu: usize,
    pub amplitude: f64,
    #[serde(default)]
    pub t_center: f64,
    #[serde(default)]
    pub x_center: [f64; 3],
    pub sigma_t: Option<f64>,
    pub sigma_x: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    /// Defaults to the lattice mass, else 1.
    pub m: Option<f64>,
    /// Defaults to the lattice coupling, else 1.
    pub e: Option<f64>,
    #[serde(default)]
    pub t_final: f64,
    pub components: Vec<ComponentSpec>,
    /// Second potential of a tangential probe.
    #[serde(default)]
    pub components_alt: Option<Vec<ComponentSpec>>,
    #[serde(default)]
    pub widths: Option<Widths>,
    /// Momentum cutoffs in units of `m`.
    pub cutoffs: Vec<f64>,
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentPoint {
    pub t: f64,
    pub x: f64,
    #[serde(default)]
    pub mu: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservablesSection {
    #[serde(default = "default_max_pairs")]
    pub max_pairs: usize,
    #[serde(default)]
    pub phase_functional: PhaseFunctional,
    #[serde(default)]
    pub current_points: Vec<CurrentPoint>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

impl Default for ObservablesSection {
    fn default() -> Self {
        ObservablesSection {
            max_pairs: default_max_pairs(),
            phase_functional: PhaseFunctional::default(),
            current_points: Vec::new(),
            epsilon: default_epsilon(),
        }
    }
}

fn default_max_pairs() -> usize {
    1
}

fn default_epsilon() -> f64 {
    0.01
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationSection {
    #[serde(default)]
    pub kernel_sign: KernelSign,
    /// Class-probe times; the window midpoint when empty.
    #[serde(default)]
    pub probe_times: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub unitarity: f64,
    pub divergent_slope: f64,
    pub convergent_growth: f64,
    pub max_rel_stderr: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let v = VerdictThresholds::default();
        Tolerances {
            unitarity: 1e-10,
            divergent_slope: v.divergent_slope,
            convergent_growth: v.convergent_growth,
            max_rel_stderr: v.max_rel_stderr,
        }
    }
}

impl Tolerances {
    pub fn thresholds(&self) -> VerdictThresholds {
        VerdictThresholds {
            divergent_slope: self.divergent_slope,
            convergent_growth: self.convergent_growth,
            max_rel_stderr: self.max_rel_stderr,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub experiment: Experiment,
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    pub experiment: Experiment,
    #[serde(default)]
    pub lattice: Option<LatticeSection>,
    #[serde(default)]
    pub potential: Potential1p1,
    #[serde(default)]
    pub kernel3p1: Option<KernelSection>,
    #[serde(default)]
    pub observables: ObservablesSection,
    #[serde(default)]
    pub polarization: PolarizationSection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

impl Config {
    /// Parses and checks the schema version; `field` in errors is the JSON path.
    pub fn from_json(text: &str) -> Result<Config, HarnessError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Config = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            HarnessError::schema(if path == "." { "config".to_string() } else { path }, e.inner().to_string())
        })?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(HarnessError::schema("schema", format!("unsupported version {}, expected {SCHEMA_VERSION}", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Config, Vec<u8>), HarnessError> {
        let bytes = std::fs::read(path).map_err(|e| HarnessError::io(path, e))?;
        let text = std::str::from_utf8(&bytes).map_err(|e| HarnessError::schema("config", e.to_string()))?;
        Ok((Config::from_json(text)?, bytes))
    }

    pub fn lattice(&self) -> Result<LatticeConfig, HarnessError> {
        let l = self.lattice.as_ref().ok_or_else(|| HarnessError::schema("lattice", "section is required"))?;
        let cfg = LatticeConfig {
            n: l.n,
            l: l.l,
            m: l.m,
            e: l.e,
            t0: l.t0,
            t1: l.t1,
            nsteps: l.nsteps,
            tol_unitarity: self.tolerances.unitarity,
        };
        cfg.validate().map_err(|e| HarnessError::core_in("lattice", e))?;
        Ok(cfg)
    }

    /// Lattice and validated potential.
    pub fn model(&self) -> Result<(LatticeConfig, Potential1p1), HarnessError> {
        let cfg = self.lattice()?;
        self.potential.validate(&cfg).map_err(HarnessError::from)?;
        Ok((cfg, self.potential.clone()))
    }

    pub fn kernel_section(&self) -> Result<&KernelSection, HarnessError> {
        self.kernel3p1.as_ref().ok_or_else(|| HarnessError::schema("kernel3p1", "section is required"))
    }

    fn kernel_potential(&self, comps: &[ComponentSpec], field: &str) -> Result<Potential3p1, HarnessError> {
        let k = self.kernel_section()?;
        let m = k.m.or(self.lattice.as_ref().map(|l| l.m)).unwrap_or(1.0);
        let e = k.e.or(self.lattice.as_ref().map(|l| l.e)).unwrap_or(1.0);
        let mut pulses = Vec::with_capacity(comps.len());
        for (i, c) in comps.iter().enumerate() {
            let width = |own: Option<f64>, name: &str, pick: fn(&Widths) -> f64| {
                own.or(k.widths.as_ref().map(pick))
                    .ok_or_else(|| HarnessError::schema(format!("kernel3p1.{field}[{i}].{name}"), "missing and no kernel3p1.widths given"))
            };
            let st = width(c.sigma_t, "sigma_t", |w| w.sigma_t)?;
            let sx = width(c.sigma_x, "sigma_x", |w| w.sigma_x)?;
            pulses.push(Pulse3::new(c.mu, c.amplitude, c.t_center, c.x_center, st, sx));
        }
        let pot = Potential3p1::new(m, e, k.t_final, pulses).map_err(HarnessError::from)?;
        Ok(pot)
    }

    pub fn kernel_potentials(&self) -> Result<(Potential3p1, Option<Potential3p1>), HarnessError> {
        let k = self.kernel_section()?;
        let a = self.kernel_potential(&k.components, "components")?;
        let b = match &k.components_alt {
            Some(c) => Some(self.kernel_potential(c, "components_alt")?),
            None => None,
        };
        Ok((a, b))
    }

    /// Absolute cutoffs.
    pub fn cutoffs(&self) -> Result<Vec<f64>, HarnessError> {
        let (a, _) = self.kernel_potentials()?;
        Ok(self.kernel_section()?.cutoffs.iter().map(|c| c * a.m).collect())
    }

    pub fn sampler(&self) -> Result<SamplerSpec, HarnessError> {
        let k = self.kernel_section()?;
        Ok(SamplerSpec::new(k.samples, k.seed))
    }

    pub fn seed(&self) -> Option<u64> {
        self.kernel3p1.as_ref().map(|k| k.seed)
    }

    pub fn override_seed(&mut self, seed: u64) {
        if let Some(k) = self.kernel3p1.as_mut() {
            k.seed = seed;
        }
    }

    /// Copy with the sweep axis set to `value`.
    pub fn with_axis(&self, axis: Axis, value: f64) -> Result<Config, HarnessError> {
        let mut c = self.clone();
        match axis {
            Axis::N => {
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(HarnessError::schema("values", format!("N must be a positive integer, got {value}")));
                }
                let l = c.lattice.as_mut().ok_or_else(|| HarnessError::schema("lattice", "section is required for an N sweep"))?;
                l.n = value as usize;
            }
            Axis::E => {
                if let Some(l) = c.lattice.as_mut() {
                    l.e = value;
                }
                if let Some(k) = c.kernel3p1.as_mut() {
                    k.e = Some(value);
                }
            }
            Axis::Amplitude => {
                c.potential = c.potential.scaled(value);
                if let Some(k) = c.kernel3p1.as_mut() {
                    k.components.iter_mut().for_each(|p| p.amplitude *= value);
                    if let Some(alt) = k.components_alt.as_mut() {
                        alt.iter_mut().for_each(|p| p.amplitude *= value);
                    }
                }
            }
            Axis::Lambda => {}
        }
        Ok(c)
    }
}
