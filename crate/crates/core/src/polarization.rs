//! Projector algebra for polarization classes.
//!
//! At finite `N` every norm is finite, so class membership is read off from
//! how Hilbert-Schmidt norms behave under cutoff doubling.

use ndarray::{s, Axis};
use serde::{Deserialize, Serialize};

use crate::dirac1p1::{evolve_columns, free_polarization, LatticeConfig, Potential1p1};
#[cfg(test)]
use crate::dirac1p1::Pulse;
use crate::linalg::{dagger, exp_anti_hermitian, hermitian_part, projector_from_isometry, CMatrix, C64};
use crate::{Error, Result};

pub use crate::linalg::hs_norm;

/// Matrix with its idempotency and hermiticity defects (HS norms).
#[derive(Clone, Debug)]
pub struct Projector {
    pub matrix: CMatrix,
    pub idempotency_defect: f64,
    pub hermiticity_defect: f64,
}

impl Projector {
    pub fn new(matrix: CMatrix) -> Self {
        let idempotency_defect = hs_norm(&(matrix.dot(&matrix) - &matrix));
        let hermiticity_defect = hs_norm(&(&matrix - &dagger(&matrix)));
        Projector { matrix, idempotency_defect, hermiticity_defect }
    }

    pub fn is_exact(&self, tol: f64) -> bool {
        self.idempotency_defect <= tol && self.hermiticity_defect <= tol
    }

    /// `tr P`, the rank of an exact projector.
    pub fn trace(&self) -> f64 {
        self.matrix.diag().iter().map(|z| z.re).sum()
    }
}

/// Splitting of the one-particle space into a sea (`V`, range of `P⁻`) and
/// its complement, together with orthonormal bases of both.
#[derive(Clone, Debug)]
pub struct Polarization {
    pub minus: CMatrix,
    pub plus: CMatrix,
    /// Isometry `Φ` onto the sea.
    pub sea: CMatrix,
    /// Isometry `Χ` onto the complement.
    pub electrons: CMatrix,
    /// Momentum label per column of both bases, when the bases are plane waves.
    pub momenta: Option<Vec<f64>>,
}

impl Polarization {
    pub fn from_bases(sea: CMatrix, electrons: CMatrix) -> Self {
        let minus = projector_from_isometry(&sea);
        let plus = projector_from_isometry(&electrons);
        Polarization { minus, plus, sea, electrons, momenta: None }
    }

    pub fn with_momenta(mut self, momenta: Vec<f64>) -> Self {
        self.momenta = Some(momenta);
        self
    }

    /// Polarization of the range of an exact projector `P⁻`.
    pub fn from_minus_projector(p: &CMatrix) -> Result<Self> {
        let (vals, vecs) = crate::linalg::eigh(p)?;
        let split = vals.iter().filter(|&&v| v < 0.5).count();
        let electrons = vecs.slice(s![.., ..split]).to_owned();
        let sea = vecs.slice(s![.., split..]).to_owned();
        Ok(Polarization::from_bases(sea, electrons))
    }

    /// `V ↦ W·V` for a unitary `W`.
    pub fn transformed(&self, w: &CMatrix) -> Self {
        Polarization {
            sea: w.dot(&self.sea),
            electrons: w.dot(&self.electrons),
            minus: w.dot(&self.minus).dot(&dagger(w)),
            plus: w.dot(&self.plus).dot(&dagger(w)),
            momenta: self.momenta.clone(),
        }
    }

    /// Same as [`transformed`](Self::transformed) for a diagonal unitary.
    pub fn transformed_diagonal(&self, d: &ndarray::Array1<C64>) -> Self {
        let col = d.view().insert_axis(Axis(1));
        let row = d.mapv(|z| z.conj());
        let row = row.view().insert_axis(Axis(0));
        Polarization {
            sea: &self.sea * &col,
            electrons: &self.electrons * &col,
            minus: &self.minus * &col * &row,
            plus: &self.plus * &col * &row,
            momenta: self.momenta.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.minus.nrows()
    }

    pub fn rank(&self) -> usize {
        self.sea.ncols()
    }

    pub fn minus_projector(&self) -> Projector {
        Projector::new(self.minus.clone())
    }
}

/// Off-diagonal HS norms of `U` relative to an in and an out polarization.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShaleReport {
    /// `‖P⁺_out U P⁻_in‖_HS`.
    pub hs_plus_minus: f64,
    /// `‖P⁻_out U P⁺_in‖_HS`.
    pub hs_minus_plus: f64,
}

/// The four projected pieces `P^a_out U P^b_in`.
#[derive(Clone, Debug)]
pub struct Blocks {
    pub pp: CMatrix,
    pub pm: CMatrix,
    pub mp: CMatrix,
    pub mm: CMatrix,
    pub report: ShaleReport,
}

impl Blocks {
    pub fn reassemble(&self) -> CMatrix {
        &self.pp + &self.pm + &self.mp + &self.mm
    }
}

fn check_square(context: &'static str, a: &CMatrix, dim: usize) -> Result<()> {
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch {
            context,
            expected: format!("{dim}x{dim}"),
            found: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    Ok(())
}

/// Block decomposition of `U` with respect to `(P⁻_in, P⁺_in)` and `(P⁻_out, P⁺_out)`.
pub fn blocks(u: &CMatrix, pin: (&CMatrix, &CMatrix), pout: (&CMatrix, &CMatrix)) -> Result<Blocks> {
    let d = u.nrows();
    check_square("blocks: U", u, d)?;
    for p in [pin.0, pin.1, pout.0, pout.1] {
        check_square("blocks: projector", p, d)?;
    }
    let um = u.dot(pin.0);
    let up = u.dot(pin.1);
    let pp = pout.1.dot(&up);
    let pm = pout.1.dot(&um);
    let mp = pout.0.dot(&up);
    let mm = pout.0.dot(&um);
    let report = ShaleReport { hs_plus_minus: hs_norm(&pm), hs_minus_plus: hs_norm(&mp) };
    Ok(Blocks { pp, pm, mp, mm, report })
}

/// Shale report from orthonormal bases, without forming projectors.
pub fn shale_report(u_sea: &CMatrix, u_electrons: &CMatrix, out: &Polarization) -> ShaleReport {
    ShaleReport {
        hs_plus_minus: hs_norm(&dagger(&out.electrons).dot(u_sea)),
        hs_minus_plus: hs_norm(&dagger(&out.sea).dot(u_electrons)),
    }
}

/// Sign convention of the phase in the local-gauge kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSign {
    /// `e^{+ieλ}`; reproduces the Furry projector for constant `A₁`.
    #[default]
    Positive,
    /// `e^{−ieλ}`.
    Negative,
}

impl KernelSign {
    fn factor(self) -> f64 {
        match self {
            KernelSign::Positive => 1.0,
            KernelSign::Negative => -1.0,
        }
    }
}

/// Local-gauge projector `P^A(x_k, x_l) = e^{±ieλ(x_k,x_l)} P⁻(x_k, x_l)` with
/// `λ = −A₁(t, x_k)·d(x_k, x_l)` and `P⁻` the free sea projector.
pub fn local_gauge_projector(cfg: &LatticeConfig, pot: &Potential1p1, t: f64, sign: KernelSign) -> Result<Projector> {
    let free = free_polarization(cfg);
    local_gauge_from(cfg, pot, t, sign, &free.minus)
}

fn local_gauge_from(
    cfg: &LatticeConfig,
    pot: &Potential1p1,
    t: f64,
    sign: KernelSign,
    minus: &CMatrix,
) -> Result<Projector> {
    let (_, a1) = pot.sample(cfg, t)?;
    Ok(local_gauge_kernel(cfg, &a1, sign, minus))
}

/// `P^A` from grid samples of the effective `A₁`.
pub fn local_gauge_kernel(cfg: &LatticeConfig, a1: &[f64], sign: KernelSign, minus: &CMatrix) -> Projector {
    let n = cfg.n;
    let s = sign.factor() * cfg.e;
    let mut pa = minus.clone();
    for k in 0..n {
        if a1[k] == 0.0 {
            continue;
        }
        for l in 0..n {
            let lambda = -a1[k] * cfg.displacement(k, l);
            let ph = C64::from_polar(1.0, s * lambda);
            for (ck, cl) in [(0, 0), (0, n), (n, 0), (n, n)] {
                pa[[ck + k, cl + l]] *= ph;
            }
        }
    }
    Projector::new(pa)
}

/// Defects `δ₁ = ‖U P⁻ U† − P^A‖_HS` and `δ₂ = ‖(P^A)² − P^A‖_HS`, with `U`
/// evolved from the field-free surface `t0` to `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyPropDefects {
    pub delta1: f64,
    pub delta2: f64,
    pub hermiticity: f64,
}

pub fn key_prop_defects(cfg: &LatticeConfig, pot: &Potential1p1, t: f64, sign: KernelSign) -> Result<KeyPropDefects> {
    let free = free_polarization(cfg);
    let interp = interpolation_projector_from(cfg, pot, t, &free)?;
    let pa = local_gauge_from(cfg, pot, t, sign, &free.minus)?;
    Ok(KeyPropDefects {
        delta1: hs_norm(&(&interp - &pa.matrix)),
        delta2: pa.idempotency_defect,
        hermiticity: pa.hermiticity_defect,
    })
}

/// `U P⁻ U†` with `U` the evolution from `t0` to `t`.
pub fn interpolation_projector(cfg: &LatticeConfig, pot: &Potential1p1, t: f64) -> Result<CMatrix> {
    interpolation_projector_from(cfg, pot, t, &free_polarization(cfg))
}

fn interpolation_projector_from(cfg: &LatticeConfig, pot: &Potential1p1, t: f64, free: &Polarization) -> Result<CMatrix> {
    let us = evolve_columns(cfg, pot, cfg.t0, t, &free.sea)?;
    Ok(projector_from_isometry(&us))
}

/// `Q = P⁺(P^A_h − P⁻)P⁻ − P⁻(P^A_h − P⁻)P⁺` with `P^A_h` the Hermitian part of `P^A`.
pub fn build_q(plus: &CMatrix, minus: &CMatrix, pa: &CMatrix) -> CMatrix {
    let diff = hermitian_part(pa) - minus;
    plus.dot(&diff).dot(minus) - minus.dot(&diff).dot(plus)
}

/// `e^Q P⁻ e^{−Q}` for anti-Hermitian `Q`.
pub fn representative_projector(q: &CMatrix, minus: &CMatrix) -> Result<Projector> {
    let eq = exp_anti_hermitian(q)?;
    Ok(Projector::new(eq.dot(minus).dot(&dagger(&eq))))
}

/// `‖P_V − P_W‖_HS`.
pub fn class_distance(pv: &CMatrix, pw: &CMatrix) -> f64 {
    hs_norm(&(pv - pw))
}

/// Quantities of one class-probe point at a given lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassProbePoint {
    pub n: usize,
    pub delta1: f64,
    pub delta2: f64,
    pub hermiticity: f64,
    pub q_norm: f64,
    pub q_antihermiticity: f64,
    /// `‖rep − U P⁻ U†‖_HS`.
    pub distance_to_interpolation: f64,
    /// `‖rep − P⁻‖_HS`.
    pub distance_to_free: f64,
}

pub fn class_probe(cfg: &LatticeConfig, pot: &Potential1p1, t: f64, sign: KernelSign) -> Result<ClassProbePoint> {
    let free = free_polarization(cfg);
    let interp = interpolation_projector_from(cfg, pot, t, &free)?;
    let pa = local_gauge_from(cfg, pot, t, sign, &free.minus)?;
    let q = build_q(&free.plus, &free.minus, &pa.matrix);
    let rep = representative_projector(&q, &free.minus)?;
    Ok(ClassProbePoint {
        n: cfg.n,
        delta1: hs_norm(&(&interp - &pa.matrix)),
        delta2: pa.idempotency_defect,
        hermiticity: pa.hermiticity_defect,
        q_norm: hs_norm(&q),
        q_antihermiticity: hs_norm(&(&q + &dagger(&q))),
        distance_to_interpolation: class_distance(&rep.matrix, &interp),
        distance_to_free: class_distance(&rep.matrix, &free.minus),
    })
}

/// `‖P⁺_out U P⁻_in‖²_HS + ‖P⁻_out U P⁻_in‖²_HS`, equal to `rank P⁻_in` for unitary `U`.
pub fn column_sum_rule(u: &CMatrix, pin_minus: &CMatrix, pout: (&CMatrix, &CMatrix)) -> f64 {
    let um = u.dot(pin_minus);
    hs_norm(&pout.1.dot(&um)).powi(2) + hs_norm(&pout.0.dot(&um)).powi(2)
}
