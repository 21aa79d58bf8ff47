//! Finite-rank Dirac seas and the lifted (second-quantized) evolution.
//!
//! A sea is an isometry-like map `Φ: C^M → C^{2N}`; its wedge state is
//! `Λ Φ = φ₁ ∧ … ∧ φ_M` and two such states pair as `det Ψ†Φ`. The lifted
//! evolution acts as `Λ Φ ↦ |det U₋₋| · Λ(UΦR)` with `R = U₋₋⁻¹`.

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::dirac1p1::UnitaryMap;
use crate::linalg::{dagger, hs_norm, identity, inverse, log_det, singular_values, trace_norm, CMatrix, LogDet, C64};
use crate::polarization::Polarization;
use crate::{Error, Result};

/// Largest admissible condition number of `U₋₋`.
pub const CONDITION_LIMIT: f64 = 1e6;

#[derive(Clone, Debug)]
pub struct SeaBasis {
    pub map: CMatrix,
    /// Trace norm of `Φ†Φ − I`.
    pub orthonormality_defect: f64,
}

impl SeaBasis {
    pub fn new(map: CMatrix) -> Result<Self> {
        if map.ncols() > map.nrows() {
            return Err(Error::DimensionMismatch {
                context: "sea basis",
                expected: format!("at most {} columns", map.nrows()),
                found: map.ncols().to_string(),
            });
        }
        let g = dagger(&map).dot(&map) - identity(map.ncols());
        let orthonormality_defect = trace_norm(&g)?;
        Ok(SeaBasis { map, orthonormality_defect })
    }

    pub fn rank(&self) -> usize {
        self.map.ncols()
    }

    /// Copy with column `j` replaced by `v`.
    pub fn replace_column(&self, j: usize, v: ndarray::ArrayView1<C64>) -> Result<SeaBasis> {
        let mut m = self.map.clone();
        m.column_mut(j).assign(&v);
        SeaBasis::new(m)
    }
}

fn same_shape(context: &'static str, a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context,
            expected: format!("{:?}", a.dim()),
            found: format!("{:?}", b.dim()),
        });
    }
    Ok(())
}

/// `⟨ΛΨ, ΛΦ⟩ = det Ψ†Φ`.
pub fn pairing(psi: &CMatrix, phi: &CMatrix) -> Result<C64> {
    same_shape("pairing", psi, phi)?;
    Ok(log_det(&dagger(psi).dot(phi))?.value())
}

/// `Φ ↦ UΦ`.
pub fn left_op(u: &CMatrix, phi: &CMatrix) -> Result<CMatrix> {
    if u.ncols() != phi.nrows() {
        return Err(Error::DimensionMismatch {
            context: "left_op",
            expected: format!("{} rows", u.ncols()),
            found: phi.nrows().to_string(),
        });
    }
    Ok(u.dot(phi))
}

/// `Φ ↦ ΦR` for invertible `R`.
pub fn right_op(phi: &CMatrix, r: &CMatrix) -> Result<CMatrix> {
    if r.nrows() != r.ncols() || r.nrows() != phi.ncols() {
        return Err(Error::DimensionMismatch {
            context: "right_op",
            expected: format!("{0}x{0}", phi.ncols()),
            found: format!("{}x{}", r.nrows(), r.ncols()),
        });
    }
    if log_det(r)?.is_singular() {
        return Err(Error::Singular("right operation"));
    }
    Ok(phi.dot(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conditioning {
    pub smallest_singular_value: f64,
    pub largest_singular_value: f64,
    pub condition: f64,
}

/// Second-quantized evolution between an in- and an out-polarization.
#[derive(Clone, Debug)]
pub struct LiftedEvolution {
    /// `UΦ`.
    pub u_sea: CMatrix,
    pub out: Polarization,
    /// `U₋₋ = Φ′†UΦ`.
    pub u_mm: CMatrix,
    /// `U₊₋ = Χ′†UΦ`.
    pub u_pm: CMatrix,
    /// `R = U₋₋⁻¹`.
    pub r: CMatrix,
    /// `det U₋₋`.
    pub det_mm: LogDet,
    /// `|det U₋₋|`.
    pub prefactor: f64,
    pub conditioning: Conditioning,
    /// `X = U₊₋ R`, the one-pair amplitudes divided by the prefactor.
    pub x: CMatrix,
}

/// Lifts a full one-particle map.
pub fn lift(u: &UnitaryMap, pin: &Polarization, pout: &Polarization) -> Result<LiftedEvolution> {
    let u_sea = left_op(&u.matrix, &pin.sea)?;
    lift_sea(u_sea, pout)
}

/// Lifts from the evolved sea `UΦ` alone.
pub fn lift_sea(u_sea: CMatrix, pout: &Polarization) -> Result<LiftedEvolution> {
    if u_sea.nrows() != pout.dim() || u_sea.ncols() != pout.rank() {
        return Err(Error::DimensionMismatch {
            context: "lift",
            expected: format!("{}x{}", pout.dim(), pout.rank()),
            found: format!("{}x{}", u_sea.nrows(), u_sea.ncols()),
        });
    }
    let u_mm = dagger(&pout.sea).dot(&u_sea);
    let u_pm = dagger(&pout.electrons).dot(&u_sea);
    let sv = singular_values(&u_mm)?;
    let smax = sv.first().copied().unwrap_or(1.0);
    let smin = sv.last().copied().unwrap_or(1.0);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= CONDITION_LIMIT) {
        return Err(Error::IllConditioned { smallest_singular_value: smin, condition, limit: CONDITION_LIMIT });
    }
    let det_mm = log_det(&u_mm)?;
    let r = inverse(&u_mm)?;
    let x = u_pm.dot(&r);
    Ok(LiftedEvolution {
        u_sea,
        out: pout.clone(),
        prefactor: det_mm.abs(),
        det_mm,
        r,
        conditioning: Conditioning { smallest_singular_value: smin, largest_singular_value: smax, condition },
        x,
        u_pm,
        u_mm,
    })
}

impl LiftedEvolution {
    pub fn rank(&self) -> usize {
        self.u_sea.ncols()
    }

    /// `e^{−i arg det U₋₋}`, which equals `prefactor · det R`.
    fn phase(&self) -> C64 {
        self.det_mm.phase.conj()
    }

    /// `prefactor · det(Ψ†UΦR)`.
    pub fn amplitude(&self, target: &CMatrix) -> Result<C64> {
        same_shape("amplitude", target, &self.u_sea)?;
        let d = log_det(&dagger(target).dot(&self.u_sea))?;
        if d.is_singular() {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok(d.phase * self.phase() * d.ln_abs.exp())
    }

    /// `prefactor · det(Ψ†UΦR′)` for an alternative right operation `R′`.
    pub fn amplitude_with(&self, r_alt: &CMatrix, target: &CMatrix) -> Result<C64> {
        same_shape("amplitude", target, &self.u_sea)?;
        let y = right_op(&self.u_sea, r_alt)?;
        Ok(log_det(&dagger(target).dot(&y))?.value() * self.prefactor)
    }

    /// Vacuum-to-vacuum amplitude, the prefactor by construction.
    pub fn vacuum_amplitude(&self) -> f64 {
        self.prefactor
    }

    /// Electron `i` created, sea mode `j` emptied.
    pub fn one_pair_amplitude(&self, i: usize, j: usize) -> C64 {
        self.x[[i, j]] * self.prefactor
    }

    /// Electrons `(i1, i2)` created, sea modes `(j1, j2)` emptied in that order.
    pub fn two_pair_amplitude(&self, (i1, i2): (usize, usize), (j1, j2): (usize, usize)) -> C64 {
        let x = &self.x;
        (x[[i1, j1]] * x[[i2, j2]] - x[[i1, j2]] * x[[i2, j1]]) * self.prefactor
    }

    /// Out-sea with column `j` replaced by electron mode `i`.
    pub fn one_pair_target(&self, i: usize, j: usize) -> CMatrix {
        let mut t = self.out.sea.clone();
        t.column_mut(j).assign(&self.out.electrons.column(i));
        t
    }

    /// `⟨Ũ_self Ω, Ũ_other Ω⟩` for two lifts sharing the in-sea and out-polarization.
    pub fn state_overlap(&self, other: &LiftedEvolution) -> Result<C64> {
        same_shape("state overlap", &self.u_sea, &other.u_sea)?;
        let d = log_det(&dagger(&self.u_sea).dot(&other.u_sea))?;
        Ok(d.value() * self.phase().conj() * other.phase())
    }

    /// `‖U₋₋†U₋₋ − (I − U₊₋†U₊₋)‖_HS`.
    pub fn block_identity_defect(&self) -> f64 {
        let m = self.rank();
        let lhs = dagger(&self.u_mm).dot(&self.u_mm);
        let rhs = identity(m) - dagger(&self.u_pm).dot(&self.u_pm);
        hs_norm(&(lhs - rhs))
    }

    /// `‖R U₋₋ − I‖_max`.
    pub fn inverse_defect(&self) -> f64 {
        crate::linalg::max_abs(&(self.r.dot(&self.u_mm) - identity(self.rank())))
    }
}
