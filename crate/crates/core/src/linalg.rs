//! Dense complex linear algebra used throughout the crate.
//!
//! Thin wrappers over `ndarray` / `ndarray-linalg` so the physics modules speak
//! in terms of Hilbert-Schmidt norms, log-determinants and spectral splits
//! rather than LAPACK calls.

use ndarray::{Array1, Array2, ArrayBase, Data, Ix2, ShapeBuilder};
use ndarray_linalg::{Determinant, Eigh, Inverse, SVD, UPLO};
pub use num_complex::Complex64 as C64;

use crate::{Error, Result};

pub type CMatrix = Array2<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

/// Conjugate transpose.
pub fn dagger<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> f64 {
    hs_norm_sqr(a).sqrt()
}

pub fn hs_norm_sqr<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest entry modulus.
pub fn max_abs<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `‖A†A − I‖_max`.
pub fn unitarity_defect<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> f64 {
    let n = a.ncols();
    let g = dagger(a).dot(a) - identity(n);
    max_abs(&g)
}

/// `(A + A†)/2`.
pub fn hermitian_part<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> CMatrix {
    (a.to_owned() + dagger(a)).mapv(|z| z * 0.5)
}

pub fn trace<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> C64 {
    a.diag().iter().sum()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh<S: Data<Elem = C64>>(h: &ArrayBase<S, Ix2>) -> Result<(Array1<f64>, CMatrix)> {
    // LAPACK sees a row-major input as its transpose, i.e. its conjugate.
    let mut sym = Array2::zeros(h.raw_dim().f());
    sym.assign(&hermitian_part(h));
    let (vals, vecs) = sym.eigh(UPLO::Upper)?;
    Ok((vals, vecs.as_standard_layout().to_owned()))
}

/// Determinant stored as `phase · exp(ln_abs)`; `phase` is zero for a
/// singular matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogDet {
    pub phase: C64,
    pub ln_abs: f64,
}

impl LogDet {
    pub fn value(&self) -> C64 {
        if self.phase == ZERO {
            ZERO
        } else {
            self.phase * self.ln_abs.exp()
        }
    }

    pub fn abs(&self) -> f64 {
        if self.phase == ZERO {
            0.0
        } else {
            self.ln_abs.exp()
        }
    }

    pub fn is_singular(&self) -> bool {
        self.phase == ZERO || self.ln_abs == f64::NEG_INFINITY
    }
}

/// Log-determinant through a partially pivoted LU factorization; the modulus
/// is accumulated in log space so large seas neither under- nor overflow.
pub fn log_det<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> Result<LogDet> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            context: "determinant",
            expected: "square matrix".into(),
            found: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    if a.nrows() == 0 {
        return Ok(LogDet { phase: ONE, ln_abs: 0.0 });
    }
    let (phase, ln_abs) = a.to_owned().sln_det()?;
    if ln_abs == f64::NEG_INFINITY || !ln_abs.is_finite() && ln_abs < 0.0 {
        return Ok(LogDet { phase: ZERO, ln_abs: f64::NEG_INFINITY });
    }
    let norm = phase.norm();
    let phase = if norm > 0.0 { phase / norm } else { ZERO };
    Ok(LogDet { phase, ln_abs })
}

pub fn det<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> Result<C64> {
    Ok(log_det(a)?.value())
}

pub fn inverse<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> Result<CMatrix> {
    a.to_owned().inv().map_err(|_| Error::Singular("matrix inverse"))
}

/// Singular values in descending order.
pub fn singular_values<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> Result<Array1<f64>> {
    if a.is_empty() {
        return Ok(Array1::zeros(0));
    }
    let (_, s, _) = a.to_owned().svd(false, false)?;
    Ok(s)
}

/// Sum of singular values.
pub fn trace_norm<S: Data<Elem = C64>>(a: &ArrayBase<S, Ix2>) -> Result<f64> {
    Ok(singular_values(a)?.sum())
}

/// `exp(Q)` for anti-Hermitian `Q`, through the spectral decomposition of
/// the Hermitian matrix `−iQ`.
pub fn exp_anti_hermitian<S: Data<Elem = C64>>(q: &ArrayBase<S, Ix2>) -> Result<CMatrix> {
    let k = q.mapv(|z| -I * z);
    let (vals, vecs) = eigh(&k)?;
    let phases = vals.mapv(|v| C64::from_polar(1.0, v));
    let scaled = &vecs * &phases.view().insert_axis(ndarray::Axis(0));
    Ok(scaled.dot(&dagger(&vecs)))
}

/// Orthogonal projector `B B†` onto the column span of an isometry `B`.
pub fn projector_from_isometry<S: Data<Elem = C64>>(b: &ArrayBase<S, Ix2>) -> CMatrix {
    b.dot(&dagger(b))
}
