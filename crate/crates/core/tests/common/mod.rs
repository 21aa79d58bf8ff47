#![allow(dead_code)]

use diracsea_core::linalg::{exp_anti_hermitian, CMatrix, C64};
use diracsea_core::polarization::Polarization;
use ndarray::s;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_shape_fn((rows, cols), |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// `e^{A − A†}` for a random `A`.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    let a = random_matrix(rng, d, d);
    let q = &a - &a.t().mapv(|z| z.conj());
    exp_anti_hermitian(&q).unwrap()
}

/// First `m` columns of a random unitary.
pub fn random_isometry(rng: &mut ChaCha8Rng, d: usize, m: usize) -> CMatrix {
    random_unitary(rng, d).slice(s![.., ..m]).to_owned()
}

/// Polarization whose sea is spanned by the first `m` columns of a random unitary.
pub fn random_polarization(rng: &mut ChaCha8Rng, d: usize, m: usize) -> Polarization {
    let w = random_unitary(rng, d);
    Polarization::from_bases(w.slice(s![.., ..m]).to_owned(), w.slice(s![.., m..]).to_owned())
}

pub fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}
