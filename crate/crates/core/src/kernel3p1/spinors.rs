//! Free Dirac spinors in the Dirac representation, helicity basis.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub type Spinor = [C64; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Helicity {
    Up,
    Down,
}

impl Helicity {
    pub const BOTH: [Helicity; 2] = [Helicity::Up, Helicity::Down];
}

/// Two-spinor of helicity `s` along the direction of `p`.
pub fn helicity_state(p: [f64; 3], s: Helicity) -> [C64; 2] {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    let (ct, st2, phi) = if r == 0.0 {
        (1.0, 0.0, 0.0)
    } else {
        let ct = (p[2] / r).clamp(-1.0, 1.0);
        (ct, 1.0, p[1].atan2(p[0]))
    };
    let half = 0.5 * ct.acos();
    let (c, s_) = (half.cos(), half.sin() * st2);
    match s {
        Helicity::Up => [C64::new(c, 0.0), C64::from_polar(s_, phi)],
        Helicity::Down => [-C64::from_polar(s_, -phi), C64::new(c, 0.0)],
    }
}

fn sigma_dot(p: [f64; 3], chi: [C64; 2]) -> [C64; 2] {
    let pm = C64::new(p[0], -p[1]);
    let pp = C64::new(p[0], p[1]);
    [chi[0] * p[2] + pm * chi[1], pp * chi[0] - chi[1] * p[2]]
}

pub fn energy(p: [f64; 3], m: f64) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt()
}

/// Unit-norm positive-energy spinor `u₊^s(p)`.
pub fn positive(p: [f64; 3], m: f64, s: Helicity) -> Spinor {
    let e = energy(p, m);
    let n = ((e + m) / (2.0 * e)).sqrt();
    let chi = helicity_state(p, s);
    let lo = sigma_dot(p, chi);
    let k = n / (e + m);
    [chi[0] * n, chi[1] * n, lo[0] * k, lo[1] * k]
}

/// Unit-norm negative-energy spinor `u₋^s(p)`.
pub fn negative(p: [f64; 3], m: f64, s: Helicity) -> Spinor {
    let e = energy(p, m);
    let n = ((e + m) / (2.0 * e)).sqrt();
    let chi = helicity_state(p, s);
    let up = sigma_dot(p, chi);
    let k = -n / (e + m);
    [up[0] * k, up[1] * k, chi[0] * n, chi[1] * n]
}

pub fn inner(a: &Spinor, b: &Spinor) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `α^i v` for `i ∈ {1, 2, 3}` (index 0 returns `v`).
pub fn alpha(i: usize, v: &Spinor) -> Spinor {
    let lo = [v[2], v[3]];
    let up = [v[0], v[1]];
    let s = |w: [C64; 2]| -> [C64; 2] {
        match i {
            1 => [w[1], w[0]],
            2 => [C64::new(0.0, -1.0) * w[1], C64::new(0.0, 1.0) * w[0]],
            3 => [w[0], -w[1]],
            _ => w,
        }
    };
    if i == 0 {
        return *v;
    }
    let a = s(lo);
    let b = s(up);
    [a[0], a[1], b[0], b[1]]
}

/// `H(p)v = (α·p + βm)v`.
pub fn free_hamiltonian_apply(p: [f64; 3], m: f64, v: &Spinor) -> Spinor {
    let mut out = [v[0] * m, v[1] * m, -v[2] * m, -v[3] * m];
    for i in 1..=3 {
        let a = alpha(i, v);
        for c in 0..4 {
            out[c] += a[c] * p[i - 1];
        }
    }
    out
}
