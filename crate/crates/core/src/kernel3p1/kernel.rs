use num_complex::Complex64 as C64;

use super::potential::{fourier_potential, Potential3p1};
use super::spinors::{alpha, energy, inner, negative, positive, Helicity, Spinor};

const MINUS_I: C64 = C64::new(0.0, -1.0);

/// `M = −ie[Â⁰⟨u₊,u₋⟩ − Σ_i Â^i⟨u₊,α^i u₋⟩]` for a given transform `Â`.
fn contract(e: f64, a: &[C64; 4], up: &Spinor, um: &Spinor) -> C64 {
    let mut acc = a[0] * inner(up, um);
    for i in 1..=3 {
        if a[i] != C64::new(0.0, 0.0) {
            acc -= a[i] * inner(up, &alpha(i, um));
        }
    }
    MINUS_I * e * acc
}

/// First-order amplitude for creating an electron `(p, s)` and emptying the
/// negative-energy state `(p′, s′)`.
pub trait PairKernel: Sync {
    fn mass(&self) -> f64;
    fn coupling(&self) -> f64;

    /// `Â^μ(E(p) + E(p′), p − p′)` of the potential entering the kernel.
    fn transform(&self, omega: f64, q: [f64; 3]) -> [C64; 4];

    /// Momentum-transfer width used by the sampler.
    fn sigma_x_min(&self) -> Option<f64>;

    fn element(&self, p: [f64; 3], s: Helicity, pp: [f64; 3], sp: Helicity) -> C64 {
        let m = self.mass();
        let a = self.transform(energy(p, m) + energy(pp, m), sub(p, pp));
        contract(self.coupling(), &a, &positive(p, m, s), &negative(pp, m, sp))
    }

    /// `Σ_{s,s′} |M|²`.
    fn spin_summed(&self, p: [f64; 3], pp: [f64; 3]) -> f64 {
        let m = self.mass();
        let a = self.transform(energy(p, m) + energy(pp, m), sub(p, pp));
        if a.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            return 0.0;
        }
        let ups = Helicity::BOTH.map(|s| positive(p, m, s));
        let ums = Helicity::BOTH.map(|s| negative(pp, m, s));
        let mut total = 0.0;
        for up in &ups {
            for um in &ums {
                total += contract(self.coupling(), &a, up, um).norm_sqr();
            }
        }
        total
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Kernel of one potential.
pub struct Single<'a>(pub &'a Potential3p1);

impl PairKernel for Single<'_> {
    fn mass(&self) -> f64 {
        self.0.m
    }
    fn coupling(&self) -> f64 {
        self.0.e
    }
    fn transform(&self, omega: f64, q: [f64; 3]) -> [C64; 4] {
        fourier_potential(self.0, omega, q)
    }
    fn sigma_x_min(&self) -> Option<f64> {
        self.0.sigma_x_min()
    }
}

/// Difference kernel `M(A) − M(A′)`; both potentials share `m` and `e`.
pub struct Difference<'a>(pub &'a Potential3p1, pub &'a Potential3p1);

impl PairKernel for Difference<'_> {
    fn mass(&self) -> f64 {
        self.0.m
    }
    fn coupling(&self) -> f64 {
        self.0.e
    }
    fn transform(&self, omega: f64, q: [f64; 3]) -> [C64; 4] {
        let a = fourier_potential(self.0, omega, q);
        let b = fourier_potential(self.1, omega, q);
        [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
    }
    fn sigma_x_min(&self) -> Option<f64> {
        match (self.0.sigma_x_min(), self.1.sigma_x_min()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// `M(p, s; p′, s′)` for a single potential.
pub fn pair_kernel_element(pot: &Potential3p1, p: [f64; 3], s: Helicity, pp: [f64; 3], sp: Helicity) -> C64 {
    Single(pot).element(p, s, pp, sp)
}
