//! Lattice evolution, lifted observables and the phase convention.


use diracsea_core::dirac1p1::{
    charge_conjugate_operator, evolve, evolve_columns, evolve_steps, free_mode, free_polarization, gauge_phase,
    mode_energy, LatticeConfig, Potential1p1, Propagator, Pulse,
};
use diracsea_core::linalg::{dagger, hs_norm, identity, max_abs, unitarity_defect, C64};
use diracsea_core::observables::{
    bogolyubov_current, gauge_covariance_probe, gaussian_overlap, pair_number, pair_number_double_sum,
    pair_number_sea, pair_spectrum, persistence_from_off_diagonal, vacuum_persistence, PhaseFunctional,
};
use diracsea_core::wedge::lift;

fn cfg(n: usize, e: f64, nsteps: usize) -> LatticeConfig {
    LatticeConfig::new(n, 40.0, 1.0, e, 0.0, 8.0, nsteps).unwrap()
}

fn pulse_pot(c: &LatticeConfig, amp: f64) -> Potential1p1 {
    Potential1p1::new(c, vec![Pulse::new(amp, 4.0, 0.0, 0.5, 1.0)], vec![], vec![]).unwrap()
}

#[test]
fn free_modes_pick_up_their_energy_phases() {
    let c = cfg(32, 0.0, 37);
    let u = evolve(&c, &Potential1p1::zero(), 0.0, 8.0).unwrap();
    for b in [0, 1, 5, 16, 31] {
        for positive in [true, false] {
            let v = free_mode(&c, b, positive);
            let sign = if positive { -1.0 } else { 1.0 };
            let phase = C64::from_polar(1.0, sign * mode_energy(&c, b) * 8.0);
            let got = u.matrix.dot(&v);
            let diff = got.iter().zip(v.iter()).map(|(g, x)| (g - x * phase).norm()).fold(0.0, f64::max);
            assert!(diff < 1e-12, "bin {b}, positive {positive}: {diff}");
        }
    }
}

#[test]
fn evolution_composes_and_stays_unitary() {
    let c = cfg(64, 0.5, 160);
    let pot = pulse_pot(&c, 1.0);
    let whole = evolve(&c, &pot, 0.0, 8.0).unwrap();
    let first = evolve(&c, &pot, 0.0, 3.0).unwrap();
    let second = evolve(&c, &pot, 3.0, 8.0).unwrap();
    let composed = second.compose(&first);
    assert!(max_abs(&(&composed.matrix - &whole.matrix)) < 1e-12);
    assert!(whole.unitarity_defect < 1e-12);
    assert!(unitarity_defect(&composed.matrix) < 1e-12);
    assert_eq!((composed.t_from, composed.t_to), (0.0, 8.0));
}

#[test]
fn evolve_columns_matches_the_dense_map() {
    let c = cfg(32, 0.5, 80);
    let pot = pulse_pot(&c, 1.0);
    let u = evolve(&c, &pot, 0.0, 8.0).unwrap();
    let sea = free_polarization(&c).sea;
    let cols = evolve_columns(&c, &pot, 0.0, 8.0, &sea).unwrap();
    assert!(max_abs(&(u.matrix.dot(&sea) - cols)) < 1e-13);
}

#[test]
fn results_do_not_depend_on_the_thread_count() {
    let c = cfg(64, 0.5, 100);
    let pot = pulse_pot(&c, 1.0);
    let prop = Propagator::new(&c, &pot, 0.0, 8.0, 100).unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| prop.apply(&identity(128)));
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| prop.apply(&identity(128)));
    assert_eq!(one, many);
}

#[test]
fn windows_outside_the_configuration_are_rejected() {
    let c = cfg(32, 0.5, 80);
    assert!(evolve(&c, &Potential1p1::zero(), 0.0, 9.0).unwrap_err().is_input_error());
    assert!(evolve(&c, &Potential1p1::zero(), 5.0, 4.0).unwrap_err().is_input_error());
    assert!(evolve_steps(&c, &Potential1p1::zero(), 0.0, 8.0, 0).is_err());
}

#[test]
fn charge_conjugation_reverses_the_field() {
    // C U(A) C⁻¹ = U(−A) for antiunitary C = σ¹K.
    let c = cfg(32, 0.7, 80);
    let pot = Potential1p1::new(
        &c,
        vec![Pulse::new(1.0, 4.0, 0.0, 0.5, 1.0)],
        vec![Pulse::new(0.5, 4.0, 1.0, 0.5, 1.5)],
        vec![],
    )
    .unwrap();
    let u = evolve(&c, &pot, 0.0, 8.0).unwrap().matrix;
    let um = evolve(&c, &pot.scaled(-1.0), 0.0, 8.0).unwrap().matrix;
    assert!(max_abs(&(charge_conjugate_operator(&u) - um)) < 1e-12);
}

#[test]
fn pair_number_forms_agree() {
    let c = cfg(32, 0.5, 80);
    let pot = pulse_pot(&c, 1.0);
    let u = evolve(&c, &pot, 0.0, 8.0).unwrap();
    let free = free_polarization(&c);
    let frob = pair_number(&u.matrix, &free.minus, &free.plus);
    let dbl = pair_number_double_sum(&u.matrix, &free, &free);
    let sea = pair_number_sea(&u.matrix.dot(&free.sea), &free);
    assert!(frob > 1e-4);
    assert!((frob - dbl).abs() < 1e-12 * frob.max(1.0));
    assert!((frob - sea).abs() < 1e-12 * frob.max(1.0));
}

#[test]
fn persistence_and_sector_sums_are_consistent() {
    let c = cfg(32, 0.3, 80);
    let pot = pulse_pot(&c, 1.0);
    let u = evolve(&c, &pot, 0.0, 8.0).unwrap();
    let free = free_polarization(&c);
    let l = lift(&u, &free, &free).unwrap();
    let p = vacuum_persistence(&l);
    assert!(((p - persistence_from_off_diagonal(&l).unwrap()) / p).abs() < 1e-8);
    assert!(l.block_identity_defect() < 1e-9);
    let spec = pair_spectrum(&l, 2).unwrap();
    assert!(spec.truncated);
    assert!(spec.two_pair_total <= spec.two_pair_exact * (1.0 + 1e-9));
    assert!(spec.total() <= 1.0 + 1e-9 && spec.total() > 0.999);
    // The one-pair sector equals persistence times ‖X‖²_HS.
    let x2: f64 = l.x.iter().map(|z| z.norm_sqr()).sum();
    assert!((spec.one_pair_total - p * x2).abs() < 1e-12);
    assert!(pair_spectrum(&l, 3).unwrap_err().is_input_error());
}

#[test]
fn gaussian_overlap_matches_quadrature() {
    let p = Pulse::new(1.3, 0.2, -0.4, 0.7, 1.1);
    let q = Pulse::new(-0.6, 0.9, 0.5, 0.4, 2.0);
    let h = 0.01;
    let mut sum = 0.0;
    for i in -1000..=1000 {
        for j in -1500..=1500 {
            let (t, x) = (i as f64 * h, j as f64 * h);
            sum += p.value(t, x) * q.value(t, x);
        }
    }
    let quad = sum * h * h;
    assert!((gaussian_overlap(&p, &q) - quad).abs() < 1e-10 * quad.abs().max(1.0));
}

#[test]
fn current_vanishes_without_field_and_shifts_with_a_linear_phase() {
    let c = cfg(64, 1.0, 200);
    let zero = bogolyubov_current(&c, &Potential1p1::zero(), (4.0, 0.5), 0, &PhaseFunctional::Construction, 0.01)
        .unwrap();
    assert!(zero.value.abs() < 1e-6, "J = {}", zero.value);
    let phase = PhaseFunctional::Linear {
        coefficient: 0.3,
        j0_pulses: vec![Pulse::new(1.0, 4.0, 0.5, 1.0, 2.0)],
        j1_pulses: vec![],
    };
    let shifted = bogolyubov_current(&c, &Potential1p1::zero(), (4.0, 0.5), 0, &phase, 0.01).unwrap();
    let bump = Pulse::normalized_bump(4.0, 0.5, shifted.bump_sigma_t, shifted.bump_sigma_x);
    let expect = phase.analytic_shift(&bump, 0);
    assert!(((shifted.value - zero.value) - expect).abs() < 0.05 * expect.abs());
}

#[test]
fn current_rejects_bad_arguments() {
    let c = cfg(32, 1.0, 80);
    let z = Potential1p1::zero();
    assert!(bogolyubov_current(&c, &z, (4.0, 0.0), 2, &PhaseFunctional::Construction, 0.01).is_err());
    assert!(bogolyubov_current(&c, &z, (4.0, 0.0), 0, &PhaseFunctional::Construction, 0.0).is_err());
}

#[test]
fn pure_gauge_runs_are_covariant() {
    let c = LatticeConfig::new(128, 40.0, 1.0, 1.0, 0.0, 8.0, 400).unwrap();
    let pot = Potential1p1::new(&c, vec![], vec![], vec![Pulse::new(1.0, 8.0, 0.0, 1.0, 2.0)]).unwrap();
    let rep = gauge_covariance_probe(&c, &pot).unwrap();
    assert!(rep.fixed > 1e-2, "{rep:?}");
    assert!(rep.transformed < 1e-8, "{rep:?}");
    assert_eq!(rep.reference, 0.0);
    let g = gauge_phase(&c, &pot, 8.0);
    assert!(g.unitarity_defect < 1e-14);
    let moved = free_polarization(&c).transformed(&g.matrix);
    assert!(hs_norm(&(dagger(&moved.sea).dot(&moved.sea) - identity(128))) < 1e-10);
}
