//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use diracsea_core::dirac1p1::{evolve, evolve_columns, evolve_steps, free_polarization, LatticeConfig, Potential1p1, Pulse};
use diracsea_core::fit::loglog_slope;
use diracsea_core::kernel3p1::{cutoff_probe, tangential_probe, Potential3p1, Pulse3, SamplerSpec, Verdict, VerdictThresholds};
use diracsea_core::linalg::{det, hs_norm};
use diracsea_core::observables::{
    bogolyubov_current, gauge_covariance_probe, pair_number_sea, pair_spectrum, persistence_from_off_diagonal,
    vacuum_persistence, PhaseFunctional,
};
use diracsea_core::polarization::{blocks, class_probe, KernelSign};
use diracsea_core::wedge::oracle::{exterior_power, inner, minor, oracle_lift, wedge_vector};
use diracsea_core::wedge::{left_op, lift, lift_sea, pairing, right_op};
use diracsea_core::{CMatrix, C64};

type Outcome = Result<(bool, String), String>;

fn lattice(n: usize, e: f64, nsteps: usize) -> LatticeConfig {
    LatticeConfig::new(n, 40.0, 1.0, e, 0.0, 8.0, nsteps).expect("valid lattice")
}

fn weak_pulse(c: &LatticeConfig) -> Potential1p1 {
    Potential1p1::new(c, vec![Pulse::new(1.0, 4.0, 0.0, 0.5, 1.0)], vec![], vec![]).expect("valid pulse")
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn err(e: diracsea_core::Error) -> String {
    e.to_string()
}

fn free_field() -> Outcome {
    let c = lattice(256, 1.0, 200);
    let u = evolve(&c, &Potential1p1::zero(), c.t0, c.t1).map_err(err)?;
    let free = free_polarization(&c);
    let b = blocks(&u.matrix, (&free.minus, &free.plus), (&free.minus, &free.plus)).map_err(err)?;
    let l = lift(&u, &free, &free).map_err(err)?;
    let pn = pair_number_sea(&l.u_sea, &free);
    let p = vacuum_persistence(&l);
    let off = b.report.hs_plus_minus.max(b.report.hs_minus_plus);
    let ok = pn <= 1e-20 && (p - 1.0).abs() <= 1e-10 && off <= 1e-10;
    Ok((ok, format!("pair_number {pn:.3e}, persistence-1 {:.3e}, max off-diagonal HS {off:.3e}", p - 1.0)))
}

fn splitting_order() -> Outcome {
    let c = lattice(256, 0.05, 100);
    let pot = weak_pulse(&c);
    let base = 100;
    let reference = evolve_steps(&c, &pot, c.t0, c.t1, 8 * base).map_err(err)?.matrix;
    let mut dts = Vec::new();
    let mut errs = Vec::new();
    let mut us = Vec::new();
    for k in [1, 2, 4] {
        let u = evolve_steps(&c, &pot, c.t0, c.t1, k * base).map_err(err)?.matrix;
        dts.push(c.dt() / k as f64);
        errs.push(hs_norm(&(&u - &reference)));
        us.push(u);
    }
    let order = loglog_slope(&dts, &errs).map_err(err)?;
    // Supplementary: errors against the Richardson-improved reference.
    let improved = (&reference * C64::new(4.0, 0.0) - &us[2]) / C64::new(3.0, 0.0);
    let rich: Vec<f64> = us[..2].iter().map(|u| hs_norm(&(u - &improved))).collect();
    let rich_order = (rich[0] / rich[1]).log2();
    let ok = (order - 2.0).abs() <= 0.3;
    Ok((ok, format!("fitted order {order:.4} (errors {}); Richardson-reference order {rich_order:.4}", sci(&errs))))
}

fn leibniz(a: &CMatrix) -> C64 {
    let idx: Vec<usize> = (0..a.nrows()).collect();
    minor(a, &idx, &idx)
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(20);
    let mut worst = 0.0f64;
    for inst in 0..20 {
        let n = 2 + inst % 3;
        let d = 2 * n;
        let m = n.min(4);
        let u = random_unitary(&mut r, d);
        let pin = random_polarization(&mut r, d, m);
        let pout = random_polarization(&mut r, d, m);
        let psi = random_isometry(&mut r, d, m);
        let wphi = wedge_vector(&pin.sea).map_err(err)?;
        let wpsi = wedge_vector(&psi).map_err(err)?;
        worst = worst.max((pairing(&psi, &pin.sea).map_err(err)? - inner(&wpsi, &wphi)).norm());

        let lu = exterior_power(&u, m).map_err(err)?;
        let image: Vec<C64> = (0..lu.nrows()).map(|i| (0..lu.ncols()).map(|j| lu[[i, j]] * wphi[j]).sum()).collect();
        let left = wedge_vector(&left_op(&u, &pin.sea).map_err(err)?).map_err(err)?;
        worst = worst.max(left.iter().zip(&image).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));

        let rm = random_matrix(&mut r, m, m);
        let right = wedge_vector(&right_op(&pin.sea, &rm).map_err(err)?).map_err(err)?;
        let dr = leibniz(&rm);
        worst = worst.max(right.iter().zip(&wphi).map(|(a, b)| (a - b * dr).norm()).fold(0.0, f64::max));

        let l = lift_sea(left_op(&u, &pin.sea).map_err(err)?, &pout).map_err(err)?;
        let scale = l.prefactor * leibniz(&l.r);
        for target in [psi.clone(), pout.sea.clone(), l.one_pair_target(0, 0)] {
            let oracle = scale * oracle_lift(&u, &pin.sea, &target).map_err(err)?;
            worst = worst.max((l.amplitude(&target).map_err(err)? - oracle).norm());
        }
        worst = worst.max((det(&l.u_mm).map_err(err)?.norm() - l.prefactor).abs());
    }
    Ok((worst <= 1e-9, format!("20 instances, max abs deviation {worst:.3e}")))
}

fn block_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for n in [128, 256] {
        for (e, amp) in [(0.05, 1.0), (1.0, 1.0)] {
            let c = lattice(n, e, 400);
            let pot = Potential1p1::new(
                &c,
                vec![Pulse::new(amp, 4.0, 0.0, 0.5, 1.0)],
                vec![Pulse::new(0.5 * amp, 4.0, 1.0, 0.5, 2.0)],
                vec![],
            )
            .map_err(err)?;
            let free = free_polarization(&c);
            let sea = evolve_columns(&c, &pot, c.t0, c.t1, &free.sea).map_err(err)?;
            let l = lift_sea(sea, &free).map_err(err)?;
            worst = worst.max(l.block_identity_defect());
            runs += 1;
        }
    }
    Ok((worst <= 1e-9, format!("{runs} evolutions at N in {{128, 256}}, max defect {worst:.3e}")))
}

fn persistence_identity() -> Outcome {
    let c = lattice(256, 0.05, 400);
    let pot = weak_pulse(&c);
    let free = free_polarization(&c);
    let sea = evolve_columns(&c, &pot, c.t0, c.t1, &free.sea).map_err(err)?;
    let l = lift_sea(sea, &free).map_err(err)?;
    let p = vacuum_persistence(&l);
    let q = persistence_from_off_diagonal(&l).map_err(err)?;
    let rel = (p - q).abs() / p;
    Ok((rel <= 1e-8, format!("|det U--|^2 = {p:.12}, det(I - U+-^dag U+-) = {q:.12}, relative {rel:.3e}")))
}

fn weak_coupling() -> Outcome {
    let mut pn = Vec::new();
    let mut total = 0.0;
    for e in [0.025, 0.05] {
        let c = lattice(256, e, 400);
        let pot = weak_pulse(&c);
        let free = free_polarization(&c);
        let sea = evolve_columns(&c, &pot, c.t0, c.t1, &free.sea).map_err(err)?;
        let l = lift_sea(sea, &free).map_err(err)?;
        pn.push(pair_number_sea(&l.u_sea, &free));
        total = pair_spectrum(&l, 2).map_err(err)?.total();
    }
    let ratio = pn[1] / pn[0];
    let ok = (ratio - 4.0).abs() <= 0.2 && total >= 0.999;
    Ok((ok, format!("pair numbers {:.4e} / {:.4e}, ratio {ratio:.5}; sector sum at e=0.05 {total:.10}", pn[0], pn[1])))
}

fn gauge_covariance() -> Outcome {
    let c = lattice(256, 1.0, 800);
    let pot = Potential1p1::new(&c, vec![], vec![], vec![Pulse::new(1.0, 8.0, 0.0, 1.0, 2.0)]).map_err(err)?;
    let r = gauge_covariance_probe(&c, &pot).map_err(err)?;
    let ok = r.fixed >= 1e-2 && r.transformed <= 1e-8;
    Ok((ok, format!("fixed {:.4e}, transformed {:.3e}", r.fixed, r.transformed)))
}

const CUTOFFS: [f64; 4] = [5.0, 10.0, 20.0, 40.0];
const SAMPLES: usize = 200_000;
const SEED: u64 = 20_240_917;

fn pulse3(mu: usize, amplitude: f64) -> Pulse3 {
    Pulse3::new(mu, amplitude, 0.0, [0.0; 3], 0.5, 1.0)
}

fn pot3(components: Vec<Pulse3>) -> Result<Potential3p1, String> {
    Potential3p1::new(1.0, 1.0, 0.5, components).map_err(err)
}

fn describe(r: &diracsea_core::kernel3p1::CutoffProbeResult) -> String {
    let rel: Vec<f64> = r.hs2.iter().zip(&r.stderr).map(|(h, s)| s / h).collect();
    format!(
        "hs2 {}, max rel stderr {:.2}%, slope {:.3}, last growth {:.2}%, verdict {}",
        sci(&r.hs2),
        100.0 * rel.iter().cloned().fold(0.0, f64::max),
        r.slope.unwrap_or(f64::NAN),
        100.0 * r.last_growth.unwrap_or(f64::NAN),
        r.verdict
    )
}

fn cutoff_dichotomy() -> Outcome {
    let spec = SamplerSpec::new(SAMPLES, SEED);
    let thr = VerdictThresholds::default();
    let scalar = cutoff_probe(&pot3(vec![pulse3(0, 1.0)])?, &CUTOFFS, &spec, &thr).map_err(err)?;
    let vector = cutoff_probe(&pot3(vec![pulse3(3, 1.0)])?, &CUTOFFS, &spec, &thr).map_err(err)?;
    let ok = scalar.verdict == Verdict::Convergent
        && vector.verdict == Verdict::Divergent
        && scalar.all_resolved()
        && vector.all_resolved();
    Ok((ok, format!("A0: {}; A3: {}", describe(&scalar), describe(&vector))))
}

fn tangential_dichotomy() -> Outcome {
    let spec = SamplerSpec::new(SAMPLES, SEED);
    let thr = VerdictThresholds::default();
    let a = pot3(vec![pulse3(0, 1.0), pulse3(3, 1.0)])?;
    let same_spatial = pot3(vec![pulse3(0, 0.4), pulse3(3, 1.0)])?;
    let other_spatial = pot3(vec![pulse3(0, 1.0), pulse3(3, 0.4)])?;
    let matched = tangential_probe(&a, &same_spatial, &CUTOFFS, &spec, &thr).map_err(err)?;
    let differ = tangential_probe(&a, &other_spatial, &CUTOFFS, &spec, &thr).map_err(err)?;
    let ok = matched.verdict == Verdict::Convergent
        && differ.verdict == Verdict::Divergent
        && matched.all_resolved()
        && differ.all_resolved();
    Ok((ok, format!("matching spatial: {}; differing spatial: {}", describe(&matched), describe(&differ))))
}

fn pa_regularity() -> Outcome {
    let probe = |n: usize| -> Result<_, String> {
        let c = lattice(n, 1.0, n * 2);
        let pot = Potential1p1::new(
            &c,
            vec![Pulse::new(1.0, 4.0, 0.0, 0.5, 1.0)],
            vec![Pulse::new(1.0, 4.0, 0.0, 0.5, 2.0)],
            vec![],
        )
        .map_err(err)?;
        class_probe(&c, &pot, 4.0, KernelSign::Positive).map_err(err)
    };
    let a = probe(256)?;
    let b = probe(512)?;
    let change = |x: f64, y: f64| (y - x).abs() / x.abs();
    let (c1, c2, c3) = (
        change(a.delta1, b.delta1),
        change(a.delta2, b.delta2),
        change(a.distance_to_interpolation, b.distance_to_interpolation),
    );
    let ok = c1 <= 0.2 && c2 <= 0.2 && c3 <= 0.2;
    Ok((
        ok,
        format!(
            "delta1 {:.4e} -> {:.4e} ({:.1}%), delta2 {:.4e} -> {:.4e} ({:.1}%), class distance {:.4e} -> {:.4e} ({:.1}%)",
            a.delta1,
            b.delta1,
            100.0 * c1,
            a.delta2,
            b.delta2,
            100.0 * c2,
            a.distance_to_interpolation,
            b.distance_to_interpolation,
            100.0 * c3
        ),
    ))
}

fn current_phase() -> Outcome {
    let c = lattice(128, 1.0, 400);
    let point = (4.0, 0.5);
    let none = PhaseFunctional::Construction;
    let zero = bogolyubov_current(&c, &Potential1p1::zero(), point, 0, &none, 0.01).map_err(err)?;
    let linear = PhaseFunctional::Linear {
        coefficient: 0.3,
        j0_pulses: vec![Pulse::new(1.0, 4.0, 0.5, 1.0, 2.0)],
        j1_pulses: vec![],
    };
    let pot = weak_pulse(&c);
    let base = bogolyubov_current(&c, &pot, point, 0, &none, 0.01).map_err(err)?;
    let shifted = bogolyubov_current(&c, &pot, point, 0, &linear, 0.01).map_err(err)?;
    let bump = Pulse::normalized_bump(point.0, point.1, shifted.bump_sigma_t, shifted.bump_sigma_x);
    let expect = linear.analytic_shift(&bump, 0);
    let got = shifted.value - base.value;
    let rel = (got - expect).abs() / expect.abs();
    let ok = zero.value.abs() <= 1e-6 && rel <= 0.05 && base.resolved && shifted.resolved;
    Ok((ok, format!("J(A=0) {:.3e}; shift {got:.8} vs analytic {expect:.8} ({:.3}%)", zero.value, 100.0 * rel)))
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "free-field identities", budget: secs(5), run: free_field },
        Criterion { name: "splitting order", budget: secs(30), run: splitting_order },
        Criterion { name: "oracle equivalence", budget: secs(10), run: oracle_equivalence },
        Criterion { name: "block identity", budget: secs(20), run: block_identity },
        Criterion { name: "persistence identity", budget: None, run: persistence_identity },
        Criterion { name: "weak-coupling scaling", budget: None, run: weak_coupling },
        Criterion { name: "gauge covariance", budget: secs(60), run: gauge_covariance },
        Criterion { name: "cutoff dichotomy", budget: secs(600), run: cutoff_dichotomy },
        Criterion { name: "tangential dichotomy", budget: secs(600), run: tangential_dichotomy },
        Criterion { name: "local-gauge projector regularity", budget: None, run: pa_regularity },
        Criterion { name: "current phase dependence", budget: None, run: current_phase },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = c.budget.is_none_or(|b| elapsed <= b);
        let budget = c.budget.map_or(String::new(), |b| format!(" / {}s", b.as_secs()));
        let (ok, detail) = match result {
            Ok((ok, d)) => (ok && in_budget, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {}: {detail} [{:.2}s{budget}]",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
