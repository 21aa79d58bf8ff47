//! One function per experiment; each returns a table, a JSON summary and the
//! scalar a sweep aggregates.

use diracsea_core::dirac1p1::{evolve, free_polarization, LatticeConfig, Pulse};
use diracsea_core::fit::loglog_slope;
use diracsea_core::kernel3p1::{
    cutoff_probe, hs_norm_squared, tangential_probe, CutoffProbeResult, Difference, Single,
};
use diracsea_core::observables::{
    bogolyubov_current, bump_widths, gauge_covariance_probe, pair_number_sea, pair_spectrum,
    persistence_from_off_diagonal, vacuum_persistence, PairEntry,
};
use diracsea_core::linalg::hs_norm;
use diracsea_core::polarization::{blocks, class_probe};
use diracsea_core::wedge::lift;
use serde_json::{json, Value};

use crate::config::{Axis, Config, Experiment};
use crate::error::HarnessError;
use crate::output::{Cell, Table};

pub struct Outcome {
    pub table: Table,
    pub summary: Value,
    /// Name and value of the scalar a sweep collects.
    pub primary: (&'static str, f64),
    /// Guard that failed after the outputs were complete.
    pub guard: Option<HarnessError>,
}

pub fn run(cfg: &Config, experiment: Experiment) -> Result<Outcome, HarnessError> {
    match experiment {
        Experiment::Evolve => run_evolve(cfg),
        Experiment::Shale => run_shale(cfg),
        Experiment::ClassProbe => run_class_probe(cfg),
        Experiment::CutoffProbe | Experiment::TangentialProbe => run_kernel_probe(cfg, experiment),
        Experiment::Spectrum => run_spectrum(cfg),
        Experiment::Current => run_current(cfg),
        Experiment::GaugeProbe => run_gauge_probe(cfg),
        Experiment::Sweep => Err(HarnessError::schema("experiment", "a sweep cannot be nested")),
    }
}

fn lattice_json(c: &LatticeConfig) -> Value {
    json!({"N": c.n, "L": c.l, "m": c.m, "e": c.e, "t0": c.t0, "t1": c.t1, "nsteps": c.nsteps})
}

fn run_evolve(cfg: &Config) -> Result<Outcome, HarnessError> {
    let (c, pot) = cfg.model()?;
    let u = evolve(&c, &pot, c.t0, c.t1)?;
    let free = free_polarization(&c);
    let b = blocks(&u.matrix, (&free.minus, &free.plus), (&free.minus, &free.plus))?;
    let l = lift(&u, &free, &free)?;
    let pn = pair_number_sea(&l.u_sea, &free);
    let persistence = vacuum_persistence(&l);
    let off = persistence_from_off_diagonal(&l)?;
    let rel = (persistence - off).abs() / persistence.max(f64::MIN_POSITIVE);
    let mut t = Table::new(&[
        "N",
        "e",
        "nsteps",
        "unitarity_defect",
        "pair_number",
        "vacuum_persistence",
        "persistence_from_off_diagonal",
        "persistence_rel_defect",
        "hs_plus_minus",
        "hs_minus_plus",
        "block_identity_defect",
        "condition",
    ]);
    t.push(vec![
        c.n.into(),
        c.e.into(),
        c.nsteps.into(),
        u.unitarity_defect.into(),
        pn.into(),
        persistence.into(),
        off.into(),
        rel.into(),
        b.report.hs_plus_minus.into(),
        b.report.hs_minus_plus.into(),
        l.block_identity_defect().into(),
        l.conditioning.condition.into(),
    ]);
    let summary = json!({
        "lattice": lattice_json(&c),
        "pair_number": pn,
        "vacuum_persistence": persistence,
        "persistence_rel_defect": rel,
        "unitarity_defect": u.unitarity_defect,
        "block_identity_defect": l.block_identity_defect(),
        "shale": b.report,
        "conditioning": l.conditioning,
    });
    Ok(Outcome { table: t, summary, primary: ("pair_number", pn), guard: None })
}

fn run_shale(cfg: &Config) -> Result<Outcome, HarnessError> {
    let (c, pot) = cfg.model()?;
    let u = evolve(&c, &pot, c.t0, c.t1)?;
    let free = free_polarization(&c);
    let b = blocks(&u.matrix, (&free.minus, &free.plus), (&free.minus, &free.plus))?;
    let mut t = Table::new(&["N", "e", "hs_plus_plus", "hs_plus_minus", "hs_minus_plus", "hs_minus_minus", "unitarity_defect"]);
    t.push(vec![
        c.n.into(),
        c.e.into(),
        hs_norm(&b.pp).into(),
        b.report.hs_plus_minus.into(),
        b.report.hs_minus_plus.into(),
        hs_norm(&b.mm).into(),
        u.unitarity_defect.into(),
    ]);
    let summary = json!({"lattice": lattice_json(&c), "shale": b.report, "unitarity_defect": u.unitarity_defect});
    Ok(Outcome { table: t, summary, primary: ("hs_plus_minus", b.report.hs_plus_minus), guard: None })
}

fn run_class_probe(cfg: &Config) -> Result<Outcome, HarnessError> {
    let (c, pot) = cfg.model()?;
    let times = if cfg.polarization.probe_times.is_empty() {
        vec![0.5 * (c.t0 + c.t1)]
    } else {
        cfg.polarization.probe_times.clone()
    };
    let sign = cfg.polarization.kernel_sign;
    let mut t = Table::new(&[
        "t",
        "N",
        "delta1",
        "delta2",
        "hermiticity",
        "q_norm",
        "q_antihermiticity",
        "distance_to_interpolation",
        "distance_to_free",
    ]);
    let mut points = Vec::new();
    for (i, &time) in times.iter().enumerate() {
        if !(time >= c.t0 && time <= c.t1) {
            return Err(HarnessError::schema(
                format!("polarization.probe_times[{i}]"),
                format!("{time} lies outside [{}, {}]", c.t0, c.t1),
            ));
        }
        let p = class_probe(&c, &pot, time, sign)?;
        t.push(vec![
            time.into(),
            p.n.into(),
            p.delta1.into(),
            p.delta2.into(),
            p.hermiticity.into(),
            p.q_norm.into(),
            p.q_antihermiticity.into(),
            p.distance_to_interpolation.into(),
            p.distance_to_free.into(),
        ]);
        points.push(json!({"t": time, "point": p}));
    }
    let last = points.last().and_then(|p| p["point"]["distance_to_interpolation"].as_f64()).unwrap_or(f64::NAN);
    let summary = json!({"lattice": lattice_json(&c), "kernel_sign": sign, "points": points});
    Ok(Outcome { table: t, summary, primary: ("class_distance", last), guard: None })
}

fn probe_table(r: &CutoffProbeResult, m: f64) -> Table {
    let mut t = Table::new(&["cutoff", "cutoff_over_m", "hs2", "stderr", "rel_stderr", "flagged"]);
    for i in 0..r.cutoffs.len() {
        let rel = if r.hs2[i] > 0.0 { r.stderr[i] / r.hs2[i] } else { 0.0 };
        t.push(vec![
            r.cutoffs[i].into(),
            (r.cutoffs[i] / m).into(),
            r.hs2[i].into(),
            r.stderr[i].into(),
            rel.into(),
            r.flagged[i].into(),
        ]);
    }
    t
}

fn run_kernel_probe(cfg: &Config, experiment: Experiment) -> Result<Outcome, HarnessError> {
    let (a, alt) = cfg.kernel_potentials()?;
    let cutoffs = cfg.cutoffs()?;
    let spec = cfg.sampler()?;
    let thr = cfg.tolerances.thresholds();
    let r = if experiment == Experiment::TangentialProbe {
        let b = alt.ok_or_else(|| HarnessError::schema("kernel3p1.components_alt", "required by tangential-probe"))?;
        tangential_probe(&a, &b, &cutoffs, &spec, &thr)?
    } else {
        cutoff_probe(&a, &cutoffs, &spec, &thr)?
    };
    let t = probe_table(&r, a.m);
    let last = *r.hs2.last().unwrap_or(&f64::NAN);
    let summary = json!({
        "m": a.m,
        "e": a.e,
        "t_final": a.t_final,
        "cutoffs": r.cutoffs,
        "hs2": r.hs2,
        "stderr": r.stderr,
        "slope": r.slope,
        "last_growth": r.last_growth,
        "verdict": r.verdict,
        "all_resolved": r.all_resolved(),
        "thresholds": r.thresholds,
        "samples": r.samples,
        "seed": r.seed,
    });
    Ok(Outcome { table: t, summary, primary: ("hs2", last), guard: None })
}

fn modes(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";")
}

fn momenta(v: &[usize], p: &[f64]) -> String {
    v.iter().map(|&i| crate::output::fmt_f64(p[i])).collect::<Vec<_>>().join(";")
}

fn run_spectrum(cfg: &Config) -> Result<Outcome, HarnessError> {
    let (c, pot) = cfg.model()?;
    let u = evolve(&c, &pot, c.t0, c.t1)?;
    let free = free_polarization(&c);
    let l = lift(&u, &free, &free)?;
    let s = pair_spectrum(&l, cfg.observables.max_pairs)?;
    let p = free.momenta.clone().unwrap_or_default();
    let mut t = Table::new(&[
        "sector",
        "electron_modes",
        "hole_modes",
        "electron_momenta",
        "hole_momenta",
        "amplitude_re",
        "amplitude_im",
        "probability",
    ]);
    let mut push = |sector: usize, e: &PairEntry| {
        t.push(vec![
            sector.into(),
            modes(&e.electrons).into(),
            modes(&e.holes).into(),
            momenta(&e.electrons, &p).into(),
            momenta(&e.holes, &p).into(),
            e.amplitude_re.into(),
            e.amplitude_im.into(),
            e.probability.into(),
        ]);
    };
    s.one_pair.iter().for_each(|e| push(1, e));
    s.two_pair.iter().for_each(|e| push(2, e));
    let summary = json!({
        "lattice": lattice_json(&c),
        "max_pairs": s.max_pairs,
        "persistence": s.persistence,
        "one_pair_total": s.one_pair_total,
        "two_pair_total": s.two_pair_total,
        "two_pair_exact": s.two_pair_exact,
        "total_probability": s.total(),
        "channel_cap": s.channel_cap,
        "truncated": s.truncated,
    });
    Ok(Outcome { table: t, summary, primary: ("one_pair_total", s.one_pair_total), guard: None })
}

fn run_current(cfg: &Config) -> Result<Outcome, HarnessError> {
    let (c, pot) = cfg.model()?;
    let obs = &cfg.observables;
    if obs.current_points.is_empty() {
        return Err(HarnessError::schema("observables.current_points", "at least one point is required"));
    }
    let (st, sx) = bump_widths(&c);
    let mut t = Table::new(&[
        "t",
        "x",
        "mu",
        "value",
        "coarse",
        "fine",
        "epsilon",
        "residual",
        "resolved",
        "imaginary_part",
        "phase_shift_analytic",
        "phase_shift_pointwise",
    ]);
    let mut samples = Vec::new();
    let mut unresolved = Vec::new();
    for (i, pt) in obs.current_points.iter().enumerate() {
        let field = format!("observables.current_points[{i}]");
        if !(pt.t > c.t0 && pt.t < c.t1) {
            return Err(HarnessError::schema(field, format!("t = {} must lie inside ({}, {})", pt.t, c.t0, c.t1)));
        }
        let s = bogolyubov_current(&c, &pot, (pt.t, pt.x), pt.mu, &obs.phase_functional, obs.epsilon)
            .map_err(|e| HarnessError::core_in("observables", e))?;
        let bump = Pulse::normalized_bump(pt.t, pt.x, st, sx);
        let analytic = obs.phase_functional.analytic_shift(&bump, pt.mu);
        let pointwise = obs.phase_functional.pointwise_shift(pt.t, pt.x, pt.mu);
        if !s.resolved {
            unresolved.push(i);
        }
        t.push(vec![
            s.t.into(),
            s.x.into(),
            s.mu.into(),
            s.value.into(),
            s.coarse.into(),
            s.fine.into(),
            s.epsilon.into(),
            s.residual.into(),
            s.resolved.into(),
            s.imaginary_part.into(),
            analytic.into(),
            pointwise.into(),
        ]);
        samples.push(json!({"sample": s, "phase_shift_analytic": analytic, "phase_shift_pointwise": pointwise}));
    }
    let first = t.rows.first().and_then(|r| if let Cell::F(v) = r[3] { Some(v) } else { None }).unwrap_or(f64::NAN);
    let guard = (!unresolved.is_empty()).then(|| {
        HarnessError::numerical("current-extrapolation", format!("Richardson residual above 5% at points {unresolved:?}"))
    });
    let summary = json!({
        "lattice": lattice_json(&c),
        "phase_functional": obs.phase_functional,
        "bump_sigma_t": st,
        "bump_sigma_x": sx,
        "samples": samples,
    });
    Ok(Outcome { table: t, summary, primary: ("current", first), guard })
}

fn run_gauge_probe(cfg: &Config) -> Result<Outcome, HarnessError> {
    let (c, pot) = cfg.model()?;
    let r = gauge_covariance_probe(&c, &pot)?;
    let mut t = Table::new(&["N", "e", "fixed", "transformed", "reference"]);
    t.push(vec![c.n.into(), c.e.into(), r.fixed.into(), r.transformed.into(), r.reference.into()]);
    let summary = json!({"lattice": lattice_json(&c), "report": r});
    Ok(Outcome { table: t, summary, primary: ("fixed", r.fixed), guard: None })
}

/// Aggregated sweep: one sub-run per value, in the order given.
pub fn run_sweep(cfg: &Config, experiment: Experiment, axis: Axis, values: &[f64]) -> Result<Outcome, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::schema("values", "sweep needs at least one value"));
    }
    if experiment == Experiment::Sweep {
        return Err(HarnessError::schema("sweep.experiment", "a sweep cannot be nested"));
    }
    if axis == Axis::Lambda && !experiment.uses_kernel() {
        return Err(HarnessError::schema("axis", "Λ sweeps need cutoff-probe or tangential-probe"));
    }
    let mut quantity = "";
    let mut ys = Vec::with_capacity(values.len());
    let mut runs = Vec::with_capacity(values.len());
    let mut guard = None;
    for &v in values {
        let sub = cfg.with_axis(axis, v)?;
        let (name, y, summary) = if axis == Axis::Lambda {
            let (a, alt) = sub.kernel_potentials()?;
            let spec = sub.sampler()?;
            let (est, err) = match (experiment, alt) {
                (Experiment::TangentialProbe, Some(b)) => hs_norm_squared(&Difference(&a, &b), v * a.m, &spec)?,
                (Experiment::TangentialProbe, None) => {
                    return Err(HarnessError::schema("kernel3p1.components_alt", "required by tangential-probe"))
                }
                _ => hs_norm_squared(&Single(&a), v * a.m, &spec)?,
            };
            ("hs2", est, json!({"cutoff": v * a.m, "hs2": est, "stderr": err}))
        } else {
            let o = run(&sub, experiment)?;
            if guard.is_none() {
                guard = o.guard;
            }
            (o.primary.0, o.primary.1, o.summary)
        };
        quantity = name;
        ys.push(y);
        runs.push(json!({"value": v, "summary": summary}));
    }
    let mut t = Table::new(&["index", axis.name(), quantity, "ratio"]);
    for (i, (&v, &y)) in values.iter().zip(&ys).enumerate() {
        let ratio = if i == 0 { f64::NAN } else { y / ys[i - 1] };
        t.push(vec![i.into(), v.into(), y.into(), ratio.into()]);
    }
    let slope = if values.len() >= 2 { loglog_slope(values, &ys).ok() } else { None };
    let ratios: Vec<f64> = ys.windows(2).map(|w| w[1] / w[0]).collect();
    let summary = json!({
        "experiment": experiment.name(),
        "axis": axis.name(),
        "values": values,
        "quantity": quantity,
        "results": ys,
        "ratios": ratios,
        "loglog_slope": slope,
        "runs": runs,
    });
    Ok(Outcome { table: t, summary, primary: ("loglog_slope", slope.unwrap_or(f64::NAN)), guard })
}
