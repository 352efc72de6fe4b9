//! Experiment pipelines, one per [`Kind`].

use std::path::Path;

use serde_json::{json, Value};

use nsp_decay_core::decay::{
    fit_decay_slope, functional_d, functional_e, predicted_density_exponent, predicted_velocity_exponent,
    rate_report, DecayProbe, FunctionalHistory, PREDICTED_GAP,
};
use nsp_decay_core::ineq::{csv_field, standard_suite, LabSetup, RatioReport};
use nsp_decay_core::init::{initial_state, InitialProfile};
use nsp_decay_core::linear::{log_times, radial_decay_quadrature, verify_semigroup_bound, RadialNorm, RadialProfile, ScanGrid};
use nsp_decay_core::lp::{besov_norm, partition_audit, BesovSpec, SumExponent};
use nsp_decay_core::series::NormSeries;
use nsp_decay_core::solver::{encode_checkpoint, min_density, simulate, Dynamics, SimulationConfig, GUARD_NORMS};
use nsp_decay_core::Grid64;

use crate::config::{DynamicsChoice, ExperimentConfig, InitShape, Kind, RadialData};
use crate::error::LabError;
use crate::outputs::write_atomic;

/// Relative accuracy requested from the radial quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-11;

pub struct RunOutput {
    pub series: NormSeries,
    pub report: Value,
    /// Extra text files, relative to the output directory.
    pub files: Vec<(String, String)>,
    /// Run facts recorded in the manifest.
    pub notes: Value,
}

/// A failed run with the records accepted before the failure.
pub struct Failure {
    pub error: LabError,
    pub series: Box<NormSeries>,
}

impl<E: Into<LabError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            error: e.into(),
            series: Box::default(),
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutput, Failure> {
    match cfg.kind() {
        Kind::PartitionCheck => partition_check(cfg),
        Kind::LinearDecay => linear_decay(cfg),
        Kind::Simulate => simulate_run(cfg, out),
        Kind::Ineq => ineq_suite(cfg),
    }
}

fn partition_check(cfg: &ExperimentConfig) -> Result<RunOutput, Failure> {
    let g = &cfg.grid;
    let grid = Grid64::new(g.d, g.n, g.side)?;
    let audit = partition_audit(&grid, cfg.partition.fields, cfg.seed)?;
    Ok(RunOutput {
        series: NormSeries::new(),
        report: json!({
            "status": "ok",
            "kind": "partition-check",
            "audit": audit,
            "pass": audit.pass(),
        }),
        files: vec![],
        notes: json!({}),
    })
}

fn linear_decay(cfg: &ExperimentConfig) -> Result<RunOutput, Failure> {
    let lin = &cfg.linear;
    let d = cfg.grid.d;
    let params = cfg.physics.params();
    let dp = cfg.decay_params()?;
    let profile = match lin.profile {
        RadialData::PotentialIndicator => RadialProfile::potential_indicator(d),
        RadialData::Gaussian => RadialProfile::gaussian(d, lin.width, lin.weights),
    };
    let tail_bound = match lin.profile {
        RadialData::PotentialIndicator => 0.0,
        // Power ~ e^{-r²/width²}, cut at 9 widths.
        RadialData::Gaussian => (-81.0f64).exp(),
    };
    let times = log_times(lin.t_start, lin.t_end, lin.samples);
    let norm = if lin.s == 0.0 { RadialNorm::L2 } else { RadialNorm::Lambda(lin.s) };
    let series = radial_decay_quadrature(&profile, &times, norm, &params)?;
    let tag = norm.tag();
    let window = (cfg.decay.fit_window[0], cfg.decay.fit_window[1]);
    let fa = fit_decay_slope(&series.require(&format!("radial_a{tag}"))?, window)?;
    let fu = fit_decay_slope(&series.require(&format!("radial_u{tag}"))?, window)?;
    let rates = rate_report(&fa, &fu, &dp, lin.s, params.poisson, lin.tolerance);
    let semigroup = if lin.semigroup {
        let scan = ScanGrid::new(lin.scan_r_max, lin.scan_t_max, lin.scan_samples, lin.scan_samples)?;
        Some(verify_semigroup_bound::<f64>(&scan, lin.c0, lin.bound, params.poisson)?)
    } else {
        None
    };
    let (target_a, target_u, target_gap) = if params.poisson {
        (predicted_density_exponent(&dp, lin.s), predicted_velocity_exponent(&dp, lin.s), PREDICTED_GAP)
    } else {
        let u = predicted_velocity_exponent(&dp, lin.s);
        (u, u, 0.0)
    };
    let pass = rates.all_pass() && semigroup.is_none_or(|s| s.pass);
    Ok(RunOutput {
        report: json!({
            "status": "ok",
            "kind": "linear-decay",
            "d": d,
            "p": dp.p,
            "s1": dp.s1,
            "s": lin.s,
            "poisson": params.poisson,
            "fit_window": [window.0, window.1],
            "series": {
                "density": format!("radial_a{tag}"),
                "velocity": format!("radial_u{tag}"),
            },
            "fits": { "density": fa, "velocity": fu },
            "targets": { "density": target_a, "velocity": target_u, "gap": target_gap },
            "rates": rates.rows,
            "semigroup": semigroup,
            "pass": pass,
        }),
        files: vec![("rates.csv".into(), rates.to_csv())],
        notes: json!({
            "quadrature": {
                "cutoff": profile.cutoff,
                "relative_tolerance": QUADRATURE_TOLERANCE,
                "tail_bound": tail_bound,
            }
        }),
        series,
    })
}

fn history_entries(prefix: &str, h: &FunctionalHistory, series: &mut NormSeries) -> nsp_decay_core::Result<()> {
    for (k, &t) in h.times.iter().enumerate() {
        series.push(t, &format!("{prefix}.total"), h.total[k])?;
        for (name, v) in &h.terms {
            series.push(t, &format!("{prefix}.{name}"), v[k])?;
        }
    }
    Ok(())
}

fn final_terms(h: &FunctionalHistory) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("total".into(), json!(h.last()));
    for (name, v) in &h.terms {
        m.insert(name.clone(), json!(v.last().copied().unwrap_or(0.0)));
    }
    Value::Object(m)
}

/// Relative growth of the high-frequency part of `D` over the second half.
fn second_half_growth(h: &FunctionalHistory) -> f64 {
    let hf: Vec<f64> = (0..h.times.len())
        .map(|k| h.terms.iter().filter(|(n, _)| n.starts_with("high")).map(|(_, v)| v[k]).sum())
        .collect();
    let Some(&t_end) = h.times.last() else { return 0.0 };
    let t0 = h.times[0];
    let mid = t0 + 0.5 * (t_end - t0);
    let k = h.times.iter().position(|&t| t >= mid).unwrap_or(0);
    if hf[k] > 0.0 {
        hf[hf.len() - 1] / hf[k] - 1.0
    } else {
        0.0
    }
}

fn simulate_run(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutput, Failure> {
    let g = &cfg.grid;
    let run = &cfg.run;
    let grid = Grid64::new(g.d, g.n, g.side)?;
    let params = cfg.physics.params();
    let dp = cfg.decay_params()?;
    let profile = match cfg.init.profile {
        InitShape::Bump => InitialProfile::Bump {
            width: cfg.init.width,
            amplitude: cfg.init.amplitude,
        },
        InitShape::Random => InitialProfile::Random {
            radius: cfg.init.radius,
            amplitude: cfg.init.amplitude,
        },
    };
    let init = initial_state(&grid, profile, cfg.seed)?;
    let floor = min_density(&init.a);
    let mut sim = SimulationConfig::new(run.horizon, run.cadence, run.dt);
    sim.dynamics = match run.dynamics {
        DynamicsChoice::Full => Dynamics::Full,
        DynamicsChoice::LinearOnly => Dynamics::LinearOnly,
    };
    sim.divergence_factor = run.divergence_factor;
    sim.smallness = (run.smallness > 0.0).then_some((dp.p, run.smallness));
    let smallness = if floor > 0.0 {
        Some(besov_norm(&init.a, &BesovSpec::new(g.d as f64 / dp.p, dp.p, SumExponent::One))?)
    } else {
        None
    };
    let torus_limit = (g.side / std::f64::consts::TAU).powi(2) / 10.0;
    let (_, _, outputs) = sim.schedule();
    let probe = DecayProbe::new(dp.clone())?;
    let dir = out.join("checkpoints");
    let mut partial = NormSeries::new();
    let mut written = Vec::new();
    let result = simulate(&init, &sim, &params, |state, series| {
        probe.record(state, series)?;
        let k = ((state.t - init.t) / run.cadence).round() as usize;
        let every = run.checkpoint_every;
        if k == 0 || k == outputs || (every > 0 && k.is_multiple_of(every)) {
            let name = format!("out_{k:05}.bin");
            let path = dir.join(&name);
            write_atomic(&path, &encode_checkpoint(state, &params)).map_err(|e| nsp_decay_core::Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            written.push(format!("checkpoints/{name}"));
        }
        partial = series.clone();
        Ok(())
    });
    let summary = match result {
        Ok(s) => s,
        Err(e) => {
            return Err(Failure {
                error: e.into(),
                series: Box::new(partial),
            })
        }
    };
    let mut series = summary.series;
    let dh = functional_d(&series, &dp)?;
    let eh = functional_e(&series)?;
    history_entries("D", &dh, &mut series)?;
    history_entries("E", &eh, &mut series)?;
    let mut guard = serde_json::Map::new();
    for name in GUARD_NORMS {
        let v = series.require(name)?;
        let first = v[0].1;
        let max = v.iter().map(|p| p.1).fold(0.0, f64::max);
        guard.insert(
            name.to_string(),
            json!({
                "initial": first,
                "max": max,
                "final": v[v.len() - 1].1,
                "max_over_initial": if first > 0.0 { max / first } else { 0.0 },
            }),
        );
    }
    let mass_drift = series
        .require("mean_density")?
        .iter()
        .map(|p| (p.1 - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(RunOutput {
        report: json!({
            "status": "ok",
            "kind": "simulate",
            "steps": summary.steps,
            "dt": summary.dt,
            "outputs": summary.outputs,
            "min_density_initial": floor,
            "smallness": { "norm": smallness, "threshold": run.smallness },
            "guard": guard,
            "mass_drift": mass_drift,
            "D": final_terms(&dh),
            "E": final_terms(&eh),
            "D_high_growth_second_half": second_half_growth(&dh),
            "checkpoints": written,
        }),
        files: vec![],
        notes: json!({
            "torus_rule": {
                "horizon": run.horizon,
                "limit": torus_limit,
                "satisfied": run.horizon <= torus_limit,
            }
        }),
        series,
    })
}

fn ineq_suite(cfg: &ExperimentConfig) -> Result<RunOutput, Failure> {
    let iq = &cfg.ineq;
    let setup = LabSetup {
        dim: iq.d,
        side: iq.side,
        grids: iq.grids.clone(),
        trials: iq.trials,
        master_seed: cfg.seed,
    };
    let suite = standard_suite(&setup)?;
    let mut ratios = String::new();
    for (k, r) in suite.reports.iter().enumerate() {
        let csv = r.to_csv();
        // One header for the whole file.
        ratios.push_str(if k == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
    }
    if suite.reports.is_empty() {
        ratios = RatioReport::new("").to_csv();
    }
    let mut conv = String::from("case,sigma1,sigma2,theta,t,integral,weighted\n");
    for c in &suite.convolutions {
        for row in &c.rows {
            conv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&c.case.name()),
                c.case.sigma1,
                c.case.sigma2,
                c.case.theta,
                row.t,
                row.integral,
                row.weighted
            ));
        }
    }
    let summaries: Vec<_> = suite.reports.iter().map(|r| r.summary()).collect();
    let unstable = suite.unstable_cases();
    let exact_pass = suite.exact.iter().all(|e| e.pass);
    let conv_pass = suite.convolutions.iter().all(|c| c.flat && c.sup.is_finite());
    let stable_n0: serde_json::Map<String, Value> =
        suite.stable_n0.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    Ok(RunOutput {
        series: NormSeries::new(),
        report: json!({
            "status": "ok",
            "kind": "ineq",
            "grids": iq.grids,
            "trials": iq.trials,
            "refinement_tolerance": nsp_decay_core::ineq::REFINEMENT_TOLERANCE,
            "cases": summaries,
            "unstable_cases": unstable,
            "stable_n0": stable_n0,
            "convolutions": suite.convolutions.iter().map(|c| json!({
                "case": c.case.name(),
                "sigma1": c.case.sigma1,
                "sigma2": c.case.sigma2,
                "theta": c.case.theta,
                "sup": c.sup,
                "tail_drift": c.tail_drift,
                "flat": c.flat,
                "integrability_constant": c.integrability_constant,
            })).collect::<Vec<_>>(),
            "exact": suite.exact,
            "pass": unstable.is_empty() && exact_pass && conv_pass,
        }),
        files: vec![("ratios.csv".into(), ratios), ("convolution.csv".into(), conv)],
        notes: json!({}),
    })
}
