//! Acceptance battery. Prints one `PASS`/`FAIL` line per criterion and
//! exits nonzero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use nsp_decay_core::decay::fit_decay_slope;
use nsp_decay_core::ineq::{standard_suite, LabSetup};
use nsp_decay_core::init::{initial_state, InitialProfile};
use nsp_decay_core::linear::{
    degenerate_radius, log_times, mode_exponential, mode_matrix, propagate_linear, radial_decay_quadrature,
    verify_semigroup_bound, Mat2, RadialNorm, RadialProfile, ScanGrid,
};
use nsp_decay_core::lp::partition_audit;
use nsp_decay_core::physics::PhysicalParams;
use nsp_decay_core::solver::{simulate, Dynamics, SimulationConfig, Stepper};
use nsp_decay_core::state::FluidState;
use nsp_decay_core::Grid64;
use nsp_decay_lab::{execute_config, ExperimentConfig, Kind};

type Outcome = Result<(bool, String), String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

const WINDOW: (f64, f64) = (10.0, 1000.0);
const SLOPE_TOL: f64 = 0.05;

fn slopes(d: usize, poisson: bool) -> Result<(f64, f64), String> {
    let params = PhysicalParams {
        poisson,
        ..Default::default()
    };
    let times = log_times(WINDOW.0, WINDOW.1, 60);
    let s = radial_decay_quadrature(&RadialProfile::potential_indicator(d), &times, RadialNorm::L2, &params)
        .map_err(|e| e.to_string())?;
    let fit = |name: &str| fit_decay_slope(&s.get(name), WINDOW).map(|f| f.slope).map_err(|e| e.to_string());
    Ok((fit("radial_u[s=0]")?, fit("radial_a[s=0]")?))
}

fn linear_d3() -> Outcome {
    let clock = Instant::now();
    let (u, a) = slopes(3, true)?;
    let secs = clock.elapsed().as_secs_f64();
    let ok = (u + 0.75).abs() <= SLOPE_TOL && (a + 1.25).abs() <= SLOPE_TOL && secs < 60.0;
    Ok((ok, format!("u {u:.4} (target -0.75), a {a:.4} (target -1.25), {secs:.1} s")))
}

fn half_rate_gap() -> Outcome {
    let (u_on, a_on) = slopes(3, true)?;
    let (u_off, a_off) = slopes(3, false)?;
    let (on, off) = (a_on - u_on, a_off - u_off);
    let ok = (on + 0.5).abs() <= SLOPE_TOL && off.abs() <= SLOPE_TOL;
    Ok((ok, format!("gap {on:.4} with coupling (target -0.5), {off:.4} without (target 0)")))
}

fn linear_d2() -> Outcome {
    let (u, a) = slopes(2, true)?;
    let ok = (u + 0.5).abs() <= SLOPE_TOL && (a + 1.0).abs() <= SLOPE_TOL;
    Ok((ok, format!("u {u:.4} (target -0.5), a {a:.4} (target -1.0)")))
}

fn semigroup() -> Outcome {
    let grid = ScanGrid::new(1.0, 100.0, 400, 400).map_err(|e| e.to_string())?;
    let scan = verify_semigroup_bound::<f64>(&grid, 0.4, 3.0, true).map_err(|e| e.to_string())?;
    Ok((
        scan.pass,
        format!(
            "measured C = {:.4} at c0 = {} (bound {}), worst at r = {:.3}, t = {:.2}",
            scan.constant, scan.c0, scan.bound, scan.worst_r, scan.worst_t
        ),
    ))
}

fn rk4(m: Mat2<f64>, t: f64, dt: f64) -> Mat2<f64> {
    let steps = (t / dt).round() as usize;
    let h = t / steps as f64;
    let axpy = |a: Mat2<f64>, b: Mat2<f64>, s: f64| {
        let mut o = a;
        for i in 0..2 {
            for j in 0..2 {
                o.0[i][j] += s * b.0[i][j];
            }
        }
        o
    };
    let mut x = Mat2::identity();
    for _ in 0..steps {
        let k1 = m * x;
        let k2 = m * axpy(x, k1, h / 2.0);
        let k3 = m * axpy(x, k2, h / 2.0);
        let k4 = m * axpy(x, k3, h);
        x = axpy(x, axpy(axpy(k1, k4, 1.0), axpy(k2, k3, 1.0), 2.0), h / 6.0);
    }
    x
}

fn propagator_oracle() -> Outcome {
    let rd: f64 = degenerate_radius(true);
    let mut worst: f64 = 0.0;
    let mut at = (0.0, 0.0);
    for &r in &[0.01, 0.1, 0.5, 1.0, 2.0, rd, 2.19737, 3.0, 10.0] {
        for &t in &[0.1, 1.0, 2.0] {
            for poisson in [true, false] {
                let m = mode_matrix(r, poisson).map_err(|e| e.to_string())?;
                let exact = mode_exponential(r, t, poisson).map_err(|e| e.to_string())?;
                let rel = exact.max_abs_diff(&rk4(m, t, 1e-4)) / exact.max_abs();
                if rel > worst {
                    worst = rel;
                    at = (r, t);
                }
            }
        }
    }
    Ok((worst < 1e-8, format!("max relative error {worst:.2e} at r = {}, t = {} (degenerate r = {rd:.6})", at.0, at.1)))
}

fn littlewood_paley() -> Outcome {
    let mut worst = Vec::new();
    let mut ok = true;
    for (d, n) in [(2, 64), (3, 32)] {
        let grid = Grid64::new(d, n, std::f64::consts::TAU).map_err(|e| e.to_string())?;
        let a = partition_audit(&grid, 100, 1).map_err(|e| e.to_string())?;
        ok &= a.pass();
        worst.push(format!(
            "d={d}: partition {:.1e}, orthogonality {:.1e}, reconstruction {:.1e}, ratio [{:.4}, {:.4}]",
            a.max_partition_error,
            a.max_orthogonality_defect,
            a.max_reconstruction_error,
            a.besov_l2_ratio.0,
            a.besov_l2_ratio.1
        ));
    }
    Ok((ok, worst.join("; ")))
}

fn step_run(init: &FluidState<f64>, dt: f64, steps: usize) -> Result<FluidState<f64>, String> {
    let st = Stepper::new(init.grid(), dt, &PhysicalParams::default(), Dynamics::Full).map_err(|e| e.to_string())?;
    let mut s = init.clone();
    for _ in 0..steps {
        s = st.step(&s).map_err(|e| e.to_string())?;
    }
    Ok(s)
}

fn small_state(amplitude: f64) -> Result<FluidState<f64>, String> {
    let grid = Grid64::new(2, 32, 12.0).map_err(|e| e.to_string())?;
    initial_state(&grid, InitialProfile::Random { radius: 2.0, amplitude }, 11).map_err(|e| e.to_string())
}

fn nonlinear_solver(dir: &Path) -> Outcome {
    // dt convergence
    let init = small_state(0.3)?;
    let reference = step_run(&init, 1.0 / 64.0, 64)?;
    let coarse = step_run(&init, 1.0 / 8.0, 8)?.l2_distance(&reference);
    let fine = step_run(&init, 1.0 / 16.0, 16)?.l2_distance(&reference);
    let order = coarse / fine;
    // linear-only path against the propagator
    let init = small_state(0.05)?;
    let params = PhysicalParams::default();
    let mut cfg = SimulationConfig::new(5.0, 0.5, 0.07);
    cfg.dynamics = Dynamics::LinearOnly;
    let mut lin: f64 = 0.0;
    simulate(&init, &cfg, &params, |s, _| {
        lin = lin.max(s.max_abs_diff(&propagate_linear(&init, s.t, &params)?));
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    // small-data run through the harness
    let text = "seed = 0\n[grid]\nd = 2\nn = 256\nL = \"64pi\"\n\
        [run]\nhorizon = 100.0\ncadence = 1.0\ndt = 0.1\ncheckpoint_every = 0\n\
        [init]\nprofile = \"bump\"\namplitude = 0.01\nwidth = 2.0\n[decay]\nj0 = 1\n";
    let cfg = ExperimentConfig::parse(text, Some(Kind::Simulate)).map_err(|e| e.to_string())?;
    let out = dir.join("small-data");
    let run = execute_config(&cfg, &out, None);
    if let Some(e) = run.error {
        return Err(format!("small-data run failed: {e}"));
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let growth = report["guard"]
        .as_object()
        .ok_or("report lacks guard norms")?
        .values()
        .filter_map(|v| v["max_over_initial"].as_f64())
        .fold(0.0, f64::max);
    let mass = report["mass_drift"].as_f64().ok_or("report lacks mass drift")?;
    let hf = report["D_high_growth_second_half"].as_f64().ok_or("report lacks D growth")?;
    let d_total = report["D"]["total"].as_f64().unwrap_or(f64::NAN);
    let ok = (3.5..=4.5).contains(&order)
        && lin < 1e-10
        && mass < 1e-8
        && growth <= 2.0
        && hf < 0.05
        && d_total.is_finite();
    Ok((
        ok,
        format!(
            "order ratio {order:.3}, linear-only {lin:.1e}, mass drift {mass:.1e} over T = 100, \
             max norm/initial {growth:.3}, D high-frequency growth {:.2}% (D = {d_total:.4})",
            100.0 * hf
        ),
    ))
}

fn inequality_lab() -> Outcome {
    let suite = standard_suite(&LabSetup::default()).map_err(|e| e.to_string())?;
    let unstable = suite.unstable_cases();
    let worst = suite.reports.iter().map(|r| r.summary().max_growth).fold(0.0, f64::max);
    let failed_exact: Vec<&str> = suite.exact.iter().filter(|e| !e.pass).map(|e| e.name.as_str()).collect();
    let conv = suite
        .convolutions
        .iter()
        .find(|c| c.case.sigma1 == 1.0 && c.case.sigma2 == 2.0 && c.case.theta == 0.0)
        .ok_or("missing (1, 2, 0) convolution case")?;
    let ok = unstable.is_empty() && failed_exact.is_empty() && conv.flat && conv.sup.is_finite();
    Ok((
        ok,
        format!(
            "{} cases, max refinement growth {:.2}% (unstable: {unstable:?}), {} exact cases (failed: {failed_exact:?}), \
             convolution (1,2,0) sup {:.4}, tail drift {:.2}%",
            suite.reports.len(),
            100.0 * worst,
            suite.exact.len(),
            conv.sup,
            100.0 * conv.tail_drift
        ),
    ))
}

fn determinism(dir: &Path) -> Outcome {
    let cfg = dir.join("det.toml");
    std::fs::write(
        &cfg,
        "[grid]\nd = 2\nn = 64\nL = \"16pi\"\n[run]\nhorizon = 5.0\ncadence = 0.5\ndt = 0.1\n[decay]\nj0 = 1\n",
    )
    .map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for run in ["first", "second"] {
        let out = dir.join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_nsp-decay-lab"))
            .args(["simulate", "--seed", "42", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .stdout(Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("run exited with {status}"));
        }
        files.push(std::fs::read(out.join("norms.csv")).map_err(|e| e.to_string())?);
    }
    let same = files[0] == files[1];
    Ok((same && !files[0].is_empty(), format!("{} bytes, identical: {same}", files[0].len())))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<(&str, Check)> = vec![
        ("linear decay exponents d=3", Box::new(linear_d3)),
        ("half-rate gap", Box::new(half_rate_gap)),
        ("linear decay exponents d=2", Box::new(linear_d2)),
        ("semigroup bound", Box::new(semigroup)),
        ("propagator vs RK4", Box::new(propagator_oracle)),
        ("Littlewood-Paley suite", Box::new(littlewood_paley)),
        ("nonlinear solver", Box::new(|| nonlinear_solver(dir.path()))),
        ("inequality lab", Box::new(inequality_lab)),
        ("determinism", Box::new(|| determinism(dir.path()))),
    ];
    let mut failures = 0;
    for (name, check) in &criteria {
        let clock = Instant::now();
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "{} {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            clock.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
