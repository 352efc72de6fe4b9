use serde::Serialize;

use super::params::{japanese, DecayParams};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub samples: usize,
}

/// Least-squares slope of `log(value)` against `log⟨t⟩` over `t ∈ [t_a, t_b]`.
pub fn fit_decay_slope(points: &[(f64, f64)], window: (f64, f64)) -> Result<SlopeFit> {
    let (ta, tb) = window;
    let inside: Vec<(f64, f64)> = points.iter().copied().filter(|&(t, _)| t >= ta && t <= tb).collect();
    if inside.len() < 10 {
        return Err(Error::domain(format!(
            "slope fit needs at least 10 samples in [{ta}, {tb}], found {}",
            inside.len()
        )));
    }
    if let Some(&(t, v)) = inside.iter().find(|&&(_, v)| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!("non-positive value {v} at t = {t} in the fit window")));
    }
    let xy: Vec<(f64, f64)> = inside.iter().map(|&(t, v)| (japanese(t).ln(), v.ln())).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::domain("fit window has no spread in time"));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(SlopeFit {
        slope,
        stderr: (ssr / (n - 2.0) / sxx).sqrt(),
        intercept,
        samples: xy.len(),
    })
}

/// Density exponent `-(s₁ + s + 1)/2` for `‖Λ^s a‖_{L^p}`.
pub fn predicted_density_exponent(params: &DecayParams, s: f64) -> f64 {
    -(params.s1 + s + 1.0) / 2.0
}

/// Velocity exponent `-(s₁ + s)/2` for `‖Λ^s u‖_{L^p}`.
pub fn predicted_velocity_exponent(params: &DecayParams, s: f64) -> f64 {
    -(params.s1 + s) / 2.0
}

/// `L^r` exponent for `‖Λ^l a‖`: `-s₁/2 - d/2(1/2 - 1/r) - (l + 1)/2`.
pub fn predicted_density_lr_exponent(params: &DecayParams, r: f64, l: f64) -> f64 {
    -params.s1 / 2.0 - params.d as f64 / 2.0 * (0.5 - 1.0 / r) - (l + 1.0) / 2.0
}

/// `L^r` exponent for `‖Λ^k u‖`: `-s₁/2 - d/2(1/2 - 1/r) - k/2`.
pub fn predicted_velocity_lr_exponent(params: &DecayParams, r: f64, k: f64) -> f64 {
    -params.s1 / 2.0 - params.d as f64 / 2.0 * (0.5 - 1.0 / r) - k / 2.0
}

/// Density-minus-velocity slope gap.
pub const PREDICTED_GAP: f64 = -0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRow {
    pub quantity: String,
    pub predicted: f64,
    pub fitted: f64,
    pub stderr: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl RateRow {
    pub fn new(quantity: &str, predicted: f64, fit: &SlopeFit, tolerance: f64) -> Self {
        RateRow {
            quantity: quantity.to_string(),
            predicted,
            fitted: fit.slope,
            stderr: fit.stderr,
            tolerance,
            pass: (fit.slope - predicted).abs() <= tolerance,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
}

impl RateReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("quantity,predicted,fitted,stderr,tolerance,pass\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.quantity, r.predicted, r.fitted, r.stderr, r.tolerance, r.pass
            ));
        }
        s
    }
}

/// Compares fitted density and velocity slopes (at regularity `s`) with the
/// predicted exponents, and their gap with `-1/2` when `poisson` is set
/// (`0` otherwise).
pub fn rate_report(
    density: &SlopeFit,
    velocity: &SlopeFit,
    params: &DecayParams,
    s: f64,
    poisson: bool,
    tolerance: f64,
) -> RateReport {
    let mut rows = vec![RateRow::new(
        &format!("velocity[s={s}]"),
        predicted_velocity_exponent(params, s),
        velocity,
        tolerance,
    )];
    let gap_fit = SlopeFit {
        slope: density.slope - velocity.slope,
        stderr: density.stderr.hypot(velocity.stderr),
        intercept: density.intercept - velocity.intercept,
        samples: density.samples.min(velocity.samples),
    };
    if poisson {
        rows.insert(
            0,
            RateRow::new(&format!("density[s={s}]"), predicted_density_exponent(params, s), density, tolerance),
        );
        rows.push(RateRow::new("gap", PREDICTED_GAP, &gap_fit, tolerance));
    } else {
        // Without the Poisson coupling density and velocity decay alike.
        rows.insert(
            0,
            RateRow::new(&format!("density[s={s}]"), predicted_velocity_exponent(params, s), density, tolerance),
        );
        rows.push(RateRow::new("gap", 0.0, &gap_fit, tolerance));
    }
    RateReport { rows }
}
