use super::stepper::{Dynamics, Stepper};
use crate::error::{Error, Result};
use crate::lp::{besov_norm, BesovSpec};
use crate::physics::PhysicalParams;
use crate::scalar::{c, Scalar};
use crate::series::NormSeries;
use crate::spectral::{lp_norm, lp_norm_vector};
use crate::state::FluidState;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig<T> {
    pub horizon: T,
    /// Spacing of output times.
    pub cadence: T,
    /// Largest admissible step; the actual step divides `cadence` evenly.
    pub dt_max: T,
    pub dynamics: Dynamics,
    /// Guard norms may not exceed this multiple of their initial value.
    pub divergence_factor: T,
    /// `(p, c)`: require `‖a₀‖_{Ḃ^{d/p}_{p,1}} ≤ c` before integrating.
    pub smallness: Option<(T, T)>,
}

impl<T: Scalar> SimulationConfig<T> {
    pub fn new(horizon: T, cadence: T, dt_max: T) -> Self {
        SimulationConfig {
            horizon,
            cadence,
            dt_max,
            dynamics: Dynamics::Full,
            divergence_factor: c(10.0),
            smallness: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("horizon", self.horizon), ("cadence", self.cadence), ("dt", self.dt_max)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.cadence > self.horizon {
            return Err(Error::domain("output cadence exceeds the horizon"));
        }
        if !(self.divergence_factor > T::one()) {
            return Err(Error::domain("divergence factor must exceed 1"));
        }
        Ok(())
    }

    /// `(step, substeps per output, outputs)`.
    pub fn schedule(&self) -> (T, usize, usize) {
        let sub = (self.cadence / self.dt_max).ceil().to_usize().unwrap_or(1).max(1);
        let outputs = (self.horizon / self.cadence).round().to_usize().unwrap_or(0);
        (self.cadence / c::<T>(sub as f64), sub, outputs)
    }
}

#[derive(Clone, Debug)]
pub struct SimulationSummary<T: Scalar> {
    pub series: NormSeries,
    pub final_state: FluidState<T>,
    pub steps: usize,
    pub dt: T,
    pub outputs: usize,
}

/// Names of the norms the divergence guard watches.
pub const GUARD_NORMS: [&str; 4] = ["l2_a", "l2_u", "linf_a", "linf_u"];

fn guard_norms<T: Scalar>(state: &FluidState<T>) -> Result<[f64; 4]> {
    Ok([
        state.a.spectral_l2().as_f64(),
        state.u.spectral_l2().as_f64(),
        lp_norm(&state.a, T::infinity())?.as_f64(),
        lp_norm_vector(&state.u, T::infinity())?.as_f64(),
    ])
}

fn record<T: Scalar>(state: &FluidState<T>, series: &mut NormSeries) -> Result<[f64; 4]> {
    let t = state.t.as_f64();
    let g = guard_norms(state)?;
    if let Some((name, &v)) = GUARD_NORMS.iter().zip(&g).find(|(_, v)| !v.is_finite()) {
        return Err(Error::Divergence {
            name: name.to_string(),
            value: v,
            limit: f64::MAX,
            time: t,
        });
    }
    for (name, v) in GUARD_NORMS.iter().zip(g) {
        series.push(t, name, v)?;
    }
    let samples = state.a.to_physical();
    let mean = samples.iter().map(|x| x.as_f64()).sum::<f64>() / samples.len() as f64;
    series.push(t, "mean_density", 1.0 + mean)?;
    Ok(g)
}

/// Integrates from `init` to `init.t + horizon`.
///
/// At `t₀` and every output time the guard norms and the mean density are
/// recorded, then `observer` is called with the state and the series so it
/// can append its own records (or write checkpoints).
pub fn simulate<T: Scalar>(
    init: &FluidState<T>,
    config: &SimulationConfig<T>,
    params: &PhysicalParams<T>,
    mut observer: impl FnMut(&FluidState<T>, &mut NormSeries) -> Result<()>,
) -> Result<SimulationSummary<T>> {
    config.validate()?;
    params.validate()?;
    init.ensure_mean_zero()?;
    let floor = super::nonlinear::min_density(&init.a);
    if !(floor > T::zero()) {
        return Err(Error::Vacuum {
            min_density: floor.as_f64(),
            time: init.t.as_f64(),
        });
    }
    if let Some((p, threshold)) = config.smallness {
        let d = c::<T>(init.grid().dim() as f64);
        let size = besov_norm(&init.a, &BesovSpec::new(d / p, p, crate::lp::SumExponent::One))?;
        if size > threshold {
            return Err(Error::domain(format!(
                "initial density is not small: ‖a₀‖_Ḃ^(d/p)_(p,1) = {size} > {threshold}"
            )));
        }
    }
    let (dt, sub, outputs) = config.schedule();
    let stepper = Stepper::new(init.grid(), dt, params, config.dynamics)?;
    let mut series = NormSeries::new();
    let initial = record(init, &mut series)?;
    observer(init, &mut series)?;
    let factor = config.divergence_factor.as_f64();
    let mut state = init.clone();
    let mut steps = 0;
    for k in 1..=outputs {
        for _ in 0..sub {
            state = stepper.step(&state)?;
            steps += 1;
        }
        // Pin output times to the cadence grid.
        state.t = init.t + config.cadence * c::<T>(k as f64);
        let now = record(&state, &mut series)?;
        for ((name, v), v0) in GUARD_NORMS.iter().zip(now).zip(initial) {
            if v0 > 0.0 && v > factor * v0 {
                return Err(Error::Divergence {
                    name: name.to_string(),
                    value: v,
                    limit: factor * v0,
                    time: state.t.as_f64(),
                });
            }
        }
        observer(&state, &mut series)?;
    }
    Ok(SimulationSummary {
        series,
        final_state: state,
        steps,
        dt,
        outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::propagate_linear;
    use crate::spectral::{random_field, scaled_to_sup, Grid, SpectralField, Support, VectorField};

    fn init(amp: f64) -> FluidState<f64> {
        let g = Grid::<f64>::new(2, 32, 16.0).unwrap();
        let s = Support::Ball { radius: 2.0 };
        let a = scaled_to_sup(&random_field(&g, s, 1).unwrap(), amp).unwrap();
        let u = VectorField::new(vec![
            scaled_to_sup(&random_field(&g, s, 2).unwrap(), amp).unwrap(),
            scaled_to_sup(&random_field(&g, s, 3).unwrap(), amp).unwrap(),
        ])
        .unwrap();
        FluidState::new(a, u, 0.0).unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid::<f64>::new(2, 16, 8.0).unwrap();
        let z = FluidState::zeros(&g);
        let out = simulate(&z, &SimulationConfig::new(2.0, 0.5, 0.1), &PhysicalParams::default(), |_, _| Ok(())).unwrap();
        assert_eq!(out.final_state.max_abs_diff(&z), 0.0);
        assert_eq!(out.outputs, 4);
        assert!(out.series.get("l2_u").iter().all(|&(_, v)| v == 0.0));
    }

    #[test]
    fn linear_only_matches_propagator_at_outputs() {
        let s0 = init(0.05);
        let params = PhysicalParams::default();
        let mut cfg = SimulationConfig::new(3.0, 0.5, 0.07);
        cfg.dynamics = Dynamics::LinearOnly;
        let mut worst: f64 = 0.0;
        simulate(&s0, &cfg, &params, |s, _| {
            let exact = propagate_linear(&s0, s.t, &params)?;
            worst = worst.max(s.max_abs_diff(&exact));
            Ok(())
        })
        .unwrap();
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn smallness_and_divergence_guards() {
        let s0 = init(0.5);
        let mut cfg = SimulationConfig::new(1.0, 0.5, 0.05);
        cfg.smallness = Some((2.0, 0.05));
        let err = simulate(&s0, &cfg, &PhysicalParams::default(), |_, _| Ok(())).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("not small")));
        let mut bad = init(0.01);
        bad.a = SpectralField::from_fn(bad.grid(), |x| 1.2 * (std::f64::consts::TAU * x[0] / 16.0).cos()).mean_zero();
        let err = simulate(&bad, &SimulationConfig::new(1.0, 0.5, 0.05), &PhysicalParams::default(), |_, _| Ok(())).unwrap_err();
        assert!(matches!(err, Error::Vacuum { .. }));
    }

    #[test]
    fn schedule_divides_cadence() {
        let cfg = SimulationConfig::<f64>::new(10.0, 1.0, 0.3);
        let (dt, sub, outputs) = cfg.schedule();
        assert_eq!((sub, outputs), (4, 10));
        assert!((dt - 0.25).abs() < 1e-15);
    }
}
