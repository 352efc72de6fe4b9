//! Integrating-factor Heun scheme: with `E = exp(hL)` the exact linear flow
//! and `N = (f, g)`,
//!
//! ```text
//! U*      = E (Uⁿ + h N(Uⁿ))
//! Uⁿ⁺¹    = E (Uⁿ + h/2 N(Uⁿ)) + h/2 N(U*)
//! ```
//!
//! Second order; with `N ≡ 0` it is the exact linear flow.

use super::nonlinear::{compute_nonlinearities, min_density, vacuum_error};
use crate::error::{Error, Result};
use crate::linear::LinearPropagator;
use crate::physics::PhysicalParams;
use crate::scalar::{c, Scalar};
use crate::spectral::{lp_norm_vector, GridRef, SpectralField, VectorField};
use crate::state::FluidState;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dynamics {
    /// Full nonlinear system.
    Full,
    /// Nonlinear terms switched off; reproduces the linear propagator.
    LinearOnly,
}

/// `0.5 Δx / max(1, max|u|)`.
pub fn cfl_limit<T: Scalar>(state: &FluidState<T>) -> T {
    let umax = lp_norm_vector(&state.u, T::infinity()).unwrap_or(T::infinity());
    c::<T>(0.5) * state.grid().spacing() / umax.max(T::one())
}

/// Fixed-step integrator bound to one grid, step size and parameter set.
#[derive(Clone, Debug)]
pub struct Stepper<T: Scalar> {
    params: PhysicalParams<T>,
    dynamics: Dynamics,
    dt: T,
    flow: LinearPropagator<T>,
}

impl<T: Scalar> Stepper<T> {
    pub fn new(grid: &GridRef<T>, dt: T, params: &PhysicalParams<T>, dynamics: Dynamics) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::domain(format!("time step must be positive, got {dt}")));
        }
        Ok(Stepper {
            params: *params,
            dynamics,
            dt,
            flow: LinearPropagator::new(grid, dt, params)?,
        })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn dynamics(&self) -> Dynamics {
        self.dynamics
    }

    pub fn params(&self) -> &PhysicalParams<T> {
        &self.params
    }

    fn forcing(&self, state: &FluidState<T>) -> Result<Option<(SpectralField<T>, VectorField<T>)>> {
        match self.dynamics {
            Dynamics::LinearOnly => Ok(None),
            Dynamics::Full => compute_nonlinearities(state, &self.params).map(Some),
        }
    }

    /// One step; checks the CFL limit before and the vacuum guard after.
    pub fn step(&self, state: &FluidState<T>) -> Result<FluidState<T>> {
        let limit = cfl_limit(state);
        if self.dt > limit {
            return Err(Error::StepSize {
                dt: self.dt.as_f64(),
                limit: limit.as_f64(),
            });
        }
        let h = self.dt;
        let half = h * c(0.5);
        let mut next = match self.forcing(state)? {
            None => {
                let mut a = state.a.clone();
                let mut u = state.u.clone();
                self.flow.apply_in_place(&mut a, &mut u)?;
                FluidState { a, u, t: state.t + h }
            }
            Some((f0, g0)) => {
                let mut a_pred = state.a.axpy(h, &f0)?;
                let mut u_pred = state.u.axpy(h, &g0)?;
                self.flow.apply_in_place(&mut a_pred, &mut u_pred)?;
                let predicted = FluidState {
                    a: a_pred,
                    u: u_pred,
                    t: state.t + h,
                };
                let (f1, g1) = compute_nonlinearities(&predicted, &self.params)?;
                let mut a = state.a.axpy(half, &f0)?;
                let mut u = state.u.axpy(half, &g0)?;
                self.flow.apply_in_place(&mut a, &mut u)?;
                FluidState {
                    a: a.axpy(half, &f1)?,
                    u: u.axpy(half, &g1)?,
                    t: state.t + h,
                }
            }
        };
        // f has no mean mode by construction; keep the coefficient exactly zero.
        next.a.project_mean_zero();
        let floor = min_density(&next.a);
        if !(floor > T::zero()) {
            return Err(vacuum_error(floor, next.t));
        }
        Ok(next)
    }
}

/// Convenience wrapper building a one-off [`Stepper`].
pub fn step<T: Scalar>(state: &FluidState<T>, dt: T, params: &PhysicalParams<T>) -> Result<FluidState<T>> {
    Stepper::new(state.grid(), dt, params, Dynamics::Full)?.step(state)
}
