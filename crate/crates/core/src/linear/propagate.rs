use num_complex::Complex;

use super::mode::{exponential_unchecked, Mat2};
use crate::error::{Error, Result};
use crate::physics::PhysicalParams;
use crate::scalar::Scalar;
use crate::spectral::{GridRef, SpectralField, VectorField};
use crate::state::FluidState;

/// Exact linear flow over a fixed time span, with the per-mode factors
/// precomputed for one grid.
///
/// Per lattice mode `ξ ≠ 0` the pair `(ã, ω)` is advanced by
/// `exp(t M(|ξ|))`, the solenoidal part of `û` by `e^{-μ∞|ξ|²t}`, and `u` is
/// reassembled as `-Λ^{-1}∇ω + P u`. The mean flow is left unchanged.
#[derive(Clone, Debug)]
pub struct LinearPropagator<T: Scalar> {
    grid: GridRef<T>,
    t: T,
    modes: Vec<Mat2<T>>,
    heat: Vec<T>,
}

impl<T: Scalar> LinearPropagator<T> {
    pub fn new(grid: &GridRef<T>, t: T, params: &PhysicalParams<T>) -> Result<Self> {
        params.validate()?;
        if !(t >= T::zero()) || !t.is_finite() {
            return Err(Error::domain(format!("time must be non-negative, got {t}")));
        }
        let radii = grid.radii();
        let modes = radii.iter().map(|&r| exponential_unchecked(r, t, params.poisson)).collect();
        let heat = radii.iter().map(|&r| (-params.mu_inf * r * r * t).exp()).collect();
        Ok(LinearPropagator {
            grid: grid.clone(),
            t,
            modes,
            heat,
        })
    }

    pub fn time(&self) -> T {
        self.t
    }

    pub fn grid(&self) -> &GridRef<T> {
        &self.grid
    }

    /// Advances `(a, u)` in place.
    pub fn apply_in_place(&self, a: &mut SpectralField<T>, u: &mut VectorField<T>) -> Result<()> {
        if !a.is_mean_zero() {
            return Err(Error::domain("density perturbation a must be mean-zero"));
        }
        if **a.grid() != *self.grid || **u.grid() != *self.grid {
            return Err(Error::structural("fields live on a different grid than the propagator"));
        }
        let d = self.grid.dim();
        let ac = a.coeffs_mut();
        let uc = u.comps_mut();
        let mut uh = [Complex::new(T::zero(), T::zero()); 3];
        for i in 1..self.grid.len() {
            let r = self.grid.radius(i);
            let xi = self.grid.freq(i);
            let mut xh = [T::zero(); 3];
            let mut dot = Complex::new(T::zero(), T::zero());
            for k in 0..d {
                xh[k] = xi[k] / r;
                uh[k] = uc[k].coeffs()[i];
                dot = dot + uh[k] * xh[k];
            }
            // ω̂ = i ξ̂·û and Q û = ξ̂ (ξ̂·û).
            let omega = Complex::new(-dot.im, dot.re);
            let a_tilde = ac[i] / r;
            let [a_new, omega_new] = self.modes[i].apply_complex([a_tilde, omega]);
            ac[i] = a_new * r;
            // ξ̂·û' = -i ω̂'.
            let dot_new = Complex::new(omega_new.im, -omega_new.re);
            let h = self.heat[i];
            for k in 0..d {
                let potential = dot * xh[k];
                uc[k].coeffs_mut()[i] = (uh[k] - potential) * h + dot_new * xh[k];
            }
        }
        Ok(())
    }

    pub fn apply(&self, state: &FluidState<T>) -> Result<FluidState<T>> {
        let mut out = state.clone();
        self.apply_in_place(&mut out.a, &mut out.u)?;
        out.t = state.t + self.t;
        Ok(out)
    }
}

/// Solution at `state.t + t` of the linearised system started from `state`.
pub fn propagate_linear<T: Scalar>(state: &FluidState<T>, t: T, params: &PhysicalParams<T>) -> Result<FluidState<T>> {
    LinearPropagator::new(state.grid(), t, params)?.apply(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ops::{div, grad, leray_p};
    use crate::spectral::{random_field, Grid, Support};
    use std::f64::consts::TAU;

    fn params() -> PhysicalParams<f64> {
        PhysicalParams::default()
    }

    fn random_state(grid: &GridRef<f64>, seed: u64) -> FluidState<f64> {
        let s = Support::Ball { radius: 4.0 };
        let a = random_field(grid, s, seed).unwrap();
        let comps = (0..grid.dim()).map(|k| random_field(grid, s, seed + 1 + k as u64).unwrap()).collect();
        FluidState::new(a, VectorField::new(comps).unwrap(), 0.0).unwrap()
    }

    #[test]
    fn identity_at_zero_time() {
        let g = Grid::<f64>::new(2, 32, 9.0).unwrap();
        let s = random_state(&g, 1);
        let out = propagate_linear(&s, 0.0, &params()).unwrap();
        assert!(out.max_abs_diff(&s) < 1e-15);
    }

    #[test]
    fn solenoidal_tone_is_pure_heat() {
        let g = Grid::<f64>::new(2, 32, TAU).unwrap();
        // u = (sin 3y, 0) is divergence-free with |ξ| = 3.
        let u = VectorField::new(vec![
            SpectralField::from_fn(&g, |x| (3.0 * x[1]).sin()),
            SpectralField::zeros(&g),
        ])
        .unwrap();
        let s = FluidState::new(SpectralField::zeros(&g), u, 0.0).unwrap();
        let t = 0.7;
        let out = propagate_linear(&s, t, &params()).unwrap();
        assert!(out.a.coeffs().iter().all(|z| z.norm() < 1e-15));
        let expect = (-0.25 * 9.0 * t).exp() * s.u.spectral_l2();
        assert!((out.u.spectral_l2() - expect).abs() < 1e-14);
    }

    #[test]
    fn group_property() {
        let g = Grid::<f64>::new(2, 32, 11.0).unwrap();
        let s = random_state(&g, 4);
        let p = params();
        let once = propagate_linear(&s, 1.3, &p).unwrap();
        let twice = propagate_linear(&propagate_linear(&s, 0.5, &p).unwrap(), 0.8, &p).unwrap();
        assert!(once.max_abs_diff(&twice) < 1e-10);
        assert!((once.t - 1.3).abs() < 1e-15);
    }

    #[test]
    fn agrees_with_mode_ode_in_3d() {
        // a single potential mode: check against mode_exponential directly.
        let g = Grid::<f64>::new(3, 8, TAU).unwrap();
        let phi = SpectralField::from_fn(&g, |x| (x[0] + 2.0 * x[2]).cos());
        let u = grad(&phi);
        let a = SpectralField::from_fn(&g, |x| (x[0] + 2.0 * x[2]).sin()).mean_zero();
        let s = FluidState::new(a, u, 0.0).unwrap();
        let t = 0.9;
        let out = propagate_linear(&s, t, &params()).unwrap();
        let r = 5f64.sqrt();
        let e = crate::linear::mode::mode_exponential(r, t, true).unwrap();
        // ã = sin(θ)/r, ω = Λ^{-1}div u = -r cos(θ).
        let omega0 = -r;
        let a_new_sin = r * (e.0[0][0] / r);
        let a_new_cos = r * (e.0[0][1] * omega0);
        let expect = SpectralField::from_fn(&g, |x| {
            let th = x[0] + 2.0 * x[2];
            a_new_sin * th.sin() + a_new_cos * th.cos()
        });
        assert!(out.a.max_abs_diff(&expect) < 1e-13);
        // velocity stays potential.
        let p = leray_p(&out.u);
        assert!(p.comps().iter().all(|c| c.coeffs().iter().all(|z| z.norm() < 1e-13)));
        let _ = div(&out.u);
    }

    #[test]
    fn rejects_nonzero_mean_density() {
        let g = Grid::<f64>::new(2, 16, TAU).unwrap();
        let mut s = random_state(&g, 2);
        s.a.coeffs_mut()[0] = Complex::new(0.1, 0.0);
        assert!(matches!(propagate_linear(&s, 1.0, &params()), Err(Error::Domain(_))));
    }

    #[test]
    fn solenoidal_energy_nonincreasing() {
        let g = Grid::<f64>::new(2, 32, 12.0).unwrap();
        let s = random_state(&g, 7);
        let p = params();
        let mut last = leray_p(&s.u).spectral_l2();
        let prop = LinearPropagator::new(&g, 0.25, &p).unwrap();
        let mut cur = s;
        for _ in 0..20 {
            cur = prop.apply(&cur).unwrap();
            let e = leray_p(&cur.u).spectral_l2();
            assert!(e <= last + 1e-15);
            last = e;
        }
    }
}
