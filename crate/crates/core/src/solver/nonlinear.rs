//! Pseudo-spectral evaluation of the right-hand sides
//! `f = -div(a u)` and
//! `g = -u·∇u - I(a)Au - k(a)∇a + (1+a)^{-1} div(2μ̃(a)D(u) + λ̃(a) div u Id)`.
//!
//! Products and rational functions of `a` are formed at grid points;
//! derivatives are spectral; every assembled term is 2/3-truncated.

use crate::error::{Error, Result};
use crate::physics::{PhysicalParams, ViscosityModel};
use crate::scalar::Scalar;
use crate::spectral::ops::{div, laplacian, partial};
use crate::spectral::{SpectralField, VectorField};
use crate::state::FluidState;

/// Smallest value of `1 + a` over the grid points.
pub fn min_density<T: Scalar>(a: &SpectralField<T>) -> T {
    min_of(&a.to_physical())
}

fn min_of<T: Scalar>(samples: &[T]) -> T {
    T::one() + samples.iter().copied().fold(T::infinity(), T::min)
}

pub(crate) fn vacuum_error<T: Scalar>(min: T, t: T) -> Error {
    Error::Vacuum {
        min_density: min.as_f64(),
        time: t.as_f64(),
    }
}

fn truncated<T: Scalar>(state: &FluidState<T>, samples: &[T]) -> SpectralField<T> {
    let mut f = SpectralField::from_physical(state.grid(), samples).expect("sample count matches grid");
    f.dealias();
    f
}

/// `(f, g)` for the current state. Fails with a vacuum error if `1 + a ≤ 0`
/// at any grid point.
pub fn compute_nonlinearities<T: Scalar>(
    state: &FluidState<T>,
    params: &PhysicalParams<T>,
) -> Result<(SpectralField<T>, VectorField<T>)> {
    let d = state.grid().dim();
    let n = state.grid().len();
    let a = state.a.to_physical();
    let floor = min_of(&a);
    if !(floor > T::zero()) {
        return Err(vacuum_error(floor, state.t));
    }
    let u: Vec<Vec<T>> = state.u.to_physical();

    // f = -div(a u)
    let flux: Vec<SpectralField<T>> = (0..d)
        .map(|i| {
            let prod: Vec<T> = a.iter().zip(&u[i]).map(|(&x, &y)| x * y).collect();
            truncated(state, &prod)
        })
        .collect();
    let mut f = -&div(&VectorField::new(flux).expect("one flux per axis"));
    f.dealias();

    // Pointwise coefficients.
    let inertia: Vec<T> = a.iter().map(|&x| params.inertia(x)).collect();
    let kpress: Vec<T> = a.iter().map(|&x| params.pressure_k(x)).collect();

    let grad_u: Vec<Vec<Vec<T>>> = (0..d)
        .map(|i| (0..d).map(|j| partial(state.u.component(i), j).to_physical()).collect())
        .collect();
    let grad_a: Vec<Vec<T>> = (0..d).map(|j| partial(&state.a, j).to_physical()).collect();
    let div_u_hat = div(&state.u);
    let lame = params.lambda_inf + params.mu_inf;
    let au: Vec<Vec<T>> = (0..d)
        .map(|i| {
            let lap = laplacian(state.u.component(i));
            let gd = partial(&div_u_hat, i);
            lap.axpy(lame / params.mu_inf, &gd)
                .expect("same grid")
                .scaled(params.mu_inf)
                .to_physical()
        })
        .collect();

    let mut g: Vec<Vec<T>> = (0..d)
        .map(|i| {
            (0..n)
                .map(|x| {
                    let mut adv = T::zero();
                    for j in 0..d {
                        adv = adv + u[j][x] * grad_u[i][j][x];
                    }
                    -adv - inertia[x] * au[i][x] - kpress[x] * grad_a[i][x]
                })
                .collect()
        })
        .collect();

    if let ViscosityModel::PowerLaw { .. } = params.viscosity {
        let div_u = div_u_hat.to_physical();
        let mu_t: Vec<T> = a.iter().map(|&x| params.mu_tilde(x)).collect();
        let lam_t: Vec<T> = a.iter().map(|&x| params.lambda_tilde(x)).collect();
        for i in 0..d {
            // Σ_j ∂_j (2μ̃ D_ij) + ∂_i (λ̃ div u)
            let mut acc = SpectralField::zeros(state.grid());
            for j in 0..d {
                let mut stress: Vec<T> = (0..n)
                    .map(|x| mu_t[x] * (grad_u[i][j][x] + grad_u[j][i][x]))
                    .collect();
                if i == j {
                    for x in 0..n {
                        stress[x] = stress[x] + lam_t[x] * div_u[x];
                    }
                }
                acc = &acc + &partial(&truncated(state, &stress), j);
            }
            let acc = acc.to_physical();
            for x in 0..n {
                g[i][x] = g[i][x] + acc[x] / (T::one() + a[x]);
            }
        }
    }

    let g = VectorField::new(g.iter().map(|gi| truncated(state, gi)).collect()).expect("one component per axis");
    Ok((f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{lp_norm, random_field, scaled_to_sup, Grid, Support};
    use std::f64::consts::TAU;

    fn state(a_amp: f64, seed: u64) -> FluidState<f64> {
        let g = Grid::<f64>::new(2, 32, TAU).unwrap();
        let s = Support::Ball { radius: 3.0 };
        let mut a = random_field(&g, s, seed).unwrap().scaled(a_amp);
        a.dealias();
        if a_amp > 0.0 {
            a = scaled_to_sup(&a, a_amp).unwrap();
        }
        let u = VectorField::new(vec![
            scaled_to_sup(&random_field(&g, s, seed + 1).unwrap(), 0.1).unwrap(),
            scaled_to_sup(&random_field(&g, s, seed + 2).unwrap(), 0.1).unwrap(),
        ])
        .unwrap();
        FluidState::new(a, u, 0.0).unwrap()
    }

    #[test]
    fn zero_density_leaves_advection_only() {
        let s = state(0.0, 1);
        let (f, g) = compute_nonlinearities(&s, &PhysicalParams::default()).unwrap();
        assert!(f.coeffs().iter().all(|z| z.norm() < 1e-16));
        // -u·∇u by direct spectral differentiation.
        let u = s.u.to_physical();
        for i in 0..2 {
            let du: Vec<Vec<f64>> = (0..2).map(|j| partial(s.u.component(i), j).to_physical()).collect();
            let adv: Vec<f64> = (0..u[0].len()).map(|x| -(u[0][x] * du[0][x] + u[1][x] * du[1][x])).collect();
            let mut expect = SpectralField::from_physical(s.grid(), &adv).unwrap();
            expect.dealias();
            assert!(g.component(i).max_abs_diff(&expect) < 1e-14);
        }
    }

    #[test]
    fn density_flux_has_zero_mean() {
        let s = state(0.1, 4);
        let (f, _) = compute_nonlinearities(&s, &PhysicalParams::default()).unwrap();
        assert!(f.is_mean_zero());
        let mean: f64 = f.to_physical().iter().sum::<f64>() / s.grid().len() as f64;
        assert!(mean.abs() < 1e-15);
    }

    #[test]
    fn pressure_term_vanishes_for_gamma_two() {
        let s = state(0.1, 7);
        let at_rest = FluidState::new(s.a.clone(), VectorField::zeros(s.grid()), 0.0).unwrap();
        let p2 = PhysicalParams {
            gamma: 2.0,
            ..Default::default()
        };
        // u = 0 leaves only -k(a)∇a in g.
        let (_, g2) = compute_nonlinearities(&at_rest, &p2).unwrap();
        assert_eq!(g2.spectral_l2(), 0.0);
        let (_, g14) = compute_nonlinearities(&at_rest, &PhysicalParams::default()).unwrap();
        assert!(g14.spectral_l2() > 1e-4);
    }

    #[test]
    fn constant_viscosity_drops_stress_terms() {
        let s = state(0.2, 9);
        let zero_beta = PhysicalParams {
            viscosity: ViscosityModel::PowerLaw { exponent: 0.0 },
            ..Default::default()
        };
        let (_, g1) = compute_nonlinearities(&s, &PhysicalParams::default()).unwrap();
        let (_, g2) = compute_nonlinearities(&s, &zero_beta).unwrap();
        assert!(g1.max_abs_diff(&g2) < 1e-15);
        let beta = PhysicalParams {
            viscosity: ViscosityModel::PowerLaw { exponent: 1.0 },
            ..Default::default()
        };
        let (_, g3) = compute_nonlinearities(&s, &beta).unwrap();
        assert!(g1.max_abs_diff(&g3) > 1e-6);
    }

    #[test]
    fn vacuum_is_reported() {
        let g = Grid::<f64>::new(2, 16, TAU).unwrap();
        let a = SpectralField::from_fn(&g, |x| 1.5 * x[0].cos()).mean_zero();
        let s = FluidState::new(a, VectorField::zeros(&g), 2.0).unwrap();
        match compute_nonlinearities(&s, &PhysicalParams::default()) {
            Err(Error::Vacuum { min_density, time }) => {
                assert!(min_density < 0.0);
                assert_eq!(time, 2.0);
            }
            other => panic!("expected vacuum, got {other:?}"),
        }
        assert!(lp_norm(&s.a, 2.0).unwrap() > 0.0);
    }
}
