//! Initial data for simulations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};
use crate::spectral::{random_field, scaled_to_sup, GridRef, SpectralField, Support, VectorField};
use crate::state::FluidState;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialProfile {
    /// Localised data of width `w`: a mean-free density well
    /// `-A(1 - ρ²/(d w²)) e^{-ρ²/(2w²)}` for `a` and a Gaussian jet
    /// `A e^{-ρ²/(2w²)} e` for `u`. Centres (within `w` of the box centre)
    /// and the jet direction `e` are drawn from the seed.
    Bump { width: f64, amplitude: f64 },
    /// Band-limited random fields on `|ξ| ≤ radius`, each scaled to sup-norm
    /// `amplitude`; the sign of `a` is chosen so that `min a = -amplitude`.
    Random { radius: f64, amplitude: f64 },
}

/// Squared periodic distance between `x` and `centre`.
fn periodic_dist2<T: Scalar>(x: &[T; 3], centre: &[f64; 3], dim: usize, side: f64) -> f64 {
    (0..dim)
        .map(|k| {
            let mut dx = x[k].as_f64() - centre[k];
            dx -= side * (dx / side).round();
            dx * dx
        })
        .sum()
}

pub fn initial_state<T: Scalar>(grid: &GridRef<T>, profile: InitialProfile, seed: u64) -> Result<FluidState<T>> {
    let d = grid.dim();
    let (mut a, mut u) = match profile {
        InitialProfile::Bump { width, amplitude } => {
            if !(width > 0.0 && amplitude.is_finite()) {
                return Err(Error::domain("bump width must be positive and amplitude finite"));
            }
            let side = grid.side().as_f64();
            if width * 8.0 > side {
                return Err(Error::domain(format!("bump width {width} too large for a box of side {side}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut centre = || {
                let mut p = [0.0; 3];
                for v in p.iter_mut().take(d) {
                    *v = 0.5 * side + width * rng.random_range(-1.0..1.0);
                }
                p
            };
            let ca = centre();
            let cu = centre();
            let mut dir = [0.0f64; 3];
            for v in dir.iter_mut().take(d) {
                *v = StandardNormal.sample(&mut rng);
            }
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            let w2 = width * width;
            let a = SpectralField::from_fn(grid, |x| {
                let r2 = periodic_dist2(&x, &ca, d, side);
                c(-amplitude * (1.0 - r2 / (d as f64 * w2)) * (-0.5 * r2 / w2).exp())
            });
            let comps = (0..d)
                .map(|k| {
                    let e = dir[k] / norm;
                    SpectralField::from_fn(grid, |x| {
                        let r2 = periodic_dist2(&x, &cu, d, side);
                        c(amplitude * e * (-0.5 * r2 / w2).exp())
                    })
                })
                .collect();
            (a, VectorField::new(comps)?)
        }
        InitialProfile::Random { radius, amplitude } => {
            let support = Support::Ball { radius: c(radius) };
            let amp = c::<T>(amplitude);
            let mut a = scaled_to_sup(&random_field(grid, support, seed)?.mean_zero(), amp)?;
            let samples = a.to_physical();
            let lo = samples.iter().fold(T::zero(), |m, &x| m.min(x));
            let hi = samples.iter().fold(T::zero(), |m, &x| m.max(x));
            if hi > -lo {
                a = a.scaled(-T::one());
            }
            let comps = (0..d)
                .map(|k| scaled_to_sup(&random_field(grid, support, seed.wrapping_add(1 + k as u64))?, amp))
                .collect::<Result<Vec<_>>>()?;
            (a, VectorField::new(comps)?)
        }
    };
    a.dealias();
    a.symmetrize();
    a.project_mean_zero();
    for comp in u.comps_mut() {
        comp.dealias();
        comp.symmetrize();
    }
    FluidState::new(a, u, T::zero())
}
