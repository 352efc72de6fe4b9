use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::ops::{apply_radial, curl, div, grad, inv_neg_laplacian, lambda, leray_p, potential_amplitude};
use crate::spectral::{GridRef, SpectralField, VectorField};

/// Perturbation `(a, u)` of the equilibrium `(1, 0)` at time `t`.
#[derive(Clone, Debug)]
pub struct FluidState<T: Scalar> {
    pub a: SpectralField<T>,
    pub u: VectorField<T>,
    pub t: T,
}

impl<T: Scalar> FluidState<T> {
    pub fn new(a: SpectralField<T>, u: VectorField<T>, t: T) -> Result<Self> {
        a.ensure_same_grid(u.component(0))?;
        Ok(FluidState { a, u, t })
    }

    pub fn zeros(grid: &GridRef<T>) -> Self {
        FluidState {
            a: SpectralField::zeros(grid),
            u: VectorField::zeros(grid),
            t: T::zero(),
        }
    }

    #[inline]
    pub fn grid(&self) -> &GridRef<T> {
        self.a.grid()
    }

    pub fn scaled(&self, factor: T) -> Self {
        FluidState {
            a: self.a.scaled(factor),
            u: self.u.scaled(factor),
            t: self.t,
        }
    }

    pub fn ensure_mean_zero(&self) -> Result<()> {
        if self.a.is_mean_zero() {
            Ok(())
        } else {
            Err(Error::domain("density perturbation a must be mean-zero"))
        }
    }

    /// `ã = Λ^{-1} a`.
    pub fn a_tilde(&self) -> Result<SpectralField<T>> {
        lambda(&self.a, -T::one())
    }

    /// `ω = Λ^{-1} div u`.
    pub fn omega(&self) -> SpectralField<T> {
        potential_amplitude(&self.u)
    }

    /// `Ω = Λ^{-1} curl u` (one component in 2D, three in 3D).
    pub fn vorticity_amplitude(&self) -> Vec<SpectralField<T>> {
        curl(&self.u)
            .into_iter()
            .map(|c| apply_radial(&c, |r| r.recip(), None).expect("curl is mean-zero"))
            .collect()
    }

    /// Solenoidal part `P u`.
    pub fn solenoidal(&self) -> VectorField<T> {
        leray_p(&self.u)
    }

    /// Electrostatic potential `ψ = (-Δ)^{-1} a`.
    pub fn psi(&self) -> Result<SpectralField<T>> {
        inv_neg_laplacian(&self.a)
    }

    /// Effective velocity `w = ∇(-Δ)^{-1}(a - div u)`.
    pub fn effective_velocity(&self) -> Result<VectorField<T>> {
        let source = &self.a - &div(&self.u);
        Ok(grad(&inv_neg_laplacian(&source)?))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.a.max_abs_diff(&other.a).max(self.u.max_abs_diff(&other.u))
    }

    /// Discrete `L²` distance `‖a - a'‖ + ‖u - u'‖`.
    pub fn l2_distance(&self, other: &Self) -> T {
        (&self.a - &other.a).spectral_l2() + self.u.axpy(-T::one(), &other.u).expect("same grid").spectral_l2()
    }
}

/// `ψ = (-Δ)^{-1} a` for a mean-zero density perturbation.
pub fn poisson_potential<T: Scalar>(a: &SpectralField<T>) -> Result<SpectralField<T>> {
    inv_neg_laplacian(a)
}

/// `w = ∇(-Δ)^{-1}(a - div u)`; diagnostic only.
pub fn effective_velocity<T: Scalar>(state: &FluidState<T>) -> Result<VectorField<T>> {
    state.effective_velocity()
}
