//! Physical parameters of the perturbation system around `(ϱ, u) = (1, 0)`
//! with `P(ϱ) = ϱ^γ / γ` (so `P'(1) = 1`) and `2μ∞ + λ∞ = 1`.

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// Density dependence of the Lamé coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ViscosityModel<T> {
    /// `μ ≡ μ∞`, `λ ≡ λ∞`.
    Constant,
    /// `μ(ϱ) = μ∞ ϱ^β`, `λ(ϱ) = λ∞ ϱ^β`.
    PowerLaw { exponent: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams<T> {
    pub mu_inf: T,
    pub lambda_inf: T,
    pub gamma: T,
    pub viscosity: ViscosityModel<T>,
    /// Whether the electrostatic coupling `∇(-Δ)^{-1}a` is present.
    pub poisson: bool,
}

impl<T: Scalar> Default for PhysicalParams<T> {
    fn default() -> Self {
        PhysicalParams {
            mu_inf: c(0.25),
            lambda_inf: c(0.5),
            gamma: c(1.4),
            viscosity: ViscosityModel::Constant,
            poisson: true,
        }
    }
}

impl<T: Scalar> PhysicalParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu_inf > T::zero()) {
            return Err(Error::domain(format!("μ∞ > 0 violated (μ∞ = {})", self.mu_inf)));
        }
        let two = T::one() + T::one();
        if (two * self.mu_inf + self.lambda_inf - T::one()).abs() > c(1e-12) {
            return Err(Error::domain(format!(
                "2μ∞ + λ∞ = 1 violated (μ∞ = {}, λ∞ = {})",
                self.mu_inf, self.lambda_inf
            )));
        }
        if !(self.gamma > T::one()) {
            return Err(Error::domain(format!("γ > 1 violated (γ = {})", self.gamma)));
        }
        Ok(())
    }

    /// `I(a) = a / (1 + a)`.
    #[inline]
    pub fn inertia(&self, a: T) -> T {
        a / (T::one() + a)
    }

    /// `k(a) = P'(1 + a)/(1 + a) - 1 = (1 + a)^{γ-2} - 1`.
    #[inline]
    pub fn pressure_k(&self, a: T) -> T {
        (T::one() + a).powf(self.gamma - c(2.0)) - T::one()
    }

    /// `μ̃(a) = μ(1 + a) - μ(1)`.
    #[inline]
    pub fn mu_tilde(&self, a: T) -> T {
        match self.viscosity {
            ViscosityModel::Constant => T::zero(),
            ViscosityModel::PowerLaw { exponent } => self.mu_inf * ((T::one() + a).powf(exponent) - T::one()),
        }
    }

    /// `λ̃(a) = λ(1 + a) - λ(1)`.
    #[inline]
    pub fn lambda_tilde(&self, a: T) -> T {
        match self.viscosity {
            ViscosityModel::Constant => T::zero(),
            ViscosityModel::PowerLaw { exponent } => self.lambda_inf * ((T::one() + a).powf(exponent) - T::one()),
        }
    }
}
