use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;

use super::grid::{Grid, GridRef};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Real scalar field on a periodic grid, stored as its full complex Fourier
/// spectrum. Real-valuedness is the conjugate symmetry
/// `coeffs(-ξ) = conj(coeffs(ξ))`.
#[derive(Clone, Debug)]
pub struct SpectralField<T: Scalar> {
    grid: GridRef<T>,
    coeffs: Vec<Complex<T>>,
}

#[inline]
pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Scalar> SpectralField<T> {
    pub fn zeros(grid: &GridRef<T>) -> Self {
        SpectralField {
            grid: Arc::clone(grid),
            coeffs: vec![czero(); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &GridRef<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::structural(format!(
                "{} coefficients for a grid of {} points",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(SpectralField {
            grid: Arc::clone(grid),
            coeffs,
        })
    }

    /// Forward transform of real physical samples (flat-index order).
    pub fn from_physical(grid: &GridRef<T>, samples: &[T]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::structural(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.len()
            )));
        }
        let mut buf: Vec<Complex<T>> = samples.iter().map(|&x| Complex::new(x, T::zero())).collect();
        grid.forward(&mut buf);
        Ok(SpectralField {
            grid: Arc::clone(grid),
            coeffs: buf,
        })
    }

    /// Samples `f` at the grid points and transforms.
    pub fn from_fn(grid: &GridRef<T>, f: impl Fn([T; 3]) -> T) -> Self {
        let samples: Vec<T> = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        Self::from_physical(grid, &samples).expect("sample count matches grid")
    }

    #[inline]
    pub fn grid(&self) -> &GridRef<T> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Complex physical samples; the imaginary parts measure asymmetry.
    pub fn to_physical_complex(&self) -> Vec<Complex<T>> {
        let mut buf = self.coeffs.clone();
        self.grid.inverse(&mut buf);
        buf
    }

    /// Real physical samples in flat-index order.
    pub fn to_physical(&self) -> Vec<T> {
        self.to_physical_complex().into_iter().map(|z| z.re).collect()
    }

    /// Inverse transform followed by forward transform.
    pub fn transform_roundtrip(&self) -> Self {
        let mut buf = self.to_physical_complex();
        self.grid.forward(&mut buf);
        SpectralField {
            grid: Arc::clone(&self.grid),
            coeffs: buf,
        }
    }

    /// Mean-zero holds when the `ξ = 0` coefficient is exactly zero.
    #[inline]
    pub fn is_mean_zero(&self) -> bool {
        self.coeffs[0] == czero()
    }

    /// Spatial mean `coeffs(0)` (real part).
    pub fn mean(&self) -> T {
        self.coeffs[0].re
    }

    pub fn project_mean_zero(&mut self) {
        self.coeffs[0] = czero();
    }

    pub fn mean_zero(mut self) -> Self {
        self.project_mean_zero();
        self
    }

    /// Largest violation of `coeffs(-ξ) = conj(coeffs(ξ))`, Nyquist modes excluded.
    pub fn symmetry_defect(&self) -> T {
        let g = &self.grid;
        (0..g.len())
            .filter(|&i| !g.is_nyquist(i))
            .map(|i| (self.coeffs[g.mirror(i)] - self.coeffs[i].conj()).norm())
            .fold(T::zero(), T::max)
    }

    /// Replaces each coefficient pair by its conjugate-symmetric average and
    /// zeroes Nyquist modes.
    pub fn symmetrize(&mut self) {
        let g = Arc::clone(&self.grid);
        let half = T::one() / (T::one() + T::one());
        for i in 0..g.len() {
            if g.is_nyquist(i) {
                self.coeffs[i] = czero();
                continue;
            }
            let m = g.mirror(i);
            if m < i {
                continue;
            }
            let avg = (self.coeffs[i] + self.coeffs[m].conj()) * half;
            self.coeffs[i] = avg;
            self.coeffs[m] = avg.conj();
        }
    }

    /// Applies the 2/3 truncation mask.
    pub fn dealias(&mut self) {
        let g = Arc::clone(&self.grid);
        for (i, v) in self.coeffs.iter_mut().enumerate() {
            if !g.dealias_keep(i) {
                *v = czero();
            }
        }
    }

    /// Discrete `L²(T^d)` norm from the coefficients (Parseval).
    pub fn spectral_l2(&self) -> T {
        let sum: T = self.coeffs.iter().map(|z| z.norm_sqr()).sum();
        (sum * self.grid.volume()).sqrt()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::structural(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid, other.grid
            )))
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        self.map_coeffs(|_, z| z * factor)
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: T, other: &Self) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| *a + *b * factor)
            .collect();
        Ok(SpectralField {
            grid: Arc::clone(&self.grid),
            coeffs,
        })
    }

    pub(crate) fn map_coeffs(&self, f: impl Fn(usize, Complex<T>) -> Complex<T>) -> Self {
        SpectralField {
            grid: Arc::clone(&self.grid),
            coeffs: self.coeffs.iter().enumerate().map(|(i, &z)| f(i, z)).collect(),
        }
    }

    /// Largest coefficient difference; grids must match.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert!(self.same_grid(other), "grid mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Scalar> Grid<T> {
    /// Convenience: the zero field on this grid.
    pub fn zero_field(self: &Arc<Self>) -> SpectralField<T> {
        SpectralField::zeros(self)
    }
}

impl<'a, T: Scalar> Add<&'a SpectralField<T>> for &'a SpectralField<T> {
    type Output = SpectralField<T>;
    fn add(self, rhs: &'a SpectralField<T>) -> SpectralField<T> {
        self.axpy(T::one(), rhs).expect("grid mismatch in field addition")
    }
}

impl<'a, T: Scalar> Sub<&'a SpectralField<T>> for &'a SpectralField<T> {
    type Output = SpectralField<T>;
    fn sub(self, rhs: &'a SpectralField<T>) -> SpectralField<T> {
        self.axpy(-T::one(), rhs).expect("grid mismatch in field subtraction")
    }
}

impl<T: Scalar> Mul<T> for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn mul(self, rhs: T) -> SpectralField<T> {
        self.scaled(rhs)
    }
}

impl<T: Scalar> Neg for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn neg(self) -> SpectralField<T> {
        self.scaled(-T::one())
    }
}

/// A `d`-component real vector field.
#[derive(Clone, Debug)]
pub struct VectorField<T: Scalar> {
    comps: Vec<SpectralField<T>>,
}

impl<T: Scalar> VectorField<T> {
    pub fn new(comps: Vec<SpectralField<T>>) -> Result<Self> {
        let first = comps
            .first()
            .ok_or_else(|| Error::structural("vector field needs at least one component"))?;
        if comps.len() != first.grid().dim() {
            return Err(Error::structural(format!(
                "{} components on a {}-dimensional grid",
                comps.len(),
                first.grid().dim()
            )));
        }
        for c in &comps[1..] {
            first.ensure_same_grid(c)?;
        }
        Ok(VectorField { comps })
    }

    pub fn zeros(grid: &GridRef<T>) -> Self {
        VectorField {
            comps: (0..grid.dim()).map(|_| SpectralField::zeros(grid)).collect(),
        }
    }

    #[inline]
    pub fn grid(&self) -> &GridRef<T> {
        self.comps[0].grid()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    #[inline]
    pub fn comps(&self) -> &[SpectralField<T>] {
        &self.comps
    }

    #[inline]
    pub fn comps_mut(&mut self) -> &mut [SpectralField<T>] {
        &mut self.comps
    }

    #[inline]
    pub fn component(&self, i: usize) -> &SpectralField<T> {
        &self.comps[i]
    }

    pub fn into_comps(self) -> Vec<SpectralField<T>> {
        self.comps
    }

    pub fn scaled(&self, factor: T) -> Self {
        VectorField {
            comps: self.comps.iter().map(|c| c.scaled(factor)).collect(),
        }
    }

    pub fn axpy(&self, factor: T, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::structural("vector fields of different dimension"));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.axpy(factor, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField { comps })
    }

    pub fn spectral_l2(&self) -> T {
        self.comps
            .iter()
            .map(|c| c.spectral_l2().powi(2))
            .sum::<T>()
            .sqrt()
    }

    /// Physical samples of each component.
    pub fn to_physical(&self) -> Vec<Vec<T>> {
        self.comps.iter().map(|c| c.to_physical()).collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(T::zero(), T::max)
    }

    pub fn symmetry_defect(&self) -> T {
        self.comps
            .iter()
            .map(|c| c.symmetry_defect())
            .fold(T::zero(), T::max)
    }
}
