use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// Periodic torus `[0, L)^d` sampled with `n` points per axis, together with
/// its discrete frequency lattice and cached FFT plans.
///
/// Lattice index `i` on one axis maps to the integer wavenumber `i` for
/// `i < n/2` and `i - n` otherwise, so the Nyquist index `n/2` carries
/// wavenumber `-n/2`. Frequencies are wavenumbers times `2π/L`.
pub struct Grid<T: Scalar> {
    dim: usize,
    n: usize,
    side: T,
    radii: Vec<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

pub type GridRef<T> = Arc<Grid<T>>;

impl<T: Scalar> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("side", &self.side)
            .finish()
    }
}

impl<T: Scalar> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n && self.side == other.side
    }
}

impl<T: Scalar> Grid<T> {
    pub fn new(dim: usize, n: usize, side: T) -> Result<GridRef<T>> {
        if !(2..=3).contains(&dim) {
            return Err(Error::domain(format!("dimension must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::domain(format!(
                "points per axis must be a power of two >= 8, got {n}"
            )));
        }
        if !(side > T::zero()) || !side.is_finite() {
            return Err(Error::domain(format!("side length must be positive, got {side}")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let mut grid = Grid {
            dim,
            n,
            side,
            radii: Vec::new(),
            forward,
            inverse,
        };
        grid.radii = (0..grid.len()).map(|idx| grid.radius_uncached(idx)).collect();
        Ok(Arc::new(grid))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn side(&self) -> T {
        self.side
    }

    /// Total number of lattice points `n^d`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn volume(&self) -> T {
        self.side.powi(self.dim as i32)
    }

    /// Grid spacing `L / n`.
    pub fn spacing(&self) -> T {
        self.side / c::<T>(self.n as f64)
    }

    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    /// Smallest nonzero frequency magnitude `2π/L`.
    pub fn k_min(&self) -> T {
        T::TAU() / self.side
    }

    /// Largest frequency magnitude present on the lattice (a corner mode).
    pub fn max_radius(&self) -> T {
        self.radii.iter().copied().fold(T::zero(), T::max)
    }

    /// Smallest nonzero frequency magnitude present on the lattice.
    pub fn min_radius(&self) -> T {
        self.k_min()
    }

    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Per-axis lattice indices of a flat index (unused axes are zero).
    #[inline]
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            2 => [idx / n, idx % n, 0],
            _ => [idx / (n * n), (idx / n) % n, idx % n],
        }
    }

    #[inline]
    pub fn flat_index(&self, multi: [usize; 3]) -> usize {
        let n = self.n;
        match self.dim {
            2 => multi[0] * n + multi[1],
            _ => (multi[0] * n + multi[1]) * n + multi[2],
        }
    }

    /// Integer wave vector of a flat index.
    #[inline]
    pub fn wave_vector(&self, idx: usize) -> [i64; 3] {
        let m = self.multi_index(idx);
        let mut k = [0i64; 3];
        for a in 0..self.dim {
            k[a] = self.wavenumber(m[a]);
        }
        k
    }

    /// Flat index holding a given integer wave vector, if representable.
    pub fn index_of(&self, k: [i64; 3]) -> Option<usize> {
        let n = self.n as i64;
        let mut m = [0usize; 3];
        for a in 0..self.dim {
            if k[a] < -n / 2 || k[a] >= n / 2 {
                return None;
            }
            m[a] = k[a].rem_euclid(n) as usize;
        }
        Some(self.flat_index(m))
    }

    /// Physical frequency vector `ξ` of a flat index.
    #[inline]
    pub fn freq(&self, idx: usize) -> [T; 3] {
        let k = self.wave_vector(idx);
        let kmin = self.k_min();
        [
            c::<T>(k[0] as f64) * kmin,
            c::<T>(k[1] as f64) * kmin,
            c::<T>(k[2] as f64) * kmin,
        ]
    }

    #[inline]
    pub fn radius(&self, idx: usize) -> T {
        self.radii[idx]
    }

    /// `|ξ|` for every lattice point, in flat-index order.
    #[inline]
    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    fn radius_uncached(&self, idx: usize) -> T {
        let xi = self.freq(idx);
        (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
    }

    /// Flat index of the mirrored frequency `-ξ`.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        let n = self.n;
        let m = self.multi_index(idx);
        let mut r = [0usize; 3];
        for a in 0..self.dim {
            r[a] = (n - m[a]) % n;
        }
        self.flat_index(r)
    }

    /// True when any component sits on the Nyquist index `n/2`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let m = self.multi_index(idx);
        (0..self.dim).any(|a| m[a] == self.n / 2)
    }

    /// 2/3-rule mask: keeps modes with `3|k_i| < n` on every axis.
    pub fn dealias_keep(&self, idx: usize) -> bool {
        let k = self.wave_vector(idx);
        let n = self.n as i64;
        (0..self.dim).all(|a| 3 * k[a].abs() < n)
    }

    /// Physical coordinates of a flat index.
    pub fn position(&self, idx: usize) -> [T; 3] {
        let m = self.multi_index(idx);
        let h = self.spacing();
        [
            c::<T>(m[0] as f64) * h,
            c::<T>(m[1] as f64) * h,
            c::<T>(m[2] as f64) * h,
        ]
    }

    /// Forward transform in place, normalised so that
    /// `f(x) = Σ_k coeffs[k] e^{i ξ_k·x}`.
    pub(crate) fn forward(&self, data: &mut [Complex<T>]) {
        self.transform(data, false);
        let scale = T::one() / c::<T>(self.len() as f64);
        for v in data.iter_mut() {
            *v = *v * scale;
        }
    }

    /// Inverse transform in place (no scaling; synthesis of the Fourier series).
    pub(crate) fn inverse(&self, data: &mut [Complex<T>]) {
        self.transform(data, true);
    }

    fn transform(&self, data: &mut [Complex<T>], inverse: bool) {
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let plan = if inverse { &self.inverse } else { &self.forward };
        let n = self.n;
        let total = self.len();
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
        // Last axis is contiguous.
        plan.process_with_scratch(data, &mut scratch);
        if self.dim == 1 {
            return;
        }
        let mut buf = vec![Complex::new(T::zero(), T::zero()); total];
        for axis in 0..self.dim - 1 {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            // Gather every line along `axis` into contiguous storage.
            let mut line = 0;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    let dst = &mut buf[line * n..(line + 1) * n];
                    for (m, d) in dst.iter_mut().enumerate() {
                        *d = data[base + m * stride];
                    }
                    line += 1;
                }
            }
            plan.process_with_scratch(&mut buf, &mut scratch);
            let mut line = 0;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let base = outer + inner;
                    let src = &buf[line * n..(line + 1) * n];
                    for (m, s) in src.iter().enumerate() {
                        data[base + m * stride] = *s;
                    }
                    line += 1;
                }
            }
        }
    }
}
