//! Reproducible real-valued random fields with prescribed spectral support.
//!
//! Coefficients are drawn by walking the integer wave vectors of the support
//! in a fixed lexicographic order that does not depend on the grid size, so
//! the same seed yields the same function on every grid that resolves it.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::field::SpectralField;
use super::grid::GridRef;
use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// Spectral support of a random field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support<T> {
    /// `0 < |ξ| ≤ radius`.
    Ball { radius: T },
    /// Open dyadic annulus `3/4·2^j < |ξ| < 8/3·2^j` (the support of `φ(2^{-j}·)`).
    Annulus { j: i32 },
    /// `inner ≤ |ξ| ≤ outer`.
    Shell { inner: T, outer: T },
}

impl<T: Scalar> Support<T> {
    pub fn contains(&self, r: T) -> bool {
        if r <= T::zero() {
            return false;
        }
        match *self {
            Support::Ball { radius } => r <= radius,
            Support::Annulus { j } => {
                let s = c::<T>(2f64.powi(j));
                r > c::<T>(0.75) * s && r < c::<T>(8.0 / 3.0) * s
            }
            Support::Shell { inner, outer } => r >= inner && r <= outer,
        }
    }

    pub fn outer_radius(&self) -> T {
        match *self {
            Support::Ball { radius } => radius,
            Support::Annulus { j } => c::<T>(8.0 / 3.0 * 2f64.powi(j)),
            Support::Shell { outer, .. } => outer,
        }
    }
}

/// I.i.d. complex Gaussian coefficients (unit variance) on `support`,
/// symmetrised to a real, mean-zero field.
pub fn random_field<T: Scalar>(grid: &GridRef<T>, support: Support<T>, seed: u64) -> Result<SpectralField<T>> {
    let kmin = grid.k_min();
    let kmax = (support.outer_radius() / kmin).floor().to_i64().unwrap_or(0).max(0);
    let d = grid.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = SpectralField::zeros(grid);
    let mut placed = 0usize;
    let inv_sqrt2 = c::<T>(std::f64::consts::FRAC_1_SQRT_2);
    let side = (2 * kmax + 1) as usize;
    let total = side.pow(d as u32);
    for lin in 0..total {
        let mut k = [0i64; 3];
        let mut rest = lin;
        for a in (0..d).rev() {
            k[a] = (rest % side) as i64 - kmax;
            rest /= side;
        }
        // One representative per ± pair: first nonzero component positive.
        let lead = k[..d].iter().copied().find(|&x| x != 0);
        if !matches!(lead, Some(x) if x > 0) {
            continue;
        }
        let r = kmin * c::<T>(((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt());
        if !support.contains(r) {
            continue;
        }
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let z = Complex::new(c::<T>(re), c::<T>(im)) * inv_sqrt2;
        let neg = [-k[0], -k[1], -k[2]];
        if let (Some(i), Some(j)) = (grid.index_of(k), grid.index_of(neg)) {
            if grid.is_nyquist(i) || grid.is_nyquist(j) {
                continue;
            }
            field.coeffs_mut()[i] = z;
            field.coeffs_mut()[j] = z.conj();
            placed += 1;
        }
    }
    if placed == 0 {
        return Err(Error::domain(format!(
            "support {support:?} contains no representable lattice frequency"
        )));
    }
    Ok(field)
}

/// Rescales `field` so that `max |f(x)|` over the grid equals `target`.
pub fn scaled_to_sup<T: Scalar>(field: &SpectralField<T>, target: T) -> Result<SpectralField<T>> {
    let sup = field.to_physical().into_iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if !(sup > T::zero()) {
        return Err(Error::domain("cannot rescale a field that vanishes identically"));
    }
    Ok(field.scaled(target / sup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;

    #[test]
    fn deterministic_per_seed() {
        let g = Grid::<f64>::new(2, 32, 6.0).unwrap();
        let a = random_field(&g, Support::Ball { radius: 10.0 }, 42).unwrap();
        let b = random_field(&g, Support::Ball { radius: 10.0 }, 42).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert!(a.is_mean_zero());
        assert!(a.symmetry_defect() == 0.0);
    }

    #[test]
    fn different_seeds_differ() {
        let g = Grid::<f64>::new(2, 32, 6.0).unwrap();
        let a = random_field(&g, Support::Ball { radius: 10.0 }, 1).unwrap();
        let b = random_field(&g, Support::Ball { radius: 10.0 }, 2).unwrap();
        let diff = (&a - &b).spectral_l2();
        assert!(diff > 0.1 * a.spectral_l2());
    }

    #[test]
    fn grid_independent_draws() {
        let g1 = Grid::<f64>::new(2, 32, 6.0).unwrap();
        let g2 = Grid::<f64>::new(2, 64, 6.0).unwrap();
        let a = random_field(&g1, Support::Ball { radius: 8.0 }, 7).unwrap();
        let b = random_field(&g2, Support::Ball { radius: 8.0 }, 7).unwrap();
        for i in 0..g1.len() {
            let k = g1.wave_vector(i);
            if let Some(j) = g2.index_of(k) {
                assert_eq!(a.coeffs()[i], b.coeffs()[j]);
            }
        }
        assert!((a.spectral_l2() - b.spectral_l2()).abs() < 1e-12);
    }

    #[test]
    fn empty_support_is_domain_error() {
        let g = Grid::<f64>::new(2, 16, 1.0).unwrap();
        // k_min = 2π, so nothing lies below radius 1.
        let err = random_field(&g, Support::Ball { radius: 1.0 }, 0).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
