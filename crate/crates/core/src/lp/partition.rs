use crate::scalar::{c, Scalar};
use crate::spectral::GridRef;

/// Smooth radial cutoff: `χ = 1` on `[0, 3/4]`, `χ = 0` on `[4/3, ∞)`, with
/// the `exp(-1/x)` step in between. Nonincreasing.
pub fn chi<T: Scalar>(r: T) -> T {
    let lo = c::<T>(0.75);
    let hi = c::<T>(4.0 / 3.0);
    if r <= lo {
        return T::one();
    }
    if r >= hi {
        return T::zero();
    }
    let x = (hi - r) / (hi - lo);
    let a = (-x.recip()).exp();
    let b = (-(T::one() - x).recip()).exp();
    a / (a + b)
}

/// Annular bump `φ(r) = χ(r/2) - χ(r)`, supported in `[3/4, 8/3]`.
pub fn phi<T: Scalar>(r: T) -> T {
    chi(r * c::<T>(0.5)) - chi(r)
}

#[inline]
pub(crate) fn pow2<T: Scalar>(j: i32) -> T {
    c::<T>(2f64.powi(j))
}

/// Homogeneous dyadic partition of unity restricted to the dyadic indices
/// that see at least one nonzero lattice frequency of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicPartition {
    pub j_min: i32,
    pub j_max: i32,
}

impl DyadicPartition {
    /// Smallest range `[j_min, j_max]` such that `Σ_j φ(2^{-j}r) = 1` for every
    /// radius in `[r_min, r_max]`.
    pub fn covering<T: Scalar>(r_min: T, r_max: T) -> Self {
        let rmin = r_min.as_f64();
        let rmax = r_max.as_f64();
        // φ(2^{-j}r) ≠ 0 needs 3/4·2^j < r < 8/3·2^j.
        let mut j_min = rmin.log2().floor() as i32 + 2;
        while 8.0 / 3.0 * 2f64.powi(j_min - 1) > rmin {
            j_min -= 1;
        }
        let mut j_max = rmax.log2().ceil() as i32 - 2;
        while 0.75 * 2f64.powi(j_max + 1) < rmax {
            j_max += 1;
        }
        DyadicPartition { j_min, j_max }
    }

    pub fn for_grid<T: Scalar>(grid: &GridRef<T>) -> Self {
        Self::covering(grid.min_radius(), grid.max_radius())
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> + Clone {
        self.j_min..=self.j_max
    }

    pub fn len(&self) -> usize {
        (self.j_max - self.j_min + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Σ_{j ∈ range} φ(2^{-j} r)`.
    pub fn sum_at<T: Scalar>(&self, r: T) -> T {
        self.indices().map(|j| phi(r * pow2::<T>(-j))).sum()
    }
}

/// Builds the partition covering every nonzero frequency of `grid`.
pub fn build_partition<T: Scalar>(grid: &GridRef<T>) -> DyadicPartition {
    DyadicPartition::for_grid(grid)
}
