//! Numerical check of the low-frequency bound
//! `|exp(tM(r))| ≤ C e^{-c₀ r² t}` over a sampled `(r, t)` window.

use serde::Serialize;

use super::mode::exponential_unchecked;
use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SemigroupScan {
    pub c0: f64,
    /// Smallest `C` compatible with the sampled points.
    pub constant: f64,
    /// Candidate `C` the scan was judged against.
    pub bound: f64,
    pub pass: bool,
    pub worst_r: f64,
    pub worst_t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanGrid {
    pub r_max: f64,
    pub t_max: f64,
    pub r_samples: usize,
    pub t_samples: usize,
}

impl ScanGrid {
    pub fn new(r_max: f64, t_max: f64, r_samples: usize, t_samples: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite() && t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::domain("scan window must have positive finite extents"));
        }
        if r_samples < 2 || t_samples < 2 {
            return Err(Error::domain("scan needs at least two samples per axis"));
        }
        Ok(ScanGrid {
            r_max,
            t_max,
            r_samples,
            t_samples,
        })
    }

    /// `r_k = r_max·k/N` for `k = 1..=N` (the point `r = 0` is a rotation).
    fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.r_samples).map(move |k| self.r_max * k as f64 / self.r_samples as f64)
    }

    fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.t_samples).map(move |k| self.t_max * k as f64 / (self.t_samples - 1) as f64)
    }
}

/// Scans `‖exp(tM(r))‖₂ e^{c₀ r² t}` and compares its maximum with `bound`.
pub fn verify_semigroup_bound<T: Scalar>(grid: &ScanGrid, c0: f64, bound: f64, poisson: bool) -> Result<SemigroupScan> {
    if !(c0 >= 0.0 && c0.is_finite()) {
        return Err(Error::domain(format!("decay constant must be non-negative, got {c0}")));
    }
    let mut worst = (0.0f64, 0.0, 0.0);
    for r in grid.radii() {
        for t in grid.times() {
            let e = exponential_unchecked::<T>(c(r), c(t), poisson);
            let weighted = e.op_norm().as_f64() * (c0 * r * r * t).exp();
            if weighted > worst.0 || !weighted.is_finite() {
                worst = (weighted, r, t);
            }
        }
    }
    Ok(SemigroupScan {
        c0,
        constant: worst.0,
        bound,
        pass: worst.0.is_finite() && worst.0 <= bound,
        worst_r: worst.1,
        worst_t: worst.2,
    })
}

/// Largest `c₀` (to within `tol`) for which the scan passes with constant `bound`.
pub fn best_decay_rate<T: Scalar>(grid: &ScanGrid, bound: f64, poisson: bool, tol: f64) -> Result<f64> {
    if !verify_semigroup_bound::<T>(grid, 0.0, bound, poisson)?.pass {
        return Err(Error::domain(format!("bound {bound} fails even with c₀ = 0")));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while verify_semigroup_bound::<T>(grid, hi, bound, poisson)?.pass {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Ok(lo);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if verify_semigroup_bound::<T>(grid, mid, bound, poisson)?.pass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> ScanGrid {
        ScanGrid::new(1.0, 100.0, 100, 400).unwrap()
    }

    #[test]
    fn low_frequency_bound_holds_at_c0_04() {
        let scan = verify_semigroup_bound::<f64>(&window(), 0.4, 3.0, true).unwrap();
        assert!(scan.pass, "{scan:?}");
        assert!(scan.constant >= 1.0);
    }

    #[test]
    fn c0_06_fails_at_large_time() {
        let scan = verify_semigroup_bound::<f64>(&window(), 0.6, 3.0, true).unwrap();
        assert!(!scan.pass);
        assert!(scan.worst_t > 50.0);
    }

    #[test]
    fn best_rate_near_half() {
        let c0 = best_decay_rate::<f64>(&window(), 3.0, true, 1e-3).unwrap();
        assert!(c0 > 0.4 && c0 < 0.55, "{c0}");
    }

    #[test]
    fn bad_window_rejected() {
        assert!(ScanGrid::new(0.0, 1.0, 10, 10).is_err());
        assert!(verify_semigroup_bound::<f64>(&window(), -1.0, 3.0, true).is_err());
    }
}
