//! Randomised stress tests of the harmonic-analysis estimates used by the
//! decay theory: each check measures `LHS / RHS` over seeded trials on a
//! sequence of grids and reports the empirical constant and its drift under
//! refinement. Bounded ratios are evidence, not proofs.

pub mod bernstein;
pub mod commutator;
pub mod composition;
pub mod convolution;
pub mod embedding;
pub mod exact;
pub mod product;
pub mod report;
pub mod suite;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{random_field, scaled_to_sup, Grid, GridRef, SpectralField, Support};

pub use bernstein::{check_bernstein, check_multiplier, derivative_norm, BernsteinCase, MultiplierCase};
pub use commutator::{check_commutator, commutator_blocks, CommutatorCase};
pub use composition::{check_composition, Composition, CompositionCase};
pub use convolution::{check_time_convolution, ConvolutionCase, ConvolutionReport, ConvolutionRow};
pub use embedding::{check_embedding_interpolation, EmbeddingCase};
pub use exact::{exact_cases, ExactCheck};
pub use product::{
    check_nonclassical_product, check_product_laws, nonclassical_exponents, HighFactor, NegativeData,
    NonclassicalCase, NonclassicalOutcome, ProductLaw,
};
pub use report::{csv_field, splitmix64, trial_seed, GridSummary, RatioReport, RatioSummary, Trial, REFINEMENT_TOLERANCE};
pub use suite::{standard_suite, SuiteOutcome};

/// Where and how often a check is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabSetup {
    pub dim: usize,
    pub side: f64,
    pub grids: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for LabSetup {
    fn default() -> Self {
        LabSetup {
            dim: 2,
            side: std::f64::consts::TAU,
            grids: vec![64, 128, 256],
            trials: 20,
            master_seed: 0,
        }
    }
}

impl LabSetup {
    pub fn validate(&self) -> Result<()> {
        if self.grids.is_empty() {
            return Err(Error::domain("at least one grid size is required"));
        }
        if self.trials == 0 {
            return Err(Error::domain("trial count must be positive"));
        }
        for &n in &self.grids {
            if n < 16 {
                return Err(Error::domain(format!("grid size {n} is below 16")));
            }
            Grid::<f64>::new(self.dim, n, self.side)?;
        }
        Ok(())
    }

    pub fn coarsest(&self) -> usize {
        self.grids.iter().copied().min().unwrap_or(0)
    }

    /// Radius below which random data is drawn: on the coarsest grid the
    /// product of two such fields is still represented without aliasing.
    pub fn band(&self) -> f64 {
        let per_axis = ((self.coarsest() / 2 - 1) / 2) as f64;
        per_axis * (std::f64::consts::TAU / self.side)
    }

    pub fn grid(&self, n: usize) -> Result<GridRef<f64>> {
        Grid::new(self.dim, n, self.side)
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.trials as u64).map(|k| trial_seed(self.master_seed, k))
    }

    /// Runs `trial(grid, seed) -> (lhs, rhs)` on every grid and seed.
    pub fn run(
        &self,
        case: &str,
        mut trial: impl FnMut(&GridRef<f64>, u64) -> Result<(f64, f64)>,
    ) -> Result<RatioReport> {
        self.validate()?;
        let mut report = RatioReport::new(case);
        for &n in &self.grids {
            let grid = self.grid(n)?;
            for seed in self.seeds() {
                let (lhs, rhs) = trial(&grid, seed)?;
                report.record(n, seed, lhs, rhs)?;
            }
        }
        Ok(report)
    }
}

/// Random field with flat energy per dyadic annulus (coefficients damped by
/// `|ξ|^{-d/2}`), normalised to unit sup-norm.
pub fn lab_field(grid: &GridRef<f64>, support: Support<f64>, seed: u64) -> Result<SpectralField<f64>> {
    let raw = random_field(grid, support, seed)?;
    let d = grid.dim() as f64;
    let radii = grid.radii().to_vec();
    let flat = raw.map_coeffs(|i, z| if i == 0 { z } else { z * radii[i].powf(-0.5 * d) });
    scaled_to_sup(&flat, 1.0)
}

/// Pointwise product, evaluated on the grid samples.
pub fn product(f: &SpectralField<f64>, g: &SpectralField<f64>) -> Result<SpectralField<f64>> {
    f.ensure_same_grid(g)?;
    let fs = f.to_physical();
    let gs = g.to_physical();
    let samples: Vec<f64> = fs.iter().zip(&gs).map(|(a, b)| a * b).collect();
    SpectralField::from_physical(f.grid(), &samples)
}

/// Pointwise `F(f)` on the grid samples.
pub fn compose(f: &SpectralField<f64>, map: impl Fn(f64) -> f64) -> Result<SpectralField<f64>> {
    let samples: Vec<f64> = f.to_physical().into_iter().map(map).collect();
    SpectralField::from_physical(f.grid(), &samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_fits_products_on_coarsest_grid() {
        let s = LabSetup::default();
        assert_eq!(s.band(), 15.0);
        let g = s.grid(64).unwrap();
        let ball = Support::Ball { radius: s.band() };
        let f = random_field(&g, ball, 1).unwrap();
        let h = random_field(&g, ball, 2).unwrap();
        let fine = s.grid(256).unwrap();
        let f2 = random_field(&fine, ball, 1).unwrap();
        let h2 = random_field(&fine, ball, 2).unwrap();
        let p = product(&f, &h).unwrap();
        let p2 = product(&f2, &h2).unwrap();
        // Same Fourier coefficients on both grids: no aliasing on the coarse one.
        for idx in 0..g.len() {
            let k = g.wave_vector(idx);
            let j = fine.index_of(k).unwrap();
            assert!((p.coeffs()[idx] - p2.coeffs()[j]).norm() < 1e-13);
        }
    }

    #[test]
    fn setup_rejects_bad_grids() {
        let mut s = LabSetup::default();
        s.grids = vec![8];
        assert!(s.validate().is_err());
        s.grids.clear();
        assert!(s.validate().is_err());
    }

    #[test]
    fn lab_field_has_unit_sup() {
        let s = LabSetup::default();
        let g = s.grid(64).unwrap();
        let f = lab_field(&g, Support::Annulus { j: 2 }, 5).unwrap();
        let sup = f.to_physical().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!((sup - 1.0).abs() < 1e-14);
    }
}
