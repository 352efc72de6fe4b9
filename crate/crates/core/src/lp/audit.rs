//! Numerical audit of the dyadic partition on a periodic grid.

use serde::Serialize;

use super::besov::{dyadic_block, BlockKind};
use super::partition::build_partition;
use crate::error::{Error, Result};
use crate::spectral::{random_field, GridRef, SpectralField, Support};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionAudit {
    pub j_min: i32,
    pub j_max: i32,
    /// `max_k |Σ_j φ(2^{-j}|ξ_k|) - 1|` over nonzero lattice frequencies.
    pub max_partition_error: f64,
    /// `max ‖Δ̇_j Δ̇_k f‖_{L²} / ‖f‖_{L²}` over `|j - k| ≥ 2`.
    pub max_orthogonality_defect: f64,
    /// `max ‖Σ_j Δ̇_j f - f‖_{L²} / ‖f‖_{L²}`.
    pub max_reconstruction_error: f64,
    /// Range of `‖f‖_{Ḃ⁰_{2,2}} / ‖f‖_{L²}` over the sampled fields.
    pub besov_l2_ratio: (f64, f64),
    pub fields: usize,
}

impl PartitionAudit {
    /// Thresholds: partition `1e-12`, orthogonality `1e-14`, reconstruction
    /// `1e-10`, ratio inside `[1/√2, 1]`.
    pub fn pass(&self) -> bool {
        let (lo, hi) = self.besov_l2_ratio;
        self.max_partition_error < 1e-12
            && self.max_orthogonality_defect < 1e-14
            && self.max_reconstruction_error < 1e-10
            && lo >= std::f64::consts::FRAC_1_SQRT_2 - 1e-12
            && hi <= 1.0 + 1e-12
    }
}

/// Audits the partition on `grid` with `fields` broadband random fields
/// drawn from seeds `seed, seed + 1, ...`.
pub fn partition_audit(grid: &GridRef<f64>, fields: usize, seed: u64) -> Result<PartitionAudit> {
    if fields == 0 {
        return Err(Error::domain("partition audit needs at least one field"));
    }
    let partition = build_partition(grid);
    let max_partition_error = grid
        .radii()
        .iter()
        .filter(|&&r| r > 0.0)
        .map(|&r| (partition.sum_at(r) - 1.0).abs())
        .fold(0.0, f64::max);
    let support = Support::Ball { radius: grid.max_radius() };
    let mut orth: f64 = 0.0;
    let mut recon: f64 = 0.0;
    let mut ratio = (f64::INFINITY, 0.0f64);
    for k in 0..fields {
        let f = random_field(grid, support, seed.wrapping_add(k as u64))?;
        let norm = f.spectral_l2();
        let blocks: Vec<(i32, SpectralField<f64>)> = partition
            .indices()
            .map(|j| (j, dyadic_block(&f, BlockKind::Block(j))))
            .collect();
        let mut sum = SpectralField::zeros(grid);
        let mut besov2 = 0.0;
        for (j, b) in &blocks {
            sum = sum.axpy(1.0, b)?;
            besov2 += b.spectral_l2().powi(2);
            for (i, _) in blocks.iter().filter(|(i, _)| i - j >= 2) {
                let both = dyadic_block(b, BlockKind::Block(*i));
                orth = orth.max(both.spectral_l2() / norm);
            }
        }
        recon = recon.max((&sum - &f).spectral_l2() / norm);
        let r = besov2.sqrt() / norm;
        ratio = (ratio.0.min(r), ratio.1.max(r));
    }
    Ok(PartitionAudit {
        j_min: partition.j_min,
        j_max: partition.j_max,
        max_partition_error,
        max_orthogonality_defect: orth,
        max_reconstruction_error: recon,
        besov_l2_ratio: ratio,
        fields,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn audit_passes_on_small_grids() {
        for (d, n, l) in [(2, 32, std::f64::consts::TAU), (3, 16, 5.0)] {
            let g = Grid::<f64>::new(d, n, l).unwrap();
            let audit = partition_audit(&g, 5, 11).unwrap();
            assert!(audit.pass(), "{audit:?}");
            assert!(audit.besov_l2_ratio.0 < audit.besov_l2_ratio.1);
        }
    }

    #[test]
    fn zero_fields_rejected() {
        let g = Grid::<f64>::new(2, 16, 1.0).unwrap();
        assert!(partition_audit(&g, 0, 0).is_err());
    }
}
