//! Commutator estimate
//! `‖[v·∇, ∂_ℓΔ̇_j]a‖_{L^p} ≤ C c_j 2^{-j(σ-1)} ‖∇v‖_{Ḃ^{d/p₁}_{p₁,1}} ‖∇a‖_{Ḃ^{σ-1}_{p,1}}`
//! with `‖(c_j)‖_{ℓ¹} ≤ 1`.
//!
//! A trial records `lhs = Σ_j 2^{j(σ-1)}‖[v·∇, ∂Δ̇_j]a‖_{L^p}` against the
//! product of the two Besov norms, so its ratio is the smallest `C` making
//! the recovered `(c_j)` of that trial sum to one.

use super::{lab_field, product, LabSetup, RatioReport};
use crate::error::{Error, Result};
use crate::lp::{block_norms_components, combine_blocks, dyadic_block, BlockKind, DyadicPartition, Restriction, SumExponent};
use crate::spectral::norms::lp_norm_components;
use crate::spectral::ops::{grad, partial};
use crate::spectral::{SpectralField, Support, VectorField};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorCase {
    pub sigma: f64,
    pub p: f64,
    pub p1: f64,
}

fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

impl CommutatorCase {
    pub fn validate(&self, d: usize) -> Result<()> {
        if self.p.is_nan() || self.p < 1.0 || self.p1.is_nan() || self.p1 < 1.0 {
            return Err(Error::hypothesis("1 ≤ p, p₁ ≤ ∞ violated"));
        }
        let d = d as f64;
        let lower = -(d * inv(self.p1)).min(d * (1.0 - inv(self.p)));
        let upper = 1.0 + (d * inv(self.p)).min(d * inv(self.p1));
        if !(self.sigma > lower) {
            return Err(Error::hypothesis("σ > -min(d/p₁, d/p′) violated"));
        }
        if !(self.sigma <= upper) {
            return Err(Error::hypothesis("σ ≤ 1 + min(d/p, d/p₁) violated"));
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        format!("commutator[s={},p={},p1={}]", self.sigma, self.p, self.p1)
    }
}

/// `v·∇h` on the grid samples.
fn transport(v: &VectorField<f64>, h: &SpectralField<f64>) -> Result<SpectralField<f64>> {
    let mut acc = SpectralField::zeros(h.grid());
    for (k, vk) in v.comps().iter().enumerate() {
        acc = acc.axpy(1.0, &product(vk, &partial(h, k))?)?;
    }
    Ok(acc)
}

/// `‖[v·∇, ∂Δ̇_j]a‖_{L^p}` for every block `j`, the `ℓ`-components combined
/// in the Euclidean norm.
pub fn commutator_blocks(v: &VectorField<f64>, a: &SpectralField<f64>, p: f64) -> Result<Vec<(i32, f64)>> {
    let grid = a.grid();
    let d = grid.dim();
    let va = transport(v, a)?;
    let mut out = Vec::new();
    for j in DyadicPartition::for_grid(grid).indices() {
        let aj = dyadic_block(a, BlockKind::Block(j));
        let vaj = dyadic_block(&va, BlockKind::Block(j));
        let mut comps = Vec::with_capacity(d);
        for l in 0..d {
            let first = transport(v, &partial(&aj, l))?;
            let diff = first.axpy(-1.0, &partial(&vaj, l))?;
            comps.push(diff.to_physical());
        }
        out.push((j, lp_norm_components(&comps, p, grid.cell_volume())?));
    }
    Ok(out)
}

/// `(Σ_j 2^{j(σ-1)} LHS_j, ‖∇v‖_{Ḃ^{d/p₁}_{p₁,1}} ‖∇a‖_{Ḃ^{σ-1}_{p,1}})`.
pub fn commutator_pair(case: &CommutatorCase, v: &VectorField<f64>, a: &SpectralField<f64>) -> Result<(f64, f64)> {
    let grid = a.grid();
    let d = grid.dim();
    let blocks = commutator_blocks(v, a, case.p)?;
    let lhs = combine_blocks(&blocks, case.sigma - 1.0, SumExponent::One, Restriction::All);
    let partition = DyadicPartition::for_grid(grid);
    let grad_v: Vec<SpectralField<f64>> = v.comps().iter().flat_map(|c| grad(c).into_comps()).collect();
    let gv: Vec<&SpectralField<f64>> = grad_v.iter().collect();
    let ga_field = grad(a);
    let ga: Vec<&SpectralField<f64>> = ga_field.comps().iter().collect();
    let nv = combine_blocks(
        &block_norms_components(&gv, case.p1, &partition)?,
        d as f64 * inv(case.p1),
        SumExponent::One,
        Restriction::All,
    );
    let na = combine_blocks(
        &block_norms_components(&ga, case.p, &partition)?,
        case.sigma - 1.0,
        SumExponent::One,
        Restriction::All,
    );
    Ok((lhs, nv * na))
}

pub fn check_commutator(setup: &LabSetup, case: &CommutatorCase) -> Result<RatioReport> {
    case.validate(setup.dim)?;
    let ball = Support::Ball { radius: setup.band() };
    setup.run(&case.name(), |grid, seed| {
        let a = lab_field(grid, ball, seed)?;
        let comps = (0..grid.dim())
            .map(|k| lab_field(grid, ball, super::splitmix64(seed.wrapping_add(k as u64 + 1))))
            .collect::<Result<Vec<_>>>()?;
        commutator_pair(case, &VectorField::new(comps)?, &a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::LabSetup;

    #[test]
    fn constant_coefficients_commute() {
        let s = LabSetup::default();
        let g = s.grid(64).unwrap();
        let a = lab_field(&g, Support::Ball { radius: 15.0 }, 1).unwrap();
        let zero = VectorField::zeros(&g);
        assert!(commutator_blocks(&zero, &a, 2.0).unwrap().iter().all(|b| b.1 == 0.0));
        let v = VectorField::new(vec![
            SpectralField::from_fn(&g, |_| 0.7),
            SpectralField::from_fn(&g, |_| -1.3),
        ])
        .unwrap();
        let scale = crate::spectral::lp_norm(&a, 2.0).unwrap() * 15.0;
        for (_, b) in commutator_blocks(&v, &a, 2.0).unwrap() {
            assert!(b < 1e-12 * scale, "{b}");
        }
    }

    #[test]
    fn sigma_window() {
        let ok = CommutatorCase {
            sigma: 1.0,
            p: 2.0,
            p1: 2.0,
        };
        ok.validate(2).unwrap();
        let hi = CommutatorCase { sigma: 2.5, ..ok };
        assert!(hi.validate(2).unwrap_err().to_string().contains("σ ≤ 1 + min(d/p, d/p₁)"));
        let lo = CommutatorCase { sigma: -1.0, ..ok };
        assert!(lo.validate(2).unwrap_err().to_string().contains("σ > -min"));
    }

    #[test]
    fn random_commutator_ratio_is_grid_stable() {
        let s = LabSetup {
            grids: vec![64, 128],
            trials: 3,
            ..LabSetup::default()
        };
        let rep = check_commutator(&s, &CommutatorCase { sigma: 1.0, p: 2.0, p1: 2.0 }).unwrap();
        let sum = rep.summary();
        assert!(sum.grids[0].max > 0.0);
        assert!(sum.grid_stable, "{sum:?}");
    }
}
