//! Bernstein inequalities: `‖D^k f‖_{L^b} ≤ C^{1+k} λ^{k+d(1/a-1/b)} ‖f‖_{L^a}`
//! for `supp f̂ ⊂ {|ξ| ≤ λ}`, and `‖Λ^m f‖_{L^a} ≈ λ^m ‖f‖_{L^a}` on an annulus.

use super::{lab_field, LabSetup, RatioReport};
use crate::error::{Error, Result};
use crate::spectral::ops::{lambda, partial};
use crate::spectral::{lp_norm, SpectralField, Support};
use crate::spectral::norms::lp_norm_components;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernsteinCase {
    pub lambda: f64,
    pub k: u32,
    pub a: f64,
    pub b: f64,
}

impl BernsteinCase {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::hypothesis("λ > 0 violated"));
        }
        if self.a.is_nan() || self.a < 1.0 {
            return Err(Error::hypothesis("1 ≤ a violated"));
        }
        if self.b.is_nan() || self.a > self.b {
            return Err(Error::hypothesis("a ≤ b violated"));
        }
        if self.k > 3 {
            return Err(Error::domain(format!("derivative order {} above 3 is not supported", self.k)));
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        format!("bernstein[k={},a={},b={},lambda={}]", self.k, self.a, self.b, self.lambda)
    }
}

/// `‖D^k f‖_{L^p}` with `|D^k f|` the Euclidean norm over all ordered
/// `k`-tuples of partial derivatives.
pub fn derivative_norm(f: &SpectralField<f64>, k: u32, p: f64) -> Result<f64> {
    let d = f.grid().dim();
    let mut layer = vec![f.clone()];
    for _ in 0..k {
        layer = layer.iter().flat_map(|g| (0..d).map(move |a| partial(g, a))).collect();
    }
    let samples: Vec<Vec<f64>> = layer.iter().map(|g| g.to_physical()).collect();
    lp_norm_components(&samples, p, f.grid().cell_volume())
}

pub fn check_bernstein(setup: &LabSetup, case: &BernsteinCase) -> Result<RatioReport> {
    case.validate()?;
    let d = setup.dim as f64;
    let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
    let scale = case.lambda.powf(case.k as f64 + d * (inv(case.a) - inv(case.b)));
    setup.run(&case.name(), |grid, seed| {
        let f = lab_field(grid, Support::Ball { radius: case.lambda }, seed)?;
        let lhs = derivative_norm(&f, case.k, case.b)?;
        Ok((lhs, scale * lp_norm(&f, case.a)?))
    })
}

/// `A(D) = Λ^m` on data spectrally supported in the dyadic annulus `j`
/// (`λ = 2^j`). For `a = 2` the ratio lies in `[(3/4)^m, (8/3)^m]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplierCase {
    pub j: i32,
    pub m: f64,
    pub a: f64,
}

impl MultiplierCase {
    pub fn name(&self) -> String {
        format!("multiplier[j={},m={},a={}]", self.j, self.m, self.a)
    }
}

pub fn check_multiplier(setup: &LabSetup, case: &MultiplierCase) -> Result<RatioReport> {
    if case.a.is_nan() || case.a < 1.0 {
        return Err(Error::hypothesis("1 ≤ a violated"));
    }
    if !case.m.is_finite() {
        return Err(Error::domain("multiplier degree must be finite"));
    }
    let lam = 2f64.powi(case.j);
    setup.run(&case.name(), |grid, seed| {
        let f = lab_field(grid, Support::Annulus { j: case.j }, seed)?;
        let lhs = lp_norm(&lambda(&f, case.m)?, case.a)?;
        Ok((lhs, lam.powf(case.m) * lp_norm(&f, case.a)?))
    })
}
