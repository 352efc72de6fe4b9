//! Composition estimate `‖F(f)‖_{Ḃ^σ_{p,r}} ≤ C(‖f‖_∞) ‖f‖_{Ḃ^σ_{p,r}}` for smooth `F` with `F(0) = 0`.

use super::{compose, lab_field, LabSetup, RatioReport};
use crate::error::{Error, Result};
use crate::lp::{besov_norm, BesovSpec, SumExponent};
use crate::spectral::Support;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Composition {
    Identity,
    /// `x/(1+x)`.
    Rational,
    /// `(1+x)^{γ-2} - 1`.
    Pressure { gamma: f64 },
    Sine,
    /// `slope·x + offset`.
    Affine { slope: f64, offset: f64 },
}

impl Composition {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Composition::Identity => x,
            Composition::Rational => x / (1.0 + x),
            Composition::Pressure { gamma } => (1.0 + x).powf(gamma - 2.0) - 1.0,
            Composition::Sine => x.sin(),
            Composition::Affine { slope, offset } => slope * x + offset,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Composition::Identity => "identity".into(),
            Composition::Rational => "rational".into(),
            Composition::Pressure { gamma } => format!("pressure(gamma={gamma})"),
            Composition::Sine => "sin".into(),
            Composition::Affine { slope, offset } => format!("affine({slope},{offset})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompositionCase {
    pub function: Composition,
    pub amplitude: f64,
    pub sigma: f64,
    pub p: f64,
    pub r: SumExponent,
}

impl CompositionCase {
    pub fn validate(&self) -> Result<()> {
        if self.function.eval(0.0) != 0.0 {
            return Err(Error::hypothesis("F(0)=0 violated"));
        }
        if !(self.amplitude > 0.0 && self.amplitude <= 0.5) {
            return Err(Error::hypothesis("‖f‖_{L^∞} ≤ 1/2 violated"));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::hypothesis("σ > 0 violated"));
        }
        if self.p.is_nan() || self.p < 1.0 {
            return Err(Error::hypothesis("1 ≤ p ≤ ∞ violated"));
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        format!(
            "composition[{},amp={},s={},p={},r={:?}]",
            self.function.label(),
            self.amplitude,
            self.sigma,
            self.p,
            self.r
        )
    }
}

pub fn check_composition(setup: &LabSetup, case: &CompositionCase) -> Result<RatioReport> {
    case.validate()?;
    let spec = BesovSpec::new(case.sigma, case.p, case.r);
    let ball = Support::Ball { radius: setup.band() };
    setup.run(&case.name(), |grid, seed| {
        let f = lab_field(grid, ball, seed)?.scaled(case.amplitude);
        let ff = compose(&f, |x| case.function.eval(x))?.mean_zero();
        Ok((besov_norm(&ff, &spec)?, besov_norm(&f, &spec)?))
    })
}
