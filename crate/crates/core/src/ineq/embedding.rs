//! Embeddings between Lebesgue and homogeneous Besov spaces, and the
//! interpolation inequality `‖f‖_{Ḃ^{θσ₁+(1-θ)σ₂}_{p,r}} ≲ ‖f‖^θ_{Ḃ^{σ₁}_{p,r}} ‖f‖^{1-θ}_{Ḃ^{σ₂}_{p,r}}`.

use super::{lab_field, LabSetup, RatioReport};
use crate::error::{Error, Result};
use crate::lp::{besov_norm, BesovSpec, SumExponent};
use crate::spectral::{lp_norm, SpectralField, Support};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EmbeddingCase {
    /// `‖f‖_{L^p} ≤ ‖f‖_{Ḃ^0_{p,1}}`.
    LebesgueIntoB1 { p: f64 },
    /// `‖f‖_{Ḃ^0_{p,∞}} ≲ ‖f‖_{L^p}`.
    LebesgueFromBInf { p: f64 },
    /// `‖f‖_{Ḃ^{σ-d(1/p₁-1/p₂)}_{p₂,r₂}} ≲ ‖f‖_{Ḃ^σ_{p₁,r₁}}`, `p₁ ≤ p₂`, `r₁ ≤ r₂`.
    Chain { sigma: f64, p1: f64, p2: f64, r1: SumExponent, r2: SumExponent },
    /// `‖f‖_{L^∞} ≲ ‖f‖_{Ḃ^{d/p}_{p,1}}`.
    Bounded { p: f64 },
    /// Interpolation with a common summation exponent `r`.
    Interpolation { sigma1: f64, sigma2: f64, theta: f64, p: f64, r: SumExponent },
}

fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

fn rank(r: SumExponent) -> u8 {
    match r {
        SumExponent::One => 1,
        SumExponent::Two => 2,
        SumExponent::Infinity => 3,
    }
}

impl EmbeddingCase {
    pub fn validate(&self) -> Result<()> {
        let lebesgue = |p: f64| {
            if p.is_nan() || p < 1.0 {
                Err(Error::hypothesis("1 ≤ p ≤ ∞ violated"))
            } else {
                Ok(())
            }
        };
        match *self {
            EmbeddingCase::LebesgueIntoB1 { p }
            | EmbeddingCase::LebesgueFromBInf { p }
            | EmbeddingCase::Bounded { p } => lebesgue(p),
            EmbeddingCase::Chain { p1, p2, r1, r2, .. } => {
                lebesgue(p1)?;
                lebesgue(p2)?;
                if p1 > p2 {
                    return Err(Error::hypothesis("p₁ ≤ p₂ violated"));
                }
                if rank(r1) > rank(r2) {
                    return Err(Error::hypothesis("r₁ ≤ r₂ violated"));
                }
                Ok(())
            }
            EmbeddingCase::Interpolation { sigma1, sigma2, theta, p, .. } => {
                lebesgue(p)?;
                if sigma1 == sigma2 {
                    return Err(Error::hypothesis("σ₁ ≠ σ₂ violated"));
                }
                if !(theta > 0.0 && theta < 1.0) {
                    return Err(Error::hypothesis("θ ∈ (0, 1) violated"));
                }
                Ok(())
            }
        }
    }

    pub fn name(&self) -> String {
        match *self {
            EmbeddingCase::LebesgueIntoB1 { p } => format!("embed_b0p1_to_lp[p={p}]"),
            EmbeddingCase::LebesgueFromBInf { p } => format!("embed_lp_to_b0pinf[p={p}]"),
            EmbeddingCase::Chain { sigma, p1, p2, r1, r2 } => {
                format!("embed_chain[s={sigma},p1={p1},p2={p2},r1={r1:?},r2={r2:?}]")
            }
            EmbeddingCase::Bounded { p } => format!("embed_linf[p={p}]"),
            EmbeddingCase::Interpolation { sigma1, sigma2, theta, p, r } => {
                format!("interpolation[s1={sigma1},s2={sigma2},theta={theta},p={p},r={r:?}]")
            }
        }
    }

    /// `(LHS, RHS)` for one mean-zero field.
    pub fn evaluate(&self, f: &SpectralField<f64>, d: usize) -> Result<(f64, f64)> {
        let b = |s: f64, p: f64, r: SumExponent| besov_norm(f, &BesovSpec::new(s, p, r));
        let d = d as f64;
        match *self {
            EmbeddingCase::LebesgueIntoB1 { p } => Ok((lp_norm(f, p)?, b(0.0, p, SumExponent::One)?)),
            EmbeddingCase::LebesgueFromBInf { p } => Ok((b(0.0, p, SumExponent::Infinity)?, lp_norm(f, p)?)),
            EmbeddingCase::Chain { sigma, p1, p2, r1, r2 } => {
                Ok((b(sigma - d * (inv(p1) - inv(p2)), p2, r2)?, b(sigma, p1, r1)?))
            }
            EmbeddingCase::Bounded { p } => Ok((lp_norm(f, f64::INFINITY)?, b(d * inv(p), p, SumExponent::One)?)),
            EmbeddingCase::Interpolation { sigma1, sigma2, theta, p, r } => {
                let mid = theta * sigma1 + (1.0 - theta) * sigma2;
                Ok((b(mid, p, r)?, b(sigma1, p, r)?.powf(theta) * b(sigma2, p, r)?.powf(1.0 - theta)))
            }
        }
    }
}

pub fn check_embedding_interpolation(setup: &LabSetup, case: &EmbeddingCase) -> Result<RatioReport> {
    case.validate()?;
    let ball = Support::Ball { radius: setup.band() };
    setup.run(&case.name(), |grid, seed| {
        let f = lab_field(grid, ball, seed)?;
        case.evaluate(&f, grid.dim())
    })
}
