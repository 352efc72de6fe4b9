//! Equality, vanishing and rejection cases that must come out exactly.

use serde::Serialize;

use super::bernstein::derivative_norm;
use super::commutator::commutator_blocks;
use super::composition::{check_composition, Composition, CompositionCase};
use super::convolution::{check_time_convolution, ConvolutionCase};
use super::product::{high_part, low_negative_norm, nonclassical_exponents, ProductLaw};
use super::{lab_field, LabSetup};
use crate::error::{Error, Result};
use crate::lp::{besov_norm, BesovSpec, SumExponent};
use crate::spectral::{lp_norm, SpectralField, Support, VectorField};

/// Absolute tolerance of the exact cases.
pub const EXACT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactCheck {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

fn value_check(name: &str, observed: f64, expected: f64, tol: f64) -> ExactCheck {
    ExactCheck {
        name: name.into(),
        detail: format!("observed {observed:e}, expected {expected:e}"),
        pass: (observed - expected).abs() <= tol,
    }
}

fn rejection_check<T: std::fmt::Debug>(name: &str, outcome: Result<T>, needle: &str) -> ExactCheck {
    let (detail, pass) = match outcome {
        Err(Error::Hypothesis(m)) => {
            let pass = m.contains(needle);
            (m, pass)
        }
        Err(e) => (format!("wrong error class: {e}"), false),
        Ok(v) => (format!("accepted: {v:?}"), false),
    };
    ExactCheck {
        name: name.into(),
        detail,
        pass,
    }
}

/// Runs every exact case on the coarsest grid of `setup`.
pub fn exact_cases(setup: &LabSetup) -> Result<Vec<ExactCheck>> {
    setup.validate()?;
    let grid = setup.grid(setup.coarsest())?;
    let k0 = grid.k_min();
    let seed = super::trial_seed(setup.master_seed, 0);
    let mut out = Vec::new();

    // ‖∇f‖₂ = λ‖f‖₂ for a tone with |ξ₀| = λ.
    let tone = SpectralField::from_fn(&grid, |x| (3.0 * k0 * x[0] + 4.0 * k0 * x[1]).cos()).mean_zero();
    let ratio = derivative_norm(&tone, 1, 2.0)? / lp_norm(&tone, 2.0)?;
    out.push(value_check("bernstein_tone_equality", ratio / (5.0 * k0), 1.0, EXACT_TOLERANCE));

    // Algebra law on f = g = cos(3x₁): RHS dominates with room to spare.
    let c3 = SpectralField::from_fn(&grid, |x| (3.0 * k0 * x[0]).cos()).mean_zero();
    let law = ProductLaw::Algebra {
        sigma: 0.5,
        p: 2.0,
        r: SumExponent::One,
    };
    let (lhs, rhs) = law.evaluate(&c3, &c3)?;
    out.push(ExactCheck {
        name: "product_algebra_single_tone".into(),
        detail: format!("LHS/RHS = {}", lhs / rhs),
        pass: lhs / rhs <= 1.1,
    });

    let mixed = ProductLaw::Mixed {
        sigma1: 0.5,
        sigma2: 0.5,
        p1: 2.0,
        p2: 2.0,
    };
    out.push(value_check("product_target_exponent_4_3", mixed.target_exponent(2), 4.0 / 3.0, 1e-14));
    out.push(rejection_check(
        "product_hypothesis_rejected",
        ProductLaw::Mixed {
            sigma1: 0.25,
            sigma2: 0.5,
            p1: 2.0,
            p2: 2.0,
        }
        .validate(setup.dim),
        "σ₁ ≥ σ₂",
    ));

    // p = 4 in d = 3: s₀ = 0 and p* = 4.
    let (s0, p_star) = nonclassical_exponents(3, 4.0)?;
    out.push(value_check("nonclassical_s0_d3_p4", s0, 0.0, 1e-15));
    out.push(value_check("nonclassical_pstar_d3_p4", p_star, 4.0, 1e-12));
    out.push(rejection_check("nonclassical_p5_rejected", nonclassical_exponents(3, 5.0), "2 ≤ p ≤ 4"));
    out.push(rejection_check("nonclassical_p2_rejected", nonclassical_exponents(3, 2.0), "1/p* = 1/2 - 1/p > 0"));

    // g spectrally inside the region where Ṡ_{j₀} is the identity: g^h ≡ 0.
    let j0 = 2;
    let f = lab_field(&grid, Support::Ball { radius: setup.band() }, seed)?;
    let g = lab_field(&grid, Support::Ball { radius: 0.75 * 4.0 }, seed ^ 1)?;
    let gh = high_part(&g, j0)?;
    let lhs = low_negative_norm(&super::product(&f, &gh)?, 0.0, j0)?;
    out.push(value_check("nonclassical_zero_high_part", lhs, 0.0, 0.0));

    let id = CompositionCase {
        function: Composition::Identity,
        amplitude: 0.1,
        sigma: 1.0,
        p: 2.0,
        r: SumExponent::One,
    };
    let single = LabSetup {
        grids: vec![setup.coarsest()],
        trials: 1,
        ..setup.clone()
    };
    let rep = check_composition(&single, &id)?;
    out.push(value_check("composition_identity_ratio", rep.trials[0].ratio, 1.0, EXACT_TOLERANCE));
    out.push(rejection_check(
        "composition_shift_rejected",
        check_composition(
            &single,
            &CompositionCase {
                function: Composition::Affine { slope: 1.0, offset: 1.0 },
                ..id
            },
        ),
        "F(0)=0 violated",
    ));

    let a = lab_field(&grid, Support::Ball { radius: setup.band() }, seed)?;
    let zero = VectorField::zeros(&grid);
    let worst = commutator_blocks(&zero, &a, 2.0)?.into_iter().map(|b| b.1).fold(0.0, f64::max);
    out.push(value_check("commutator_zero_field", worst, 0.0, 0.0));
    let constant = VectorField::new(
        (0..grid.dim())
            .map(|k| SpectralField::from_fn(&grid, move |_| 0.5 + k as f64))
            .collect(),
    )?;
    let worst = commutator_blocks(&constant, &a, 2.0)?.into_iter().map(|b| b.1).fold(0.0, f64::max);
    out.push(value_check("commutator_constant_field", worst, 0.0, EXACT_TOLERANCE));
    out.push(rejection_check(
        "commutator_sigma_rejected",
        super::CommutatorCase {
            sigma: 3.0,
            p: 2.0,
            p1: 2.0,
        }
        .validate(setup.dim),
        "σ ≤ 1 + min(d/p, d/p₁)",
    ));

    // |ξ| = 11·k₀ lies where a single φ(2^{-j}·) equals one.
    let c11 = SpectralField::from_fn(&grid, |x| (11.0 * k0 * x[0]).cos()).mean_zero();
    let b1 = besov_norm(&c11, &BesovSpec::new(0.0, 3.0, SumExponent::One))?;
    let binf = besov_norm(&c11, &BesovSpec::new(0.0, 3.0, SumExponent::Infinity))?;
    out.push(value_check("embedding_single_block_tone", b1 / binf, 1.0, EXACT_TOLERANCE));

    out.push(rejection_check(
        "time_convolution_sigma2_rejected",
        check_time_convolution(
            &ConvolutionCase {
                sigma1: 0.5,
                sigma2: 1.0,
                theta: 0.0,
            },
            &[1.0],
        ),
        "σ₂ > 1",
    ));
    let integrable = check_time_convolution(
        &ConvolutionCase {
            sigma1: 0.0,
            sigma2: 2.0,
            theta: 0.0,
        },
        &[1.0, 10.0, 100.0, 1000.0],
    )?;
    let excess = integrable
        .rows
        .iter()
        .map(|r| r.weighted - integrable.integrability_constant)
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(ExactCheck {
        name: "time_convolution_integrable_memoryless".into(),
        detail: format!("max excess over ∫⟨τ⟩^{{-σ₂}} = {excess:e}"),
        pass: excess <= EXACT_TOLERANCE,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_exact_case_passes() {
        let setup = LabSetup {
            grids: vec![64],
            trials: 1,
            ..LabSetup::default()
        };
        let checks = exact_cases(&setup).unwrap();
        assert!(checks.len() >= 15);
        for c in &checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
    }
}
