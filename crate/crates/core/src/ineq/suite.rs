//! The standard battery: every check with its reference parameters.

use serde::Serialize;

use super::bernstein::{check_bernstein, check_multiplier, BernsteinCase, MultiplierCase};
use super::commutator::{check_commutator, CommutatorCase};
use super::composition::{check_composition, Composition, CompositionCase};
use super::convolution::{check_time_convolution, ConvolutionCase, ConvolutionReport};
use super::embedding::{check_embedding_interpolation, EmbeddingCase};
use super::exact::{exact_cases, ExactCheck};
use super::product::{
    check_nonclassical_product, check_product_laws, HighFactor, NegativeData, NonclassicalCase, ProductLaw,
};
use super::{LabSetup, RatioReport};
use crate::error::Result;
use crate::lp::SumExponent;

pub const CONVOLUTION_TIMES: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub reports: Vec<RatioReport>,
    /// Smallest stabilising `N₀` per non-classical case, keyed by the case name at `N₀ = 1`.
    pub stable_n0: Vec<(String, Option<u32>)>,
    pub convolutions: Vec<ConvolutionReport>,
    pub exact: Vec<ExactCheck>,
}

impl SuiteOutcome {
    pub fn unstable_cases(&self) -> Vec<String> {
        self.reports
            .iter()
            .map(|r| r.summary())
            .filter(|s| !s.grid_stable)
            .map(|s| s.case)
            .collect()
    }
}

pub fn standard_suite(setup: &LabSetup) -> Result<SuiteOutcome> {
    setup.validate()?;
    let d = setup.dim as f64;
    let mut reports = Vec::new();
    reports.push(check_bernstein(
        setup,
        &BernsteinCase {
            lambda: 16.0,
            k: 1,
            a: 2.0,
            b: f64::INFINITY,
        },
    )?);
    reports.push(check_multiplier(setup, &MultiplierCase { j: 3, m: 1.0, a: 3.0 })?);
    for law in [
        ProductLaw::Algebra {
            sigma: 0.5,
            p: 2.0,
            r: SumExponent::One,
        },
        ProductLaw::Mixed {
            sigma1: 0.5,
            sigma2: 0.5,
            p1: 2.0,
            p2: 2.0,
        },
        ProductLaw::Negative {
            sigma: 0.5,
            p1: 2.0,
            p2: 2.0,
            data: NegativeData::SingleAnnulus,
        },
        ProductLaw::Negative {
            sigma: 0.5,
            p1: 2.0,
            p2: 2.0,
            data: NegativeData::MultiAnnulus,
        },
    ] {
        reports.push(check_product_laws(setup, &law)?);
    }
    let mut stable_n0 = Vec::new();
    for form in [HighFactor::Right, HighFactor::Left] {
        let case = NonclassicalCase {
            p: 4.0,
            sigma: 0.5,
            j0: 0,
            form,
            n0_max: 6,
        };
        let out = check_nonclassical_product(setup, &case)?;
        stable_n0.push((case.name(1), out.stable_n0));
        reports.extend(out.reports);
    }
    for function in [Composition::Rational, Composition::Pressure { gamma: 1.4 }, Composition::Sine] {
        reports.push(check_composition(
            setup,
            &CompositionCase {
                function,
                amplitude: 0.1,
                sigma: d / 2.0,
                p: 2.0,
                r: SumExponent::One,
            },
        )?);
    }
    reports.push(check_commutator(
        setup,
        &CommutatorCase {
            sigma: 1.0,
            p: 2.0,
            p1: 2.0,
        },
    )?);
    for case in [
        EmbeddingCase::LebesgueIntoB1 { p: 3.0 },
        EmbeddingCase::LebesgueFromBInf { p: 3.0 },
        EmbeddingCase::Chain {
            sigma: 0.5,
            p1: 2.0,
            p2: 4.0,
            r1: SumExponent::One,
            r2: SumExponent::Infinity,
        },
        EmbeddingCase::Bounded { p: 2.0 },
        EmbeddingCase::Interpolation {
            sigma1: 0.0,
            sigma2: 1.0,
            theta: 0.5,
            p: 2.0,
            r: SumExponent::One,
        },
    ] {
        reports.push(check_embedding_interpolation(setup, &case)?);
    }
    let mut convolutions = Vec::new();
    for (s1, s2, th) in [(1.0, 2.0, 0.0), (0.0, 2.0, 0.0), (1.0, 1.5, 0.5)] {
        convolutions.push(check_time_convolution(
            &ConvolutionCase {
                sigma1: s1,
                sigma2: s2,
                theta: th,
            },
            &CONVOLUTION_TIMES,
        )?);
    }
    Ok(SuiteOutcome {
        reports,
        stable_n0,
        convolutions,
        exact: exact_cases(setup)?,
    })
}
