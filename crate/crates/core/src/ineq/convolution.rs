//! Time-convolution inequality
//! `∫₀^t ⟨t-τ⟩^{-σ₁} τ^{-θ} ⟨τ⟩^{θ-σ₂} dτ ≲ ⟨t⟩^{-σ₁}` for `0 ≤ σ₁ ≤ σ₂`, `σ₂ > 1`, `0 ≤ θ < 1`.

use serde::Serialize;

use crate::decay::japanese;
use crate::error::{Error, Result};
use crate::quadrature::integrate;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvolutionCase {
    pub sigma1: f64,
    pub sigma2: f64,
    pub theta: f64,
}

impl ConvolutionCase {
    pub fn validate(&self) -> Result<()> {
        let c = self;
        if !(c.sigma1 >= 0.0) {
            return Err(Error::hypothesis("0 ≤ σ₁ violated"));
        }
        if !(c.sigma1 <= c.sigma2) {
            return Err(Error::hypothesis("σ₁ ≤ σ₂ violated"));
        }
        if !(c.sigma2 > 1.0) || !c.sigma2.is_finite() {
            return Err(Error::hypothesis("σ₂ > 1 violated"));
        }
        if !(c.theta >= 0.0 && c.theta < 1.0) {
            return Err(Error::hypothesis("0 ≤ θ < 1 violated"));
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        format!("time_convolution[s1={},s2={},theta={}]", self.sigma1, self.sigma2, self.theta)
    }

    fn weight(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return if self.theta == 0.0 { 1.0 } else { f64::INFINITY };
        }
        tau.powf(-self.theta) * japanese(tau).powf(self.theta - self.sigma2)
    }

    /// `∫₀^t ⟨t-τ⟩^{-σ₁} τ^{-θ} ⟨τ⟩^{θ-σ₂} dτ`.
    pub fn integral(&self, t: f64) -> f64 {
        let mut breaks = vec![0.0, t];
        for k in 0..60 {
            let h = t * 0.5f64.powi(k);
            breaks.push(h);
            breaks.push(t - h);
        }
        for x in [1.0, t - 1.0] {
            if x > 0.0 && x < t {
                breaks.push(x);
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        integrate(
            |tau| japanese(t - tau).powf(-self.sigma1) * self.weight(tau),
            &breaks,
            1e-12,
            0.0,
            20_000,
        )
        .value
    }

    /// `∫₀^∞ τ^{-θ} ⟨τ⟩^{θ-σ₂} dτ`, the `t → ∞` limit of the weighted integral
    /// when `σ₁ = 0`; the tail `[1, ∞)` is mapped onto `(0, 1]` by `τ = 1/s`.
    pub fn integrability_constant(&self) -> f64 {
        let breaks = crate::quadrature::geometric_breaks(1.0, 60);
        let head = integrate(|tau| self.weight(tau), &breaks, 1e-12, 0.0, 20_000).value;
        let tail = integrate(
            |s| if s <= 0.0 { 0.0 } else { self.weight(1.0 / s) / (s * s) },
            &breaks,
            1e-12,
            0.0,
            20_000,
        )
        .value;
        head + tail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvolutionRow {
    pub t: f64,
    pub integral: f64,
    /// `integral · ⟨t⟩^{σ₁}`.
    pub weighted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvolutionReport {
    pub case: ConvolutionCase,
    pub rows: Vec<ConvolutionRow>,
    pub sup: f64,
    /// `|w(t_last)/w(t_prev) - 1|` over the two largest times.
    pub tail_drift: f64,
    pub flat: bool,
    pub integrability_constant: f64,
}

impl ConvolutionReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,integral,weighted\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.t, r.integral, r.weighted));
        }
        out
    }
}

pub fn check_time_convolution(case: &ConvolutionCase, times: &[f64]) -> Result<ConvolutionReport> {
    case.validate()?;
    if times.is_empty() || times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::domain("time grid must be nonempty with positive finite times"));
    }
    let mut ts = times.to_vec();
    ts.sort_by(f64::total_cmp);
    let rows: Vec<ConvolutionRow> = ts
        .iter()
        .map(|&t| {
            let integral = case.integral(t);
            ConvolutionRow {
                t,
                integral,
                weighted: integral * japanese(t).powf(case.sigma1),
            }
        })
        .collect();
    if rows.iter().any(|r| !r.weighted.is_finite()) {
        return Err(Error::domain(format!("{}: quadrature did not return a finite value", case.name())));
    }
    let sup = rows.iter().map(|r| r.weighted).fold(0.0, f64::max);
    let tail_drift = match rows.len() {
        0 | 1 => 0.0,
        k => (rows[k - 1].weighted / rows[k - 2].weighted - 1.0).abs(),
    };
    Ok(ConvolutionReport {
        case: *case,
        sup,
        tail_drift,
        flat: tail_drift < super::REFINEMENT_TOLERANCE,
        integrability_constant: case.integrability_constant(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_without_memory() {
        // σ₁ = θ = 0, σ₂ = 2: ∫₀^t dτ/(1+τ²) = arctan t.
        let c = ConvolutionCase {
            sigma1: 0.0,
            sigma2: 2.0,
            theta: 0.0,
        };
        for t in [0.5, 3.0, 1000.0] {
            assert!((c.integral(t) - t.atan()).abs() < 1e-10);
        }
        assert!((c.integrability_constant() - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn singular_weight_closed_form() {
        // σ₁ = 0, θ = 1/2, σ₂ = 3/2: ∫₀^∞ τ^{-1/2}(1+τ²)^{-1/2} dτ = Γ(1/4)²/(2√π).
        let c = ConvolutionCase {
            sigma1: 0.0,
            sigma2: 1.5,
            theta: 0.5,
        };
        let gamma_quarter = 3.625_609_908_221_908_3_f64;
        let exact = gamma_quarter * gamma_quarter / (2.0 * std::f64::consts::PI.sqrt());
        assert!((c.integrability_constant() - exact).abs() < 1e-8, "{}", c.integrability_constant());
    }

    #[test]
    fn weighted_sup_is_flat_for_reference_case() {
        let c = ConvolutionCase {
            sigma1: 1.0,
            sigma2: 2.0,
            theta: 0.0,
        };
        let rep = check_time_convolution(&c, &[1.0, 10.0, 100.0, 1000.0]).unwrap();
        assert!(rep.sup < 5.0 && rep.flat, "{rep:?}");
        // Large-t limit of the weighted integral is ∫₀^∞ ⟨τ⟩^{-2} dτ = π/2.
        assert!((rep.rows[3].weighted - std::f64::consts::FRAC_PI_2).abs() < 0.05);
    }

    #[test]
    fn hypotheses_enforced() {
        let bad = ConvolutionCase {
            sigma1: 0.5,
            sigma2: 1.0,
            theta: 0.0,
        };
        assert_eq!(
            check_time_convolution(&bad, &[1.0]).unwrap_err(),
            Error::Hypothesis("σ₂ > 1 violated".into())
        );
        let bad = ConvolutionCase {
            sigma1: 3.0,
            sigma2: 2.0,
            theta: 0.0,
        };
        assert!(bad.validate().is_err());
        let bad = ConvolutionCase {
            sigma1: 1.0,
            sigma2: 2.0,
            theta: 1.0,
        };
        assert!(bad.validate().is_err());
    }
}
