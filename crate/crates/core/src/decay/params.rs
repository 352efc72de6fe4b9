use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent bundle of the decay framework: `d`, `p`, `s₁`, `ε`, the cutoff
/// `j₀` and the sampled regularities `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub d: usize,
    pub p: f64,
    pub s1: f64,
    pub epsilon: f64,
    pub j0: i32,
    pub s_samples: Vec<f64>,
}

/// Checks `2 ≤ p ≤ min(4, 2d/(d-2))` and `p ≠ 4` for `d = 2`.
pub fn check_lebesgue_exponent(d: usize, p: f64) -> Result<()> {
    if !(2..=3).contains(&d) {
        return Err(Error::domain(format!("dimension must be 2 or 3, got {d}")));
    }
    if !(p >= 2.0) {
        return Err(Error::domain(format!("2 ≤ p violated (p = {p})")));
    }
    let upper = if d == 2 { 4.0 } else { (2.0 * d as f64 / (d as f64 - 2.0)).min(4.0) };
    if !(p <= upper) {
        return Err(Error::domain(format!(
            "p ≤ min(4, 2d/(d−2)) violated (p = {p}, d = {d})"
        )));
    }
    if d == 2 && p == 4.0 {
        return Err(Error::domain("p ≠ 4 if d = 2 violated"));
    }
    Ok(())
}

/// `⟨t⟩ = √(1 + t²)`.
#[inline]
pub fn japanese(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

impl DecayParams {
    /// Parameters with `ε = 0.01`, `j₀ = 0` and the default `s` grid.
    pub fn new(d: usize, p: f64, s1: f64) -> Result<Self> {
        let mut params = DecayParams {
            d,
            p,
            s1,
            epsilon: 0.01,
            j0: 0,
            s_samples: Vec::new(),
        };
        params.s_samples = params.default_s_grid();
        params.validate()?;
        Ok(params)
    }

    /// The endpoint `s₁ = s₀`.
    pub fn endpoint(d: usize, p: f64) -> Result<Self> {
        Self::new(d, p, 2.0 * d as f64 / p - d as f64 / 2.0)
    }

    /// `s₀ = 2d/p - d/2`.
    pub fn s0(&self) -> f64 {
        2.0 * self.d as f64 / self.p - self.d as f64 / 2.0
    }

    /// `α = s₁ + d/2 + 1/2 - ε`.
    pub fn alpha(&self) -> f64 {
        self.s1 + self.d as f64 / 2.0 + 0.5 - self.epsilon
    }

    /// `[ε - s₁, d/2 + 1]`.
    pub fn s_range(&self) -> (f64, f64) {
        (self.epsilon - self.s1, self.d as f64 / 2.0 + 1.0)
    }

    /// `{ε - s₁, 0, d/2 - 1, d/2, d/2 + 1}` restricted to the admissible range,
    /// sorted and without repeats.
    pub fn default_s_grid(&self) -> Vec<f64> {
        let h = self.d as f64 / 2.0;
        let (lo, hi) = self.s_range();
        let mut v: Vec<f64> = [lo, 0.0, h - 1.0, h, h + 1.0]
            .into_iter()
            .filter(|&s| s >= lo && s <= hi)
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    pub fn check_s(&self, s: f64) -> Result<()> {
        let (lo, hi) = self.s_range();
        if !(s >= lo - 1e-12 && s <= hi + 1e-12) {
            return Err(Error::domain(format!(
                "s = {s} outside [ε − s₁, d/2 + 1] = [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        check_lebesgue_exponent(self.d, self.p)?;
        let lower = 1.0 - self.d as f64 / 2.0;
        if !(self.s1 > lower) {
            return Err(Error::domain(format!(
                "1 − d/2 < s₁ violated (s₁ = {}, d = {})",
                self.s1, self.d
            )));
        }
        if !(self.s1 <= self.s0() + 1e-12) {
            return Err(Error::domain(format!(
                "s₁ ≤ s₀ = 2d/p − d/2 violated (s₁ = {}, s₀ = {})",
                self.s1,
                self.s0()
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 0.1) {
            return Err(Error::domain(format!("ε ∈ (0, 0.1] violated (ε = {})", self.epsilon)));
        }
        if self.s_samples.is_empty() {
            return Err(Error::domain("at least one s sample is required"));
        }
        for &s in &self.s_samples {
            self.check_s(s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_exponents_3d() {
        let p = DecayParams::endpoint(3, 2.0).unwrap();
        assert_eq!(p.s0(), 1.5);
        assert!((p.alpha() - 3.49).abs() < 1e-12);
        assert_eq!(p.s_samples, vec![0.01 - 1.5, 0.0, 0.5, 1.5, 2.5]);
    }

    #[test]
    fn framework_constraints() {
        assert!(check_lebesgue_exponent(3, 4.0).is_ok());
        assert!(check_lebesgue_exponent(3, 4.5).unwrap_err().to_string().contains("p ≤ min(4, 2d/(d−2))"));
        assert!(check_lebesgue_exponent(2, 4.0).unwrap_err().to_string().contains("p ≠ 4 if d = 2"));
        assert!(check_lebesgue_exponent(2, 1.5).is_err());
        let err = DecayParams::new(2, 2.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("1 − d/2 < s₁"));
        assert!(DecayParams::new(2, 2.0, 1.1).is_err());
        assert!(DecayParams::new(2, 3.0, 0.2).is_ok());
    }

    #[test]
    fn s_outside_range_rejected() {
        let p = DecayParams::endpoint(2, 2.0).unwrap();
        assert!(p.check_s(-1.0).is_err());
        assert!(p.check_s(2.0).is_ok());
        assert!(p.check_s(2.01).is_err());
    }
}
