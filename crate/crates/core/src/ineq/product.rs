//! Product laws in homogeneous Besov spaces, including the non-classical
//! low-frequency estimate for products with a high-frequency factor.

use serde::Serialize;

use super::{lab_field, product, LabSetup, RatioReport};
use crate::error::{Error, Result};
use crate::lp::{besov_norm, dyadic_block, BesovSpec, BlockKind, SumExponent};
use crate::spectral::{lp_norm, GridRef, SpectralField, Support};

/// Data used for the `Ḃ^{-σ}_{p₂,∞}` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NegativeData {
    /// One dyadic annulus.
    SingleAnnulus,
    /// Sum over all annuli inside the band, block `j` weighted by `2^{jσ}` so
    /// every block contributes comparably to the `ℓ^∞` norm.
    MultiAnnulus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProductLaw {
    /// `‖fg‖_{Ḃ^σ_{p,r}} ≲ ‖f‖_∞‖g‖_{Ḃ^σ_{p,r}} + ‖g‖_∞‖f‖_{Ḃ^σ_{p,r}}`.
    Algebra { sigma: f64, p: f64, r: SumExponent },
    /// `‖fg‖_{Ḃ^{σ₂}_{q,1}} ≲ ‖f‖_{Ḃ^{σ₁}_{p₁,1}}‖g‖_{Ḃ^{σ₂}_{p₂,1}}`, `1/q = 1/p₁ + 1/p₂ - σ₁/d`.
    Mixed { sigma1: f64, sigma2: f64, p1: f64, p2: f64 },
    /// `‖fg‖_{Ḃ^{-σ}_{q,∞}} ≲ ‖f‖_{Ḃ^σ_{p₁,1}}‖g‖_{Ḃ^{-σ}_{p₂,∞}}`, `1/q = 1/p₁ + 1/p₂ - σ/d`.
    Negative { sigma: f64, p1: f64, p2: f64, data: NegativeData },
}

fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

fn require(cond: bool, constraint: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::hypothesis(format!("{constraint} violated")))
    }
}

fn check_lebesgue(p: f64, name: &str) -> Result<()> {
    require(p >= 1.0, &format!("1 ≤ {name} ≤ ∞"))
}

impl ProductLaw {
    pub fn validate(&self, d: usize) -> Result<()> {
        let d = d as f64;
        match *self {
            ProductLaw::Algebra { sigma, p, .. } => {
                check_lebesgue(p, "p")?;
                require(sigma > 0.0, "σ > 0")
            }
            ProductLaw::Mixed { sigma1, sigma2, p1, p2 } => {
                check_lebesgue(p1, "p₁")?;
                check_lebesgue(p2, "p₂")?;
                require(sigma1 + sigma2 > 0.0, "σ₁ + σ₂ > 0")?;
                require(sigma1 <= d * inv(p1), "σ₁ ≤ d/p₁")?;
                require(sigma2 <= d * inv(p2), "σ₂ ≤ d/p₂")?;
                require(sigma1 >= sigma2, "σ₁ ≥ σ₂")?;
                require(inv(p1) + inv(p2) <= 1.0, "1/p₁ + 1/p₂ ≤ 1")
            }
            ProductLaw::Negative { sigma, p1, p2, .. } => {
                check_lebesgue(p1, "p₁")?;
                check_lebesgue(p2, "p₂")?;
                require(sigma > 0.0, "σ > 0")?;
                require(d * inv(p1) + d * inv(p2) - d <= sigma, "d/p₁ + d/p₂ - d ≤ σ")?;
                require(sigma <= d * inv(p1).min(inv(p2)), "σ ≤ min(d/p₁, d/p₂)")?;
                let iq = inv(p1) + inv(p2) - sigma / d;
                require((0.0..=1.0).contains(&iq), "1 ≤ q ≤ ∞")
            }
        }
    }

    /// Lebesgue exponent of the product, `∞` encoded as `f64::INFINITY`.
    pub fn target_exponent(&self, d: usize) -> f64 {
        let d = d as f64;
        let iq = match *self {
            ProductLaw::Algebra { p, .. } => inv(p),
            ProductLaw::Mixed { sigma1, p1, p2, .. } => inv(p1) + inv(p2) - sigma1 / d,
            ProductLaw::Negative { sigma, p1, p2, .. } => inv(p1) + inv(p2) - sigma / d,
        };
        if iq == 0.0 {
            f64::INFINITY
        } else {
            1.0 / iq
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ProductLaw::Algebra { sigma, p, r } => format!("product_algebra[s={sigma},p={p},r={r:?}]"),
            ProductLaw::Mixed { sigma1, sigma2, p1, p2 } => {
                format!("product_mixed[s1={sigma1},s2={sigma2},p1={p1},p2={p2}]")
            }
            ProductLaw::Negative { sigma, p1, p2, data } => {
                format!("product_negative[s={sigma},p1={p1},p2={p2},{data:?}]")
            }
        }
    }

    /// `(LHS, RHS)` for one pair of factors.
    pub fn evaluate(&self, f: &SpectralField<f64>, g: &SpectralField<f64>) -> Result<(f64, f64)> {
        let d = f.grid().dim();
        let q = self.target_exponent(d);
        let fg = product(f, g)?.mean_zero();
        let b = |h: &SpectralField<f64>, s: f64, p: f64, r: SumExponent| besov_norm(h, &BesovSpec::new(s, p, r));
        match *self {
            ProductLaw::Algebra { sigma, p, r } => {
                let rhs = lp_norm(f, f64::INFINITY)? * b(g, sigma, p, r)? + lp_norm(g, f64::INFINITY)? * b(f, sigma, p, r)?;
                Ok((b(&fg, sigma, p, r)?, rhs))
            }
            ProductLaw::Mixed { sigma1, sigma2, p1, p2 } => {
                let one = SumExponent::One;
                Ok((b(&fg, sigma2, q, one)?, b(f, sigma1, p1, one)? * b(g, sigma2, p2, one)?))
            }
            ProductLaw::Negative { sigma, p1, p2, .. } => {
                let inf = SumExponent::Infinity;
                Ok((
                    b(&fg, -sigma, q, inf)?,
                    b(f, sigma, p1, SumExponent::One)? * b(g, -sigma, p2, inf)?,
                ))
            }
        }
    }
}

/// Largest dyadic index whose annulus `(3/4·2^j, 8/3·2^j)` fits inside `band`.
fn top_block(band: f64) -> i32 {
    (band * 3.0 / 8.0).log2().floor() as i32
}

fn negative_factor(grid: &GridRef<f64>, band: f64, sigma: f64, data: NegativeData, seed: u64) -> Result<SpectralField<f64>> {
    let top = top_block(band);
    match data {
        NegativeData::SingleAnnulus => lab_field(grid, Support::Annulus { j: top }, seed),
        NegativeData::MultiAnnulus => {
            let bottom = top_block(grid.k_min() * 8.0 / 3.0 * 2.0).min(top) - 1;
            let mut acc = SpectralField::zeros(grid);
            for (k, j) in (bottom..=top).enumerate() {
                let piece = lab_field(grid, Support::Annulus { j }, super::splitmix64(seed ^ k as u64))?;
                acc = acc.axpy(2f64.powf(j as f64 * sigma), &piece)?;
            }
            Ok(acc)
        }
    }
}

pub fn check_product_laws(setup: &LabSetup, law: &ProductLaw) -> Result<RatioReport> {
    law.validate(setup.dim)?;
    let band = setup.band();
    let ball = Support::Ball { radius: band };
    setup.run(&law.name(), |grid, seed| {
        let f = lab_field(grid, ball, seed)?;
        let g = match *law {
            ProductLaw::Negative { sigma, data, .. } => negative_factor(grid, band, sigma, data, super::splitmix64(seed))?,
            _ => lab_field(grid, ball, super::splitmix64(seed))?,
        };
        law.evaluate(&f, &g)
    })
}

/// `s₀ = 2d/p - d/2` and `p*` with `1/p* = 1/2 - 1/p`.
pub fn nonclassical_exponents(d: usize, p: f64) -> Result<(f64, f64)> {
    require((2.0..=4.0).contains(&p), "2 ≤ p ≤ 4")?;
    require(p > 2.0, "1/p* = 1/2 - 1/p > 0")?;
    let d = d as f64;
    Ok((2.0 * d / p - d / 2.0, 1.0 / (0.5 - 1.0 / p)))
}

/// Which factor carries the high-frequency restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HighFactor {
    /// `‖f g^h‖^ℓ ≤ C(‖f‖_{Ḃ^σ_{p,1}} + ‖Ṡ_{j₀+N₀}f‖_{L^{p*}})‖g^h‖_{Ḃ^{-σ}_{p,∞}}`.
    Right,
    /// `‖f^h g‖^ℓ ≤ C(‖f^h‖_{Ḃ^σ_{p,1}} + ‖Ṡ_{j₀+N₀}f^h‖_{L^{p*}})‖g‖_{Ḃ^{-σ}_{p,∞}}`.
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonclassicalCase {
    pub p: f64,
    pub sigma: f64,
    pub j0: i32,
    pub form: HighFactor,
    pub n0_max: u32,
}

impl NonclassicalCase {
    pub fn validate(&self, d: usize) -> Result<()> {
        nonclassical_exponents(d, self.p)?;
        require(self.sigma > 0.0, "σ > 0")?;
        if !(1..=12).contains(&self.n0_max) {
            return Err(Error::domain("N₀ scan range must be 1..=n with n ≤ 12"));
        }
        Ok(())
    }

    pub fn name(&self, n0: u32) -> String {
        format!(
            "nonclassical[{:?},p={},s={},j0={},N0={n0}]",
            self.form, self.p, self.sigma, self.j0
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonclassicalOutcome {
    /// One report per `N₀ = 1, …, n0_max`.
    pub reports: Vec<RatioReport>,
    /// Smallest `N₀` from which the max ratio moves by less than the
    /// refinement tolerance for every larger `N₀` in the scan.
    pub stable_n0: Option<u32>,
}

/// `sup_{j ≤ j₀} 2^{-j s₀}‖Δ̇_j h‖_{L²}`.
pub fn low_negative_norm(h: &SpectralField<f64>, s0: f64, j0: i32) -> Result<f64> {
    besov_norm(&h.clone().mean_zero(), &BesovSpec::new(-s0, 2.0, SumExponent::Infinity).low(j0))
}

/// `z^h = z - Ṡ_{j₀}z`.
pub fn high_part(z: &SpectralField<f64>, j0: i32) -> Result<SpectralField<f64>> {
    z.axpy(-1.0, &dyadic_block(z, BlockKind::LowCut(j0)))
}

pub fn check_nonclassical_product(setup: &LabSetup, case: &NonclassicalCase) -> Result<NonclassicalOutcome> {
    case.validate(setup.dim)?;
    setup.validate()?;
    let (s0, p_star) = nonclassical_exponents(setup.dim, case.p)?;
    let band = setup.band();
    let mut reports: Vec<RatioReport> = (1..=case.n0_max).map(|n0| RatioReport::new(case.name(n0))).collect();
    for &n in &setup.grids {
        let grid = setup.grid(n)?;
        for seed in setup.seeds() {
            let f = lab_field(&grid, Support::Ball { radius: band }, seed)?;
            let (lo_f, hi_factor) = match case.form {
                HighFactor::Right => {
                    let inner = 0.75 * 2f64.powi(case.j0 + 3);
                    let outer = (8.0 / 3.0 * 2f64.powi(case.j0 + 3)).min(band);
                    let g = lab_field(&grid, Support::Shell { inner, outer }, super::splitmix64(seed))?;
                    let gh = high_part(&g, case.j0)?;
                    (f.clone(), gh)
                }
                HighFactor::Left => {
                    let fh = high_part(&f, case.j0)?;
                    let g = lab_field(&grid, Support::Ball { radius: band }, super::splitmix64(seed))?;
                    (fh, g)
                }
            };
            // `lo_f` is measured in Ḃ^σ_{p,1} + L^{p*}, `hi_factor` in Ḃ^{-σ}_{p,∞}.
            let lhs = low_negative_norm(&product(&lo_f, &hi_factor)?, s0, case.j0)?;
            let b_pos = besov_norm(&lo_f, &BesovSpec::new(case.sigma, case.p, SumExponent::One))?;
            let b_neg = besov_norm(&hi_factor, &BesovSpec::new(-case.sigma, case.p, SumExponent::Infinity))?;
            for (k, rep) in reports.iter_mut().enumerate() {
                let n0 = k as i32 + 1;
                let low = dyadic_block(&lo_f, BlockKind::LowCut(case.j0 + n0));
                let rhs = (b_pos + lp_norm(&low, p_star)?) * b_neg;
                rep.record(n, seed, lhs, rhs)?;
            }
        }
    }
    let maxima: Vec<f64> = reports.iter().map(|r| r.max_ratio()).collect();
    let stable_n0 = (0..maxima.len())
        .find(|&k| {
            maxima[k..]
                .iter()
                .all(|&m| maxima[k] > 0.0 && (m / maxima[k] - 1.0).abs() < super::REFINEMENT_TOLERANCE)
        })
        .map(|k| k as u32 + 1);
    Ok(NonclassicalOutcome { reports, stable_n0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> LabSetup {
        LabSetup {
            grids: vec![64, 128],
            trials: 4,
            ..LabSetup::default()
        }
    }

    #[test]
    fn target_exponent_arithmetic() {
        let law = ProductLaw::Mixed {
            sigma1: 0.5,
            sigma2: 0.5,
            p1: 2.0,
            p2: 2.0,
        };
        law.validate(2).unwrap();
        assert!((law.target_exponent(2) - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn violated_constraints_are_named() {
        let cases = [
            (
                ProductLaw::Mixed {
                    sigma1: 0.25,
                    sigma2: 0.5,
                    p1: 2.0,
                    p2: 2.0,
                },
                "σ₁ ≥ σ₂",
            ),
            (
                ProductLaw::Mixed {
                    sigma1: 1.5,
                    sigma2: 0.5,
                    p1: 2.0,
                    p2: 2.0,
                },
                "σ₁ ≤ d/p₁",
            ),
            (
                ProductLaw::Algebra {
                    sigma: 0.0,
                    p: 2.0,
                    r: SumExponent::One,
                },
                "σ > 0",
            ),
            (
                ProductLaw::Negative {
                    sigma: 1.5,
                    p1: 2.0,
                    p2: 2.0,
                    data: NegativeData::SingleAnnulus,
                },
                "σ ≤ min(d/p₁, d/p₂)",
            ),
        ];
        for (law, name) in cases {
            match check_product_laws(&quick(), &law) {
                Err(Error::Hypothesis(m)) => assert!(m.contains(name), "{m}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn algebra_law_on_random_data() {
        let law = ProductLaw::Algebra {
            sigma: 0.5,
            p: 2.0,
            r: SumExponent::One,
        };
        let rep = check_product_laws(&quick(), &law).unwrap();
        let s = rep.summary();
        assert!(s.grid_stable, "{s:?}");
        assert!(s.grids[0].max < 10.0);
    }

    #[test]
    fn nonclassical_exponents_arithmetic() {
        let (s0, ps) = nonclassical_exponents(3, 4.0).unwrap();
        assert!(s0.abs() < 1e-15 && (ps - 4.0).abs() < 1e-12);
        let (s0, ps) = nonclassical_exponents(2, 3.0).unwrap();
        assert!((s0 - 1.0 / 3.0).abs() < 1e-15 && (ps - 6.0).abs() < 1e-12);
        assert!(nonclassical_exponents(2, 2.0).is_err());
        assert!(nonclassical_exponents(2, 4.5).is_err());
    }

    #[test]
    fn nonclassical_scan_stabilises() {
        let case = NonclassicalCase {
            p: 4.0,
            sigma: 0.5,
            j0: 0,
            form: HighFactor::Right,
            n0_max: 6,
        };
        let out = check_nonclassical_product(&quick(), &case).unwrap();
        assert_eq!(out.reports.len(), 6);
        // Larger N₀ enlarges the right-hand side.
        let m: Vec<f64> = out.reports.iter().map(|r| r.max_ratio()).collect();
        assert!(m.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{m:?}");
        assert!(m[0] > 0.0);
        assert!(out.stable_n0.is_some());
    }
}
