//! Trial records, per-grid summaries and per-trial seed derivation.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest admissible relative growth of the max ratio between consecutive grids.
pub const REFINEMENT_TOLERANCE: f64 = 0.10;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// One step of SplitMix64: advance `z` by the golden-ratio increment and mix.
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `k`: the `k`-th output of the SplitMix64 stream started at `master`.
///
/// Trials on different grids reuse the same seeds, so a refinement scan
/// compares the same functions sampled more finely.
pub fn trial_seed(master: u64, k: u64) -> u64 {
    splitmix64(master.wrapping_add(k.wrapping_mul(GOLDEN)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trial {
    pub case: String,
    pub n: usize,
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSummary {
    pub n: usize,
    pub trials: usize,
    pub min: f64,
    pub q10: f64,
    pub median: f64,
    pub q90: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioSummary {
    pub case: String,
    pub grids: Vec<GridSummary>,
    /// `max_{k+1} / max_k - 1` for consecutive grid sizes.
    pub growth: Vec<f64>,
    pub max_growth: f64,
    pub grid_stable: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RatioReport {
    pub case: String,
    pub trials: Vec<Trial>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub const CSV_HEADER: &str = "case,n,seed,lhs,rhs,ratio";

impl RatioReport {
    pub fn new(case: impl Into<String>) -> Self {
        RatioReport {
            case: case.into(),
            trials: Vec::new(),
        }
    }

    pub fn record(&mut self, n: usize, seed: u64, lhs: f64, rhs: f64) -> Result<()> {
        if !(rhs > 0.0 && rhs.is_finite()) {
            return Err(Error::domain(format!(
                "{}: right-hand side must be positive and finite, got {rhs} (n = {n}, seed = {seed})",
                self.case
            )));
        }
        if !(lhs >= 0.0 && lhs.is_finite()) {
            return Err(Error::domain(format!(
                "{}: left-hand side must be finite and nonnegative, got {lhs}",
                self.case
            )));
        }
        self.trials.push(Trial {
            case: self.case.clone(),
            n,
            seed,
            lhs,
            rhs,
            ratio: lhs / rhs,
        });
        Ok(())
    }

    /// Grid sizes present, ascending.
    pub fn grid_sizes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.trials.iter().map(|t| t.n).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn ratios(&self, n: usize) -> Vec<f64> {
        self.trials.iter().filter(|t| t.n == n).map(|t| t.ratio).collect()
    }

    pub fn max_ratio(&self) -> f64 {
        self.trials.iter().map(|t| t.ratio).fold(0.0, f64::max)
    }

    pub fn summary(&self) -> RatioSummary {
        let grids: Vec<GridSummary> = self
            .grid_sizes()
            .into_iter()
            .map(|n| {
                let mut r = self.ratios(n);
                r.sort_by(f64::total_cmp);
                GridSummary {
                    n,
                    trials: r.len(),
                    min: r[0],
                    q10: quantile(&r, 0.1),
                    median: quantile(&r, 0.5),
                    q90: quantile(&r, 0.9),
                    max: r[r.len() - 1],
                }
            })
            .collect();
        let growth: Vec<f64> = grids
            .windows(2)
            .map(|w| if w[0].max > 0.0 { w[1].max / w[0].max - 1.0 } else { 0.0 })
            .collect();
        let max_growth = growth.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        RatioSummary {
            case: self.case.clone(),
            grid_stable: !growth.is_empty() && max_growth < REFINEMENT_TOLERANCE,
            max_growth: if growth.is_empty() { 0.0 } else { max_growth },
            grids,
            growth,
        }
    }

    /// Rows under [`CSV_HEADER`]; case names with commas are quoted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            out.push_str(&format!("{},{},{},{},{},{}\n", csv_field(&t.case), t.n, t.seed, t.lhs, t.rhs, t.ratio));
        }
        out
    }
}

/// Quotes a CSV field when it holds a separator or a quote.
pub fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}
