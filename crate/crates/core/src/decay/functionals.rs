//! Per-time norm records and the time-weighted functionals built from them.
//!
//! A [`DecayProbe`] evaluates one state and appends, at its time `t`:
//!
//! | name | value |
//! |---|---|
//! | `low_a_tilde[s=σ]` | `⟨t⟩^{(s₁+σ)/2} ‖ã‖^ℓ_{Ḃ^σ_{2,1}}` |
//! | `low_u[s=σ]` | `⟨t⟩^{(s₁+σ)/2} ‖u‖^ℓ_{Ḃ^σ_{2,1}}` |
//! | `hf_grad_a[j=k]`, `hf_u[j=k]` | `⟨t⟩^α 2^{k(d/p-1)} ‖Δ̇_k(∇a, u)‖_{L^p}` |
//! | `hf_grad_u[j=k]` | `t^α 2^{k d/p} ‖Δ̇_k ∇u‖_{L^p}` |
//! | `e_low_a[j=k]`, `e_low_u[j=k]` | `2^{k(d/2-2)}‖Δ̇_k a‖₂`, `2^{k(d/2-1)}‖Δ̇_k u‖₂` |
//! | `e_low_l1` | `‖(a, ∇u)‖^ℓ_{Ḃ^{d/2}_{2,1}}` |
//! | `e_hf_grad_a[j=k]`, `e_hf_u[j=k]` | `2^{k(d/p-1)}‖Δ̇_k(∇a, u)‖_{L^p}` |
//! | `e_hf_l1` | `‖(a, ∇u)‖^h_{Ḃ^{d/p}_{p,1}}` |
//!
//! Tilde (Chemin–Lerner) sups are taken block by block, so per-block series
//! are kept; pairs are normed as `‖(f, g)‖ = ‖f‖ + ‖g‖`.

use serde::Serialize;

use super::params::{japanese, DecayParams};
use crate::error::{Error, Result};
use crate::lp::{block_norms_components, combine_blocks, DyadicPartition, Restriction, SumExponent};
use crate::series::NormSeries;
use crate::spectral::ops::{grad, partial};
use crate::spectral::SpectralField;
use crate::state::FluidState;

pub fn s_tag(s: f64) -> String {
    format!("[s={s}]")
}

pub fn j_tag(j: i32) -> String {
    format!("[j={j}]")
}

#[derive(Clone, Debug)]
pub struct DecayProbe {
    params: DecayParams,
}

fn weight_2j(j: i32, s: f64) -> f64 {
    (j as f64 * s).exp2()
}

impl DecayProbe {
    pub fn new(params: DecayParams) -> Result<Self> {
        params.validate()?;
        Ok(DecayProbe { params })
    }

    pub fn params(&self) -> &DecayParams {
        &self.params
    }

    /// Appends every record listed in the module table for `state`.
    pub fn record(&self, state: &FluidState<f64>, series: &mut NormSeries) -> Result<()> {
        self.record_s(state, &self.params.s_samples, series)
    }

    fn record_s(&self, state: &FluidState<f64>, samples: &[f64], series: &mut NormSeries) -> Result<()> {
        let prm = &self.params;
        if state.grid().dim() != prm.d {
            return Err(Error::structural(format!(
                "state dimension {} does not match decay parameters (d = {})",
                state.grid().dim(),
                prm.d
            )));
        }
        state.ensure_mean_zero()?;
        let t = state.t;
        let d = prm.d as f64;
        let p = prm.p;
        let j0 = prm.j0;
        let part = DyadicPartition::for_grid(state.grid());
        let norms = |fields: &[&SpectralField<f64>], p: f64| block_norms_components(fields, p, &part);

        let a_tilde = state.a_tilde()?;
        let u_refs: Vec<&SpectralField<f64>> = state.u.comps().iter().collect();
        let grad_a = grad(&state.a);
        let grad_a_refs: Vec<&SpectralField<f64>> = grad_a.comps().iter().collect();
        let grad_u: Vec<SpectralField<f64>> = state
            .u
            .comps()
            .iter()
            .flat_map(|c| (0..prm.d).map(move |k| partial(c, k)))
            .collect();
        let grad_u_refs: Vec<&SpectralField<f64>> = grad_u.iter().collect();

        let low = Restriction::Low(j0);
        let high = Restriction::High(j0);
        let one = SumExponent::One;

        // Low frequencies, L².
        let b_at = norms(&[&a_tilde], 2.0)?;
        let b_a2 = norms(&[&state.a], 2.0)?;
        let b_u2 = norms(&u_refs, 2.0)?;
        let b_du2 = norms(&grad_u_refs, 2.0)?;
        for &s in samples {
            prm.check_s(s)?;
            let w = japanese(t).powf((prm.s1 + s) / 2.0);
            series.push(t, &format!("low_a_tilde{}", s_tag(s)), w * combine_blocks(&b_at, s, one, low))?;
            series.push(t, &format!("low_u{}", s_tag(s)), w * combine_blocks(&b_u2, s, one, low))?;
        }

        // High frequencies, L^p.
        let (b_da, b_up, b_dup, b_ap) = if p == 2.0 {
            (norms(&grad_a_refs, 2.0)?, b_u2.clone(), b_du2.clone(), b_a2.clone())
        } else {
            (
                norms(&grad_a_refs, p)?,
                norms(&u_refs, p)?,
                norms(&grad_u_refs, p)?,
                norms(&[&state.a], p)?,
            )
        };
        let alpha = prm.alpha();
        let w_alpha = japanese(t).powf(alpha);
        let w_alpha_plain = t.max(0.0).powf(alpha);
        let sigma = d / p - 1.0;
        for (k, &(j, bda)) in b_da.iter().enumerate() {
            if !high.admits(j) {
                continue;
            }
            let bu = b_up[k].1;
            let bdu = b_dup[k].1;
            series.push(t, &format!("hf_grad_a{}", j_tag(j)), w_alpha * weight_2j(j, sigma) * bda)?;
            series.push(t, &format!("hf_u{}", j_tag(j)), w_alpha * weight_2j(j, sigma) * bu)?;
            series.push(t, &format!("hf_grad_u{}", j_tag(j)), w_alpha_plain * weight_2j(j, d / p) * bdu)?;
            series.push(t, &format!("e_hf_grad_a{}", j_tag(j)), weight_2j(j, sigma) * bda)?;
            series.push(t, &format!("e_hf_u{}", j_tag(j)), weight_2j(j, sigma) * bu)?;
        }
        for (k, &(j, ba)) in b_a2.iter().enumerate() {
            if !low.admits(j) {
                continue;
            }
            series.push(t, &format!("e_low_a{}", j_tag(j)), weight_2j(j, d / 2.0 - 2.0) * ba)?;
            series.push(t, &format!("e_low_u{}", j_tag(j)), weight_2j(j, d / 2.0 - 1.0) * b_u2[k].1)?;
        }
        let low_l1 = combine_blocks(&b_a2, d / 2.0, one, low) + combine_blocks(&b_du2, d / 2.0, one, low);
        let high_l1 = combine_blocks(&b_ap, d / p, one, high) + combine_blocks(&b_dup, d / p, one, high);
        series.push(t, "e_low_l1", low_l1)?;
        series.push(t, "e_hf_l1", high_l1)?;
        Ok(())
    }
}

/// Weighted series for one regularity `s` (plus the high-frequency series)
/// over a sequence of states.
pub fn weighted_norm_series(states: &[FluidState<f64>], params: &DecayParams, s: f64) -> Result<NormSeries> {
    params.check_s(s)?;
    let probe = DecayProbe::new(params.clone())?;
    let mut out = NormSeries::new();
    for st in states {
        probe.record_s(st, &[s], &mut out)?;
    }
    Ok(out)
}

/// Values of a functional on the common time grid, term by term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalHistory {
    pub times: Vec<f64>,
    pub terms: Vec<(String, Vec<f64>)>,
    pub total: Vec<f64>,
}

impl FunctionalHistory {
    pub fn term(&self, name: &str) -> Option<&[f64]> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }

    pub fn last(&self) -> f64 {
        self.total.last().copied().unwrap_or(0.0)
    }
}

struct Bundle<'a> {
    series: &'a NormSeries,
    times: Option<Vec<f64>>,
}

impl<'a> Bundle<'a> {
    fn values(&mut self, name: &str) -> Result<Vec<f64>> {
        if !self.series.contains(name) {
            return Err(Error::structural(format!("series bundle lacks `{name}`")));
        }
        let pts = self.series.get(name);
        let times: Vec<f64> = pts.iter().map(|p| p.0).collect();
        match &self.times {
            None => self.times = Some(times),
            Some(ts) if *ts == times => {}
            Some(_) => return Err(Error::structural(format!("`{name}` is not on the common time grid"))),
        }
        Ok(pts.into_iter().map(|p| p.1).collect())
    }

    /// Every name of the form `prefix[j=…]`.
    fn blocks(&mut self, prefix: &str) -> Result<Vec<Vec<f64>>> {
        let names: Vec<String> = self
            .series
            .names()
            .into_iter()
            .filter(|n| n.strip_prefix(prefix).is_some_and(|rest| rest.starts_with("[j=")))
            .map(str::to_string)
            .collect();
        if names.is_empty() {
            return Err(Error::structural(format!("series bundle lacks `{prefix}[j=..]` entries")));
        }
        names.iter().map(|n| self.values(n)).collect()
    }
}

fn running_max(v: &[f64]) -> Vec<f64> {
    let mut m = 0.0f64;
    v.iter()
        .map(|&x| {
            m = m.max(x);
            m
        })
        .collect()
}

fn sum_running_max(blocks: &[Vec<f64>]) -> Vec<f64> {
    let n = blocks.first().map_or(0, Vec::len);
    let mut out = vec![0.0; n];
    for b in blocks {
        for (o, m) in out.iter_mut().zip(running_max(b)) {
            *o += m;
        }
    }
    out
}

fn cumulative_trapezoid(times: &[f64], v: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(v.len());
    for k in 0..v.len() {
        if k > 0 {
            acc += 0.5 * (times[k] - times[k - 1]) * (v[k] + v[k - 1]);
        }
        out.push(acc);
    }
    out
}

fn assemble(times: Vec<f64>, terms: Vec<(String, Vec<f64>)>) -> FunctionalHistory {
    let total = (0..times.len()).map(|k| terms.iter().map(|(_, v)| v[k]).sum()).collect();
    FunctionalHistory { times, terms, total }
}

/// Running `D_p(t)`: sup over the sampled `s` of the low-frequency weighted
/// sups, plus the two high-frequency weighted tilde norms.
pub fn functional_d(series: &NormSeries, params: &DecayParams) -> Result<FunctionalHistory> {
    let mut b = Bundle { series, times: None };
    let mut low: Option<Vec<f64>> = None;
    for &s in &params.s_samples {
        let at = running_max(&b.values(&format!("low_a_tilde{}", s_tag(s)))?);
        let u = running_max(&b.values(&format!("low_u{}", s_tag(s)))?);
        let here: Vec<f64> = at.iter().zip(&u).map(|(x, y)| x + y).collect();
        low = Some(match low {
            None => here,
            Some(prev) => prev.iter().zip(&here).map(|(x, y)| x.max(*y)).collect(),
        });
    }
    let low = low.ok_or_else(|| Error::structural("no s samples"))?;
    let ga = sum_running_max(&b.blocks("hf_grad_a")?);
    let u = sum_running_max(&b.blocks("hf_u")?);
    let gu = sum_running_max(&b.blocks("hf_grad_u")?);
    let hf1 = ga.iter().zip(&u).map(|(x, y)| x + y).collect();
    let times = b.times.take().unwrap_or_default();
    Ok(assemble(
        times,
        vec![
            ("low".into(), low),
            ("high_grad_a_u".into(), hf1),
            ("high_grad_u".into(), gu),
        ],
    ))
}

/// Running `E_p(t)`: the five low/high terms, with tilde sups per block and
/// trapezoidal `L¹` time integrals.
pub fn functional_e(series: &NormSeries) -> Result<FunctionalHistory> {
    let mut b = Bundle { series, times: None };
    let la = sum_running_max(&b.blocks("e_low_a")?);
    let lu = sum_running_max(&b.blocks("e_low_u")?);
    let l1 = b.values("e_low_l1")?;
    let ha = sum_running_max(&b.blocks("e_hf_grad_a")?);
    let hu = sum_running_max(&b.blocks("e_hf_u")?);
    let h1 = b.values("e_hf_l1")?;
    let times = b.times.take().unwrap_or_default();
    let hf: Vec<f64> = ha.iter().zip(&hu).map(|(x, y)| x + y).collect();
    Ok(assemble(
        times.clone(),
        vec![
            ("low_a".into(), la),
            ("low_u".into(), lu),
            ("low_l1".into(), cumulative_trapezoid(&times, &l1)),
            ("high_grad_a_u".into(), hf),
            ("high_l1".into(), cumulative_trapezoid(&times, &h1)),
        ],
    ))
}
