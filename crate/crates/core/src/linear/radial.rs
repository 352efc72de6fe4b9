//! Exact whole-space norms of the linear flow for radial initial spectra,
//! computed by adaptive quadrature over `r = |ξ| ∈ (0, r_cut]`.
//!
//! With the transform `â(ξ) = ∫ e^{-ix·ξ} a(x) dx`,
//! `‖Λ^s a(t)‖²_{L²} = σ_{d-1} (2π)^{-d} ∫ |â(t, r)|² r^{2s} r^{d-1} dr`.

use std::sync::Arc;

use num_complex::Complex64;

use super::mode::exponential_unchecked;
use crate::error::{Error, Result};
use crate::physics::PhysicalParams;
use crate::quadrature::{geometric_breaks, integrate};
use crate::series::NormSeries;

type Profile = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Radial initial data: `â₀(r)`, the potential amplitude `ω̂₀(r) = i ξ̂·û₀`
/// and the modulus of the solenoidal part `|P̂ u₀|(r)`.
#[derive(Clone)]
pub struct RadialProfile {
    pub dim: usize,
    pub a0: Profile,
    pub omega0: Profile,
    pub solenoidal0: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Spectra vanish (or are negligible) beyond this radius.
    pub cutoff: f64,
    /// Radii where the profile is not smooth (panel boundaries).
    pub kinks: Vec<f64>,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("dim", &self.dim)
            .field("cutoff", &self.cutoff)
            .field("kinks", &self.kinks)
            .finish()
    }
}

impl RadialProfile {
    /// Purely potential velocity with `ω̂₀ = 1_{r ≤ 1}` and `â₀ = 0`: the
    /// endpoint datum `s₁ = d/2` of the low-frequency scale.
    pub fn potential_indicator(dim: usize) -> Self {
        RadialProfile {
            dim,
            a0: Arc::new(|_| Complex64::new(0.0, 0.0)),
            omega0: Arc::new(|r| Complex64::new(if r <= 1.0 { 1.0 } else { 0.0 }, 0.0)),
            solenoidal0: Arc::new(|_| 0.0),
            cutoff: 1.0,
            kinks: vec![],
        }
    }

    /// Gaussian spectra `(â₀, ω̂₀, |P̂u₀|) = (α, β, γ)·e^{-r²/(2σ²)}`.
    pub fn gaussian(dim: usize, width: f64, weights: [f64; 3]) -> Self {
        let g = move |r: f64| (-0.5 * r * r / (width * width)).exp();
        let [wa, wo, ws] = weights;
        RadialProfile {
            dim,
            a0: Arc::new(move |r| Complex64::new(wa * g(r), 0.0)),
            omega0: Arc::new(move |r| Complex64::new(wo * g(r), 0.0)),
            solenoidal0: Arc::new(move |r| ws * g(r)),
            // e^{-x²/2} < 1e-16 beyond x ≈ 8.6
            cutoff: 9.0 * width,
            kinks: vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.dim) {
            return Err(Error::domain(format!("dimension must be 2 or 3, got {}", self.dim)));
        }
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(Error::domain("profile cutoff must be positive and finite"));
        }
        Ok(())
    }

    /// `(|â(t,r)|², |û(t,r)|²)` under the linear flow.
    pub fn evolved_power(&self, r: f64, t: f64, params: &PhysicalParams<f64>) -> (f64, f64) {
        let e = exponential_unchecked(r, t, params.poisson);
        let a0 = (self.a0)(r);
        let w0 = (self.omega0)(r);
        // ã = â/r; keep â = r·ã finite at r → 0.
        let a = a0 * e.0[0][0] + w0 * (r * e.0[0][1]);
        let w = if r > 0.0 { a0 * (e.0[1][0] / r) } else { Complex64::new(0.0, 0.0) } + w0 * e.0[1][1];
        let heat = (-2.0 * params.mu_inf * r * r * t).exp();
        let p0 = (self.solenoidal0)(r);
        (a.norm_sqr(), w.norm_sqr() + heat * p0 * p0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialNorm {
    L2,
    /// `‖Λ^s ·‖_{L²}`.
    Lambda(f64),
}

impl RadialNorm {
    pub fn order(&self) -> f64 {
        match *self {
            RadialNorm::L2 => 0.0,
            RadialNorm::Lambda(s) => s,
        }
    }

    pub fn tag(&self) -> String {
        format!("[s={}]", self.order())
    }
}

/// `σ_{d-1}(2π)^{-d}`: unit-sphere area over the Plancherel factor.
fn measure_factor(dim: usize) -> f64 {
    let tau = std::f64::consts::TAU;
    match dim {
        2 => tau / (tau * tau),
        _ => 2.0 * tau / (tau * tau * tau),
    }
}

/// Integrates `power(r) r^{2s+d-1}` over the profile support.
pub fn radial_integral(
    profile: &RadialProfile,
    s: f64,
    power: impl Fn(f64) -> f64,
) -> Result<f64> {
    let d = profile.dim as f64;
    let weight = |r: f64| if r > 0.0 { r.powf(2.0 * s + d - 1.0) } else { 0.0 };
    let integrand = |r: f64| power(r) * weight(r);
    // r·integrand must vanish at the origin for integrability.
    let (near, nearer) = (1e-6 * profile.cutoff, 1e-9 * profile.cutoff);
    let g1 = near * integrand(near);
    let g2 = nearer * integrand(nearer);
    if !g1.is_finite() || !g2.is_finite() || (g1 > 0.0 && g2 >= 0.999 * g1) {
        return Err(Error::domain(format!(
            "radial integrand is not integrable at the origin for s = {s}"
        )));
    }
    let mut breaks = geometric_breaks(profile.cutoff, 48);
    breaks.extend(profile.kinks.iter().copied().filter(|&k| k > 0.0 && k < profile.cutoff));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let q = integrate(integrand, &breaks, 1e-11, 1e-300, 20_000);
    Ok(measure_factor(profile.dim) * q.value)
}

/// Whole-space norms `‖Λ^s a(t)‖_{L²}` and `‖Λ^s u(t)‖_{L²}` of the linear
/// flow, recorded as `radial_a[s=..]` and `radial_u[s=..]`.
pub fn radial_decay_quadrature(
    profile: &RadialProfile,
    times: &[f64],
    norm: RadialNorm,
    params: &PhysicalParams<f64>,
) -> Result<NormSeries> {
    profile.validate()?;
    params.validate()?;
    if times.iter().any(|&t| !(t > 0.0 && t.is_finite())) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("times must be positive and strictly increasing"));
    }
    let s = norm.order();
    let tag = norm.tag();
    let mut out = NormSeries::new();
    for &t in times {
        let a2 = radial_integral(profile, s, |r| profile.evolved_power(r, t, params).0)?;
        let u2 = radial_integral(profile, s, |r| profile.evolved_power(r, t, params).1)?;
        out.push(t, &format!("radial_a{tag}"), a2.max(0.0).sqrt())?;
        out.push(t, &format!("radial_u{tag}"), u2.max(0.0).sqrt())?;
    }
    Ok(out)
}

/// `n` times log-spaced over `[t0, t1]`.
pub fn log_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (t0.ln(), t1.ln());
    (0..n)
        .map(|k| (l0 + (l1 - l0) * k as f64 / (n.max(2) - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::propagate::propagate_linear;
    use crate::spectral::{Grid, SpectralField, VectorField};
    use crate::state::FluidState;

    fn slope(series: &[(f64, f64)]) -> f64 {
        let pts: Vec<(f64, f64)> = series
            .iter()
            .map(|&(t, v)| ((1.0 + t * t).sqrt().ln(), v.ln()))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn heat_control_in_3d() {
        let profile = RadialProfile::potential_indicator(3);
        let times = log_times(10.0, 1000.0, 40);
        let values: Vec<(f64, f64)> = times
            .iter()
            .map(|&t| {
                let v = radial_integral(&profile, 0.0, |r| {
                    if r <= 1.0 {
                        (-2.0 * r * r * t).exp()
                    } else {
                        0.0
                    }
                })
                .unwrap();
                (t, v.sqrt())
            })
            .collect();
        let k = slope(&values);
        assert!((k + 0.75).abs() < 0.02, "{k}");
    }

    #[test]
    fn endpoint_data_rates() {
        let profile = RadialProfile::potential_indicator(3);
        let times = log_times(10.0, 1000.0, 60);
        let on = radial_decay_quadrature(&profile, &times, RadialNorm::L2, &PhysicalParams::default()).unwrap();
        let ku = slope(&on.get("radial_u[s=0]"));
        let ka = slope(&on.get("radial_a[s=0]"));
        assert!((ku + 0.75).abs() < 0.05, "u slope {ku}");
        assert!((ka + 1.25).abs() < 0.05, "a slope {ka}");
        let params = PhysicalParams {
            poisson: false,
            ..Default::default()
        };
        let off = radial_decay_quadrature(&profile, &times, RadialNorm::L2, &params).unwrap();
        let ka = slope(&off.get("radial_a[s=0]"));
        assert!((ka + 0.75).abs() < 0.05, "a slope without coupling {ka}");
    }

    #[test]
    fn divergent_weight_rejected() {
        let profile = RadialProfile::potential_indicator(2);
        // ω̂₀ = 1 near 0 and s = -1 in 2D: r^{-1} is not integrable.
        let res = radial_decay_quadrature(&profile, &[1.0], RadialNorm::Lambda(-1.0), &PhysicalParams::default());
        assert!(matches!(res, Err(Error::Domain(_))));
        assert!(radial_decay_quadrature(&profile, &[2.0, 1.0], RadialNorm::L2, &PhysicalParams::default()).is_err());
    }

    #[test]
    fn lattice_matches_whole_space() {
        let side = 64.0 * std::f64::consts::PI;
        let g = Grid::<f64>::new(2, 128, side).unwrap();
        let width = 0.4;
        // â₀ must vanish at the origin in 2D for ã₀ = Λ^{-1}a₀ to be square-integrable.
        let mut profile = RadialProfile::gaussian(2, width, [1.0, 0.7, 0.5]);
        let base = profile.a0.clone();
        profile.a0 = Arc::new(move |r| base(r) * r);
        let vol = g.volume();
        // Coefficients c_k = â(ξ_k)/V sample the whole-space transform.
        let mut a = SpectralField::zeros(&g);
        let mut u = VectorField::zeros(&g);
        for i in 1..g.len() {
            let r = g.radius(i);
            let xi = g.freq(i);
            let amp = (-0.5 * r * r / (width * width)).exp() / vol;
            a.coeffs_mut()[i] = Complex64::new(amp * r, 0.0);
            // û = -i ξ̂ ω̂ + 0.5 i·amp·ξ̂^⊥
            for k in 0..2 {
                let perp = if k == 0 { -xi[1] / r } else { xi[0] / r };
                u.comps_mut()[k].coeffs_mut()[i] = Complex64::new(0.0, 0.5 * amp * perp - 0.7 * amp * xi[k] / r);
            }
        }
        let state = FluidState::new(a, u, 0.0).unwrap();
        let params = PhysicalParams::default();
        let t_max = (side / std::f64::consts::TAU).powi(2) / 10.0;
        let times = [0.5, 5.0, 30.0, t_max];
        let radial = radial_decay_quadrature(&profile, &times, RadialNorm::L2, &params).unwrap();
        for (k, &t) in times.iter().enumerate() {
            let lat = propagate_linear(&state, t, &params).unwrap();
            let la = lat.a.spectral_l2();
            let lu = lat.u.spectral_l2();
            let ra = radial.get("radial_a[s=0]")[k].1;
            let ru = radial.get("radial_u[s=0]")[k].1;
            assert!((la / ra - 1.0).abs() < 0.02, "a at t={t}: {la} vs {ra}");
            assert!((lu / ru - 1.0).abs() < 0.02, "u at t={t}: {lu} vs {ru}");
        }
    }
}
