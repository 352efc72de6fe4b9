//! Space-time norms `L̃^θ_T(Ḃ^s_{p,r})`: time norm per dyadic block first,
//! then the weighted `ℓ^r` sum.

use super::besov::{block_norms, combine_blocks, BesovSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::SpectralField;

/// Time Lebesgue exponent; the functionals only need `θ ∈ {1, ∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeExponent {
    One,
    Infinity,
}

/// `sup` or trapezoidal integral of samples `values[k]` taken at `times[k]`.
pub fn time_norm<T: Scalar>(times: &[T], values: &[T], theta: TimeExponent) -> T {
    match theta {
        TimeExponent::Infinity => values.iter().copied().fold(T::zero(), T::max),
        TimeExponent::One => {
            let half = T::cst(0.5);
            times
                .windows(2)
                .zip(values.windows(2))
                .map(|(t, v)| (t[1] - t[0]) * (v[0].abs() + v[1].abs()) * half)
                .sum()
        }
    }
}

fn check_series<T: Scalar>(times: &[T]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::domain("empty time series"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("time samples must be strictly increasing"));
    }
    Ok(())
}

/// Chemin–Lerner norm from per-time block norms `blocks[k] = [(j, ‖Δ̇_j f(t_k)‖)]`.
pub fn chemin_lerner_from_blocks<T: Scalar>(
    times: &[T],
    blocks: &[Vec<(i32, T)>],
    theta: TimeExponent,
    spec: &BesovSpec<T>,
) -> Result<T> {
    check_series(times)?;
    if blocks.len() != times.len() {
        return Err(Error::structural("one block list per time sample required"));
    }
    let per_block: Vec<(i32, T)> = blocks[0]
        .iter()
        .enumerate()
        .map(|(idx, &(j, _))| {
            let history: Vec<T> = blocks.iter().map(|b| b[idx].1).collect();
            (j, time_norm(times, &history, theta))
        })
        .collect();
    Ok(combine_blocks(&per_block, spec.s, spec.r, spec.restriction))
}

/// `‖f‖_{L̃^θ_T(Ḃ^s_{p,r})}` over a time-sorted series of mean-zero fields.
pub fn chemin_lerner_norm<T: Scalar>(
    series: &[(T, &SpectralField<T>)],
    theta: TimeExponent,
    spec: &BesovSpec<T>,
) -> Result<T> {
    spec.validate()?;
    let times: Vec<T> = series.iter().map(|(t, _)| *t).collect();
    check_series(&times)?;
    let blocks = series
        .iter()
        .map(|(_, f)| {
            if !f.is_mean_zero() {
                return Err(Error::domain("homogeneous norm needs mean-zero fields"));
            }
            block_norms(f, spec.p)
        })
        .collect::<Result<Vec<_>>>()?;
    chemin_lerner_from_blocks(&times, &blocks, theta, spec)
}

/// Ordinary `‖f‖_{L^θ_T(Ḃ^s_{p,r})}` (Besov norm first, then time norm).
pub fn bochner_norm<T: Scalar>(
    series: &[(T, &SpectralField<T>)],
    theta: TimeExponent,
    spec: &BesovSpec<T>,
) -> Result<T> {
    let times: Vec<T> = series.iter().map(|(t, _)| *t).collect();
    check_series(&times)?;
    let values = series
        .iter()
        .map(|(_, f)| super::besov::besov_norm(f, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(time_norm(&times, &values, theta))
}
