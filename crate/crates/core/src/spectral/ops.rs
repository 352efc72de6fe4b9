//! Fourier multipliers and the exact spectral differential operators built on
//! them: `∇`, `div`, `curl`, `Λ^s = |D|^s`, `(-Δ)^{-1}` and the Leray pair
//! `P = Id - ∇(-Δ)^{-1}div`, `Q = Id - P`.
//!
//! Negative-order operators set the `ξ = 0` output to zero and refuse fields
//! whose mean is not exactly zero.

use num_complex::Complex;

use super::field::{czero, SpectralField, VectorField};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Multiplies every coefficient by `symbol(ξ)`.
///
/// `at_zero` supplies the value used at `ξ = 0`; without it the field must be
/// mean-zero (the symbol is then never evaluated at the origin).
pub fn apply_multiplier<T: Scalar>(
    field: &SpectralField<T>,
    symbol: impl Fn(&[T; 3]) -> Complex<T>,
    at_zero: Option<Complex<T>>,
) -> Result<SpectralField<T>> {
    if at_zero.is_none() && !field.is_mean_zero() {
        return Err(Error::domain(
            "multiplier has no value at ξ = 0 and the field is not mean-zero",
        ));
    }
    let grid = field.grid();
    let mut out = field.clone();
    for (i, z) in out.coeffs_mut().iter_mut().enumerate() {
        if i == 0 {
            *z = match at_zero {
                Some(m0) => *z * m0,
                None => czero(),
            };
            continue;
        }
        let m = symbol(&grid.freq(i));
        if !(m.re.is_finite() && m.im.is_finite()) {
            return Err(Error::domain(format!(
                "multiplier is not finite at ξ = {:?}",
                grid.freq(i)
            )));
        }
        *z = *z * m;
    }
    Ok(out)
}

/// Radial multiplier `m(|ξ|)`; same zero-mode contract as [`apply_multiplier`].
pub fn apply_radial<T: Scalar>(
    field: &SpectralField<T>,
    symbol: impl Fn(T) -> T,
    at_zero: Option<T>,
) -> Result<SpectralField<T>> {
    if at_zero.is_none() && !field.is_mean_zero() {
        return Err(Error::domain(
            "multiplier has no value at ξ = 0 and the field is not mean-zero",
        ));
    }
    let radii = field.grid().radii();
    let mut out = field.clone();
    for (i, z) in out.coeffs_mut().iter_mut().enumerate() {
        let m = if i == 0 {
            match at_zero {
                Some(m0) => m0,
                None => {
                    *z = czero();
                    continue;
                }
            }
        } else {
            symbol(radii[i])
        };
        if !m.is_finite() {
            return Err(Error::domain(format!("radial multiplier not finite at |ξ| = {}", radii[i])));
        }
        *z = *z * m;
    }
    Ok(out)
}

/// `∂/∂x_axis`.
pub fn partial<T: Scalar>(field: &SpectralField<T>, axis: usize) -> SpectralField<T> {
    let grid = field.grid().clone();
    field.map_coeffs(|i, z| z * Complex::new(T::zero(), grid.freq(i)[axis]))
}

pub fn grad<T: Scalar>(field: &SpectralField<T>) -> VectorField<T> {
    let d = field.grid().dim();
    VectorField::new((0..d).map(|a| partial(field, a)).collect()).expect("component count matches dimension")
}

pub fn div<T: Scalar>(u: &VectorField<T>) -> SpectralField<T> {
    let grid = u.grid().clone();
    let mut out = SpectralField::zeros(&grid);
    for (a, comp) in u.comps().iter().enumerate() {
        for (i, (o, z)) in out.coeffs_mut().iter_mut().zip(comp.coeffs()).enumerate() {
            *o = *o + *z * Complex::new(T::zero(), grid.freq(i)[a]);
        }
    }
    out
}

/// Curl: one component `∂₁u₂ - ∂₂u₁` in 2D, three components in 3D.
pub fn curl<T: Scalar>(u: &VectorField<T>) -> Vec<SpectralField<T>> {
    let c = u.comps();
    let d = |f: &SpectralField<T>, a: usize| partial(f, a);
    match u.dim() {
        2 => vec![&d(&c[1], 0) - &d(&c[0], 1)],
        _ => vec![
            &d(&c[2], 1) - &d(&c[1], 2),
            &d(&c[0], 2) - &d(&c[2], 0),
            &d(&c[1], 0) - &d(&c[0], 1),
        ],
    }
}

pub fn laplacian<T: Scalar>(field: &SpectralField<T>) -> SpectralField<T> {
    let radii = field.grid().radii().to_vec();
    field.map_coeffs(|i, z| z * (-radii[i] * radii[i]))
}

/// `Λ^s = F^{-1}|ξ|^s F`. For `s < 0` the field must be mean-zero.
pub fn lambda<T: Scalar>(field: &SpectralField<T>, s: T) -> Result<SpectralField<T>> {
    if s == T::zero() {
        return Ok(field.clone());
    }
    if s < T::zero() && !field.is_mean_zero() {
        return Err(Error::domain(format!(
            "Λ^{s} needs a mean-zero field"
        )));
    }
    apply_radial(field, |r| r.powf(s), Some(T::zero()))
}

/// `(-Δ)^{-1}` with zero mean output; the field must be mean-zero.
pub fn inv_neg_laplacian<T: Scalar>(field: &SpectralField<T>) -> Result<SpectralField<T>> {
    if !field.is_mean_zero() {
        return Err(Error::domain("(-Δ)^{-1} needs a mean-zero field"));
    }
    apply_radial(field, |r| (r * r).recip(), None)
}

/// Potential projector `Q = ∇(-Δ)^{-1}div`, i.e. `ξ(ξ·û)/|ξ|²`; zero at `ξ = 0`.
pub fn leray_q<T: Scalar>(u: &VectorField<T>) -> VectorField<T> {
    let grid = u.grid().clone();
    let d = u.dim();
    let mut out = VectorField::zeros(&grid);
    for i in 1..grid.len() {
        let xi = grid.freq(i);
        let r2 = grid.radius(i) * grid.radius(i);
        let mut dot = czero::<T>();
        for a in 0..d {
            dot = dot + u.component(a).coeffs()[i] * xi[a];
        }
        for a in 0..d {
            out.comps_mut()[a].coeffs_mut()[i] = dot * (xi[a] / r2);
        }
    }
    out
}

/// Solenoidal projector `P = Id - Q`; the mean flow is kept.
pub fn leray_p<T: Scalar>(u: &VectorField<T>) -> VectorField<T> {
    let q = leray_q(u);
    u.axpy(-T::one(), &q).expect("same grid")
}

/// `ω = Λ^{-1} div u`, the potential amplitude of `u`.
pub fn potential_amplitude<T: Scalar>(u: &VectorField<T>) -> SpectralField<T> {
    let divergence = div(u);
    apply_radial(&divergence, |r| r.recip(), None).expect("divergence is mean-zero")
}

/// Gradient field `-Λ^{-1}∇ω`, the inverse of [`potential_amplitude`] on potential fields.
pub fn potential_from_amplitude<T: Scalar>(omega: &SpectralField<T>) -> VectorField<T> {
    let grid = omega.grid().clone();
    let d = grid.dim();
    let comps = (0..d)
        .map(|a| {
            omega.map_coeffs(|i, z| {
                if i == 0 {
                    return czero();
                }
                let xi = grid.freq(i)[a] / grid.radius(i);
                z * Complex::new(T::zero(), -xi)
            })
        })
        .collect();
    VectorField::new(comps).expect("component count matches dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use crate::spectral::random::{random_field, Support};
    use std::f64::consts::TAU;

    fn tone(l: f64, k: f64) -> SpectralField<f64> {
        let g = Grid::<f64>::new(2, 32, l).unwrap();
        SpectralField::from_fn(&g, move |x| (k * x[0]).cos()).mean_zero()
    }

    #[test]
    fn identity_symbol() {
        let f = tone(TAU, 3.0);
        let out = apply_multiplier(&f, |_| Complex::new(1.0, 0.0), Some(Complex::new(1.0, 0.0))).unwrap();
        assert!(out.max_abs_diff(&f) < 1e-15);
    }

    #[test]
    fn lambda_on_pure_tone() {
        let f = tone(TAU, 3.0);
        let up = apply_multiplier(&f, |xi| Complex::new((xi[0] * xi[0] + xi[1] * xi[1]).sqrt(), 0.0), None).unwrap();
        assert!(up.max_abs_diff(&f.scaled(3.0)) < 1e-13);
        let down = lambda(&f, -1.0).unwrap();
        assert!(down.max_abs_diff(&f.scaled(1.0 / 3.0)) < 1e-14);
    }

    #[test]
    fn singular_symbol_on_nonzero_mean_is_domain_error() {
        let g = Grid::<f64>::new(2, 16, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| 1.0 + x[0].cos());
        assert!(matches!(lambda(&f, -1.0), Err(Error::Domain(_))));
        assert!(matches!(inv_neg_laplacian(&f), Err(Error::Domain(_))));
        assert!(matches!(
            apply_multiplier(&f, |_| Complex::new(1.0, 0.0), None),
            Err(Error::Domain(_))
        ));
        // Positive orders are fine on any field.
        assert!(lambda(&f, 1.0).is_ok());
    }

    #[test]
    fn div_of_gradient_is_laplacian() {
        let g = Grid::<f64>::new(2, 32, TAU).unwrap();
        let phi = SpectralField::from_fn(&g, |x| x[0].sin());
        let lap = div(&grad(&phi));
        let expect = SpectralField::from_fn(&g, |x| -x[0].sin());
        assert!(lap.max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn leray_annihilates_gradients() {
        let g = Grid::<f64>::new(3, 16, TAU).unwrap();
        let phi = random_field(&g, Support::Ball { radius: 5.0 }, 9).unwrap();
        let p = leray_p(&grad(&phi));
        assert!(p.comps().iter().all(|c| c.coeffs().iter().all(|z| z.norm() < 1e-12)));
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let g = Grid::<f64>::new(3, 16, 2.0).unwrap();
        let phi = random_field(&g, Support::Ball { radius: 15.0 }, 1).unwrap();
        for c in curl(&grad(&phi)) {
            assert!(c.coeffs().iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn potential_amplitude_roundtrip() {
        let g = Grid::<f64>::new(2, 32, 7.0).unwrap();
        let phi = random_field(&g, Support::Ball { radius: 6.0 }, 3).unwrap();
        let u = grad(&phi);
        let omega = potential_amplitude(&u);
        let back = potential_from_amplitude(&omega);
        assert!(back.max_abs_diff(&u) < 1e-12);
    }
}
