//! Rectangle-rule `L^p` norms over the physical samples.

use super::field::{SpectralField, VectorField};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn check_exponent<T: Scalar>(p: T) -> Result<()> {
    if p.is_nan() || p < T::one() {
        return Err(Error::domain(format!("Lebesgue exponent must lie in [1, ∞], got {p}")));
    }
    Ok(())
}

/// `(Σ |f_i|^p · cell)^{1/p}`, or `max |f_i|` for `p = ∞`.
pub fn lp_norm_samples<T: Scalar>(samples: &[T], p: T, cell_volume: T) -> Result<T> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(samples.iter().map(|x| x.abs()).fold(T::zero(), T::max));
    }
    let two = T::one() + T::one();
    let sum: T = if p == two {
        samples.iter().map(|&x| x * x).sum()
    } else if p == T::one() {
        samples.iter().map(|x| x.abs()).sum()
    } else {
        samples.iter().map(|x| x.abs().powf(p)).sum()
    };
    Ok((sum * cell_volume).powf(p.recip()))
}

pub fn lp_norm<T: Scalar>(field: &SpectralField<T>, p: T) -> Result<T> {
    check_exponent(p)?;
    let samples = field.to_physical();
    lp_norm_samples(&samples, p, field.grid().cell_volume())
}

/// `L^p` norm of the pointwise Euclidean magnitude.
pub fn lp_norm_vector<T: Scalar>(u: &VectorField<T>, p: T) -> Result<T> {
    check_exponent(p)?;
    let comps = u.to_physical();
    Ok(lp_norm_components(&comps, p, u.grid().cell_volume())?)
}

/// `L^p` norm of `|(c_1, …, c_m)|` given physical samples of each component.
pub fn lp_norm_components<T: Scalar>(comps: &[Vec<T>], p: T, cell_volume: T) -> Result<T> {
    let n = comps.first().map(|c| c.len()).unwrap_or(0);
    let mag: Vec<T> = (0..n)
        .map(|i| comps.iter().map(|c| c[i] * c[i]).sum::<T>().sqrt())
        .collect();
    lp_norm_samples(&mag, p, cell_volume)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use crate::spectral::random::{random_field, Support};
    use std::f64::consts::TAU;

    #[test]
    fn constant_field_gives_volume_power() {
        let g = Grid::<f64>::new(2, 16, 3.0).unwrap();
        let one = SpectralField::from_fn(&g, |_| 1.0);
        for p in [1.0, 2.0, 3.5] {
            let v = lp_norm(&one, p).unwrap();
            assert!((v - 9.0f64.powf(1.0 / p)).abs() < 1e-12, "p={p}: {v}");
        }
        assert!((lp_norm(&one, f64::INFINITY).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sup_of_cosine() {
        let g = Grid::<f64>::new(2, 32, TAU).unwrap();
        let f = SpectralField::from_fn(&g, |x| x[0].cos());
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parseval() {
        let g = Grid::<f64>::new(3, 16, 2.5).unwrap();
        let f = random_field(&g, Support::Ball { radius: 12.0 }, 5).unwrap();
        let phys = lp_norm(&f, 2.0).unwrap();
        let spec = f.spectral_l2();
        assert!((phys - spec).abs() <= 1e-10 * spec);
    }

    #[test]
    fn invalid_exponent() {
        let g = Grid::<f64>::new(2, 8, 1.0).unwrap();
        let f = SpectralField::zeros(&g);
        assert!(lp_norm(&f, 0.5).is_err());
        assert!(lp_norm(&f, f64::NAN).is_err());
    }
}
