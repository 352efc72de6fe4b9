//! The per-frequency 2×2 system for `(ã, ω) = (Λ^{-1}a, Λ^{-1}div u)`:
//! `d/dt (ã, ω) = M(r) (ã, ω)` with `M(r) = [[0, -1], [r² + 1, -r²]]`
//! (or `[[0, -1], [r², -r²]]` without the Poisson coupling).

use std::ops::Mul;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// Real 2×2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Scalar> Mat2<T> {
    pub fn identity() -> Self {
        Mat2([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> T {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn apply_complex(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            v[0] * self.0[0][0] + v[1] * self.0[0][1],
            v[0] * self.0[1][0] + v[1] * self.0[1][1],
        ]
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> T {
        let m = &self.0;
        let frob = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
        let two_det = (self.det() + self.det()).abs();
        // σ² = (F + sqrt((F - 2|det|)(F + 2|det|))) / 2, stable when the singular values are close.
        let gap = ((frob - two_det).max(T::zero()) * (frob + two_det)).sqrt();
        ((frob + gap) * c(0.5)).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        m
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, rhs: Mat2<T>) -> Mat2<T> {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

/// `det M(r)`: `r² + 1` with the Poisson coupling, `r²` without.
#[inline]
fn coupling<T: Scalar>(r: T, poisson: bool) -> T {
    if poisson {
        r * r + T::one()
    } else {
        r * r
    }
}

fn generator<T: Scalar>(r: T, poisson: bool) -> Mat2<T> {
    Mat2([[T::zero(), -T::one()], [coupling(r, poisson), -(r * r)]])
}

/// Generator `M(r)`; `r` must be positive.
pub fn mode_matrix<T: Scalar>(r: T, poisson: bool) -> Result<Mat2<T>> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::domain(format!("mode radius must be positive, got {r}")));
    }
    Ok(generator(r, poisson))
}

/// `r⁴/4 - det M`, a quarter of the discriminant of `λ² + r²λ + det M`.
pub fn discriminant<T: Scalar>(r: T, poisson: bool) -> T {
    let h = r * r * c(0.5);
    h * h - coupling(r, poisson)
}

/// Radius where the two eigenvalues collide: `r² = 2 + 2√2` with the Poisson
/// coupling, `r = 2` without.
pub fn degenerate_radius<T: Scalar>(poisson: bool) -> T {
    if poisson {
        (c::<T>(2.0) + c::<T>(2.0) * T::SQRT_2()).sqrt()
    } else {
        c(2.0)
    }
}

pub fn eigenvalues<T: Scalar>(r: T, poisson: bool) -> [Complex<T>; 2] {
    let lam = -(r * r) * c(0.5);
    let q = discriminant(r, poisson);
    if q >= T::zero() {
        let delta = q.sqrt();
        // λ₊ = det / λ₋ avoids cancellation at large r.
        let minus = lam - delta;
        let plus = if minus == T::zero() { T::zero() } else { coupling(r, poisson) / minus };
        [Complex::new(plus, T::zero()), Complex::new(minus, T::zero())]
    } else {
        let beta = (-q).sqrt();
        [Complex::new(lam, beta), Complex::new(lam, -beta)]
    }
}

/// Below this `|q t²|` the hyperbolic/trigonometric coefficients come from
/// their Taylor series; the series then has converged to round-off.
const SERIES_SWITCH: f64 = 0.1;
const SERIES_TERMS: usize = 12;

/// `exp(t M(r))`, valid for `r ≥ 0`.
///
/// With `λ = -r²/2` and `N = M - λI` one has `N² = q I`, hence
/// `exp(tM) = e^{λt} (C I + S N)` with `C = cosh(√q t)`, `S = sinh(√q t)/√q`
/// (analytically continued for `q < 0`). Near the eigenvalue collision `C`
/// and `S` are summed as power series in `q t²`, which contains the Jordan
/// limit `e^{λt}(I + tN)` as its leading term.
pub fn mode_exponential<T: Scalar>(r: T, t: T, poisson: bool) -> Result<Mat2<T>> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::domain(format!("mode radius must be non-negative, got {r}")));
    }
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::domain(format!("time must be non-negative, got {t}")));
    }
    Ok(exponential_unchecked(r, t, poisson))
}

pub(crate) fn exponential_unchecked<T: Scalar>(r: T, t: T, poisson: bool) -> Mat2<T> {
    let r2 = r * r;
    let lam = -r2 * c(0.5);
    let det = coupling(r, poisson);
    let q = discriminant(r, poisson);
    let z = q * t * t;
    // (e^{λt} C, e^{λt} S)
    let (ec, es) = if z.abs() <= c(SERIES_SWITCH) {
        let mut term_c = T::one();
        let mut term_s = T::one();
        let mut sum_c = T::one();
        let mut sum_s = T::one();
        for k in 1..=SERIES_TERMS {
            let k2 = c::<T>(2.0 * k as f64);
            term_c = term_c * z / (k2 * (k2 - T::one()));
            term_s = term_s * z / (k2 * (k2 + T::one()));
            sum_c = sum_c + term_c;
            sum_s = sum_s + term_s;
        }
        let e = (lam * t).exp();
        (e * sum_c, e * t * sum_s)
    } else if q > T::zero() {
        let delta = q.sqrt();
        let slow = -det / (r2 * c(0.5) + delta);
        let fast = lam - delta;
        let ep = (slow * t).exp();
        let em = (fast * t).exp();
        ((ep + em) * c(0.5), (ep - em) / (delta + delta))
    } else {
        let beta = (-q).sqrt();
        let e = (lam * t).exp();
        let (s, co) = (beta * t).sin_cos();
        (e * co, e * s / beta)
    };
    // ec·I + es·(M - λI)
    Mat2([
        [ec - es * lam, -es],
        [es * det, ec + es * (-r2 - lam)],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rk4(m: Mat2<f64>, t: f64, dt: f64) -> Mat2<f64> {
        let steps = (t / dt).round() as usize;
        let h = t / steps as f64;
        let f = |x: Mat2<f64>| m * x;
        let add = |a: Mat2<f64>, b: Mat2<f64>, s: f64| {
            let mut o = a;
            for i in 0..2 {
                for j in 0..2 {
                    o.0[i][j] += s * b.0[i][j];
                }
            }
            o
        };
        let mut x = Mat2::identity();
        for _ in 0..steps {
            let k1 = f(x);
            let k2 = f(add(x, k1, h / 2.0));
            let k3 = f(add(x, k2, h / 2.0));
            let k4 = f(add(x, k3, h));
            x = add(x, add(add(k1, k4, 1.0), add(k2, k3, 1.0), 2.0), h / 6.0);
        }
        x
    }

    #[test]
    fn matrix_at_unit_radius() {
        let m = mode_matrix(1.0, true).unwrap();
        assert_eq!(m, Mat2([[0.0, -1.0], [2.0, -1.0]]));
        assert_eq!(m.trace(), -1.0);
        assert_eq!(m.det(), 2.0);
        let ev = eigenvalues(1.0, true);
        assert!((ev[0] - Complex::new(-0.5, 7f64.sqrt() / 2.0)).norm() < 1e-15);
        assert!(mode_matrix(0.0, true).is_err());
        assert!(mode_matrix(-1.0, false).is_err());
        let off = mode_matrix(2.0, false).unwrap();
        assert_eq!(off.det(), 4.0);
    }

    #[test]
    fn degenerate_radius_is_root_of_discriminant() {
        let r: f64 = degenerate_radius(true);
        assert!((r - 2.19737).abs() < 1e-5);
        assert!(discriminant(r, true).abs() < 1e-13);
        assert_eq!(discriminant(2.0, false), 0.0);
    }

    #[test]
    fn identity_at_time_zero() {
        for r in [0.0, 0.3, 2.19737, 50.0] {
            let e = mode_exponential(r, 0.0, true).unwrap();
            assert!(e.max_abs_diff(&Mat2::identity()) < 1e-15);
        }
    }

    #[test]
    fn matches_rk4() {
        for &r in &[0.01, 0.5, 1.0, 2.0, 2.19737, 3.0, 10.0] {
            for &t in &[0.1, 1.0, 2.0] {
                let exact = mode_exponential(r, t, true).unwrap();
                let dt = (1e-4f64).min(0.2 / (r * r));
                let oracle = rk4(mode_matrix(r, true).unwrap(), t, dt);
                let rel = exact.max_abs_diff(&oracle) / oracle.max_abs().max(1e-300);
                assert!(rel < 1e-8, "r={r} t={t} rel={rel:e}");
            }
        }
    }

    #[test]
    fn semigroup_across_branches() {
        for &r in &[0.01, 0.1, 1.0, 2.19737, 5.0] {
            for poisson in [true, false] {
                let (t1, t2) = (0.37, 1.9);
                let lhs = mode_exponential(r, t1 + t2, poisson).unwrap();
                let rhs = mode_exponential(r, t1, poisson).unwrap() * mode_exponential(r, t2, poisson).unwrap();
                assert!(lhs.max_abs_diff(&rhs) < 1e-10, "r={r}");
            }
        }
    }

    #[test]
    fn zero_radius_is_rotation() {
        let e = mode_exponential(0.0f64, 7.3, true).unwrap();
        let v = e.apply([0.6, -0.8]);
        assert!(((v[0] * v[0] + v[1] * v[1]).sqrt() - 1.0).abs() < 1e-15);
        assert!((e.op_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_dissipative_and_gapped_at_high_frequency() {
        for poisson in [true, false] {
            for k in 1..2000 {
                let r = k as f64 * 0.01;
                let ev = eigenvalues(r, poisson);
                assert!(ev.iter().all(|l| l.re < 0.0));
                if r >= 3.0 {
                    assert!(ev.iter().all(|l| l.re < -0.4));
                }
            }
        }
    }

    #[test]
    fn op_norm_of_diagonal() {
        let m = Mat2([[3.0f64, 0.0], [0.0, -0.5]]);
        assert!((m.op_norm() - 3.0).abs() < 1e-15);
        assert!((Mat2::<f64>::identity().op_norm() - 1.0).abs() < 1e-15);
    }
}
