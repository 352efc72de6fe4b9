//! Numerical laboratory for the compressible Navier–Stokes–Poisson
//! perturbation system on periodic grids and over continuous radial
//! frequencies.
//!
//! The spectral kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the double-precision instantiation used by the
//! analysis layers and the command-line harness.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
pub mod error;
pub mod ineq;
pub mod init;
pub mod linear;
pub mod lp;
pub mod physics;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod solver;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Grid64 = spectral::Grid<f64>;
pub type Field64 = spectral::SpectralField<f64>;
pub type VectorField64 = spectral::VectorField<f64>;
