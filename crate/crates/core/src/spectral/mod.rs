//! Periodic-grid Fourier infrastructure.

pub mod field;
pub mod grid;
pub mod norms;
pub mod ops;
pub mod random;

pub use field::{SpectralField, VectorField};
pub use grid::{Grid, GridRef};
pub use norms::{lp_norm, lp_norm_samples, lp_norm_vector};
pub use random::{random_field, scaled_to_sup, Support};
