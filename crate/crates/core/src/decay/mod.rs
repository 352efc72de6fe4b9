//! Time-weighted functionals, slope fits and rate predictions.

pub mod fit;
pub mod functionals;
pub mod params;

pub use fit::{
    fit_decay_slope, predicted_density_exponent, predicted_density_lr_exponent, predicted_velocity_exponent,
    predicted_velocity_lr_exponent, rate_report, RateReport, RateRow, SlopeFit, PREDICTED_GAP,
};
pub use functionals::{functional_d, functional_e, weighted_norm_series, DecayProbe, FunctionalHistory};
pub use params::{check_lebesgue_exponent, japanese, DecayParams};
