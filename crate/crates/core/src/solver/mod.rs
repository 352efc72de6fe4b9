//! Time integration of the full perturbation system on the torus.

pub mod checkpoint;
pub mod nonlinear;
pub mod simulate;
pub mod stepper;

pub use checkpoint::{decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint};
pub use nonlinear::{compute_nonlinearities, min_density};
pub use simulate::{simulate, SimulationConfig, SimulationSummary, GUARD_NORMS};
pub use stepper::{cfl_limit, step, Dynamics, Stepper};
