//! Exact solution of the linearised system: per-mode 2×2 exponentials, the
//! lattice propagator, the low-frequency semigroup scan and whole-space
//! radial quadrature.

pub mod mode;
pub mod propagate;
pub mod radial;
pub mod semigroup;

pub use mode::{degenerate_radius, discriminant, eigenvalues, mode_exponential, mode_matrix, Mat2};
pub use propagate::{propagate_linear, LinearPropagator};
pub use radial::{log_times, radial_decay_quadrature, radial_integral, RadialNorm, RadialProfile};
pub use semigroup::{best_decay_rate, verify_semigroup_bound, ScanGrid, SemigroupScan};
