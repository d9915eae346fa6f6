//! Lattice-point error terms for the circle and divisor problems: exact
//! counts, sweeps with exponent fits, the smoothed two-dimensional Poisson
//! identity and the three terms bounding Δ(X).

mod counting;
mod fit;
mod mollifier;
mod smoothed;
mod sweep;

pub use counting::{
    circle_count, d_divisor, delta_circle, divisor_summatory, divisor_summatory_brute, hardy_scan, MAX_COUNT_X,
};
pub use fit::{exponent_fit, ErrorTermSeries};
pub use mollifier::Mollifier;
pub use smoothed::{bound_terms, smoothed_circle_identity, BoundTerms, SmoothedIndicator, Smoothing, PSI_TAIL_TOL};
pub use sweep::{circle_rows, circle_sweep, divisor_rows, divisor_sweep, sample_grid, ExperimentRow};
