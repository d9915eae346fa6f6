//! Two-sided evaluation of the summation formulas. Each engine computes
//! both sides independently and returns a [`VerificationReport`].

mod classical;
mod gl2;
mod gl3;
mod mellin_id;
mod poisson;
mod report;

pub use classical::{verify_voronoi_circle, verify_voronoi_divisor};
pub use gl2::verify_gl2_voronoi;
pub use gl3::{fit_gl3_scalar, resolve_gl3_normalization, verify_gl3_voronoi, Gl3Options, Gl3Outcome, Gl3Resolution};
pub use mellin_id::verify_mellin_identities;
pub use poisson::{verify_poisson, verify_poisson_via_zeta, verify_theta, ZetaRouteOutcome};
pub use report::{FormulaId, Truncation, TruncationPolicy, TruncationStrategy, VerificationReport};
