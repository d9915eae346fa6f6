//! Numerical verification of Poisson and Voronoi summation formulas and
//! lattice-point error-term experiments.
//!
//! * [`arith`]: divisor counts, sums of two squares, Ramanujan τ, Kloosterman
//!   sums, symmetric-square coefficients and cached coefficient tables.
//! * [`special`]: Γ, Bessel functions, ζ, ξ, L(s, χ₄), θ.
//! * [`mellin`]: test functions, Mellin transforms, Γ-ratio kernels and the
//!   GL(2)/GL(3) Voronoi transforms.
//! * [`engines`]: two-sided evaluation of each summation formula.
//! * [`lattice`]: circle and divisor error terms and the smoothed identity.

pub mod arith;
pub mod engines;
pub mod error;
pub mod lattice;
pub mod mellin;
pub mod numeric;
pub mod special;

pub use arith::{CoefficientTable, TableKind, TwistParams};
pub use engines::{FormulaId, TruncationPolicy, VerificationReport};
pub use error::{Error, Result};
pub use lattice::{ErrorTermSeries, SmoothedIndicator};
pub use mellin::{ContourSpec, SpectralParams, TestFunction};
pub use numeric::C64;
