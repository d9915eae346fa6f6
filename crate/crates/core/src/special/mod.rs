//! Special functions: complex log-gamma, Bessel functions, the Riemann zeta
//! function and ξ, L(s, χ₄), and the Jacobi theta function.

mod bessel;
mod bessel_k;
mod gamma;
mod theta;
mod zeta;

pub use bessel::{bessel, bessel_j0, bessel_j1, bessel_k0, bessel_y0, BesselKind, BesselSwitch};
pub use bessel_k::bessel_k_complex_order;
pub use gamma::{gamma_archimedean, ln_gamma, ln_sin_pi, log_gamma, ArchimedeanKind};
pub use theta::theta;
pub use zeta::{dirichlet_l_chi4, hurwitz_zeta, l_chi4_alternating, xi, zeta};

/// Points of the complex plane, as used for Mellin and spectral variables.
pub type ComplexPoint = num_complex::Complex64;

/// Tolerance and branch-switch knobs for the special functions.
#[derive(Clone, Debug)]
pub struct SpecialFnConfig {
    pub target_abs_tol: f64,
    pub bessel: BesselSwitch,
}

impl Default for SpecialFnConfig {
    fn default() -> Self {
        SpecialFnConfig { target_abs_tol: 1e-13, bessel: BesselSwitch::default() }
    }
}
