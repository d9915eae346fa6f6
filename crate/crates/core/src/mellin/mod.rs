//! Test functions, Mellin transforms, Γ-ratio kernels and the Voronoi
//! integral transforms.

mod kernel;
pub mod oracle;
mod test_fn;
mod transform;
mod voronoi;

pub use kernel::{
    bessel_kernel_mellin_check, bessel_kernel_mellin_pair, calibrate_parity_one_phase, cosine_transform_check,
    fourier_power_integral, gamma_ratio_kernel, KernelKind, PARITY_ONE_PHASE,
};
pub use test_fn::{Family, Smoothness, TestFunction};
pub use transform::{mellin_inverse, mellin_numeric, ContourSpec, PoleOffset};
pub use voronoi::{gl2_transform, gl3_transform, CandidatePole, SpectralParams, VoronoiTransform};
pub(crate) use voronoi::real_part_checked;
