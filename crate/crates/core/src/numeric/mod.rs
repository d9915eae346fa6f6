//! Numerical building blocks: deterministic summation, double-double
//! arithmetic and quadrature rules.

pub mod dd;
pub mod quad;
pub mod sum;

pub use num_complex::Complex64 as C64;
pub use sum::{pairwise_sum, par_collect_sum, Neumaier};

/// A value that can be accumulated by the quadrature routines.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + num_traits::Zero
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for C64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// True when `z` is exactly a nonpositive integer.
pub(crate) fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}
