use super::transform::mellin_numeric;
use crate::error::{Error, Result};
use crate::numeric::C64;
use crate::special::{bessel_k_complex_order, ln_gamma};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// x^{2m} exp(-π t x²) on ℝ.
    GaussianHermite { m: u32, t: f64 },
    /// exp(-1/(1-u²)) with u the affine image of x ∈ (a, b) onto (-1, 1).
    SmoothBump { a: f64, b: f64 },
    /// exp(-A x - B/x) for x > 0, zero for x ≤ 0.
    ExpInverse { a: f64, b: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Schwartz,
    CompactlySupported,
    /// Smooth and vanishing to infinite order at the origin.
    FlatAtOrigin,
}

/// An admissible test function: a family, its parameters and an overall
/// constant factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    family: Family,
    scale: f64,
}

impl TestFunction {
    pub fn gaussian_hermite(m: u32, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("GaussianHermite needs t > 0, got {t}")));
        }
        let f = TestFunction { family: Family::GaussianHermite { m, t }, scale: 1.0 };
        f.check_closed_form(&[0.4, 0.9, 1.5, 2.5, 3.3], &[0.0, 0.7])?;
        Ok(f)
    }

    pub fn smooth_bump(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > a && b.is_finite()) {
            return Err(Error::Domain(format!("SmoothBump needs 0 < a < b, got [{a}, {b}]")));
        }
        Ok(TestFunction { family: Family::SmoothBump { a, b }, scale: 1.0 })
    }

    /// The bump supported on (n0 - w, n0 + w).
    pub fn isolating_bump(n0: f64, half_width: f64) -> Result<Self> {
        Self::smooth_bump(n0 - half_width, n0 + half_width)
    }

    pub fn exp_inverse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("ExpInverse needs A, B > 0, got ({a}, {b})")));
        }
        let f = TestFunction { family: Family::ExpInverse { a, b }, scale: 1.0 };
        f.check_closed_form(&[-1.5, -0.3, 0.5, 1.2, 2.0], &[0.0, 2.5])?;
        Ok(f)
    }

    /// α·f.
    pub fn scaled(&self, alpha: f64) -> Self {
        TestFunction { scale: self.scale * alpha, ..*self }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn smoothness(&self) -> Smoothness {
        match self.family {
            Family::GaussianHermite { .. } => Smoothness::Schwartz,
            Family::SmoothBump { .. } => Smoothness::CompactlySupported,
            Family::ExpInverse { .. } => Smoothness::FlatAtOrigin,
        }
    }

    pub fn is_even(&self) -> bool {
        matches!(self.family, Family::GaussianHermite { .. })
    }

    /// Closed interval outside of which f vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self.family {
            Family::GaussianHermite { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Family::SmoothBump { a, b } => (a, b),
            Family::ExpInverse { .. } => (0.0, f64::INFINITY),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        self.scale
            * match self.family {
                Family::GaussianHermite { m, t } => x.powi(2 * m as i32) * (-PI * t * x * x).exp(),
                Family::SmoothBump { a, b } => {
                    if x <= a || x >= b {
                        0.0
                    } else {
                        let u = (2.0 * x - a - b) / (b - a);
                        (-1.0 / (1.0 - u * u)).exp()
                    }
                }
                Family::ExpInverse { a, b } => {
                    if x <= 0.0 {
                        0.0
                    } else {
                        (-a * x - b / x).exp()
                    }
                }
            }
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self.family, Family::SmoothBump { .. })
    }

    /// Closed-form Mellin transform ∫₀^∞ f(x) x^{s-1} dx.
    pub fn mellin_closed_form(&self, s: C64) -> Result<C64> {
        let v = match self.family {
            Family::GaussianHermite { m, t } => {
                let p = (s + 2.0 * m as f64) * 0.5;
                if crate::numeric::is_nonpositive_integer(p) {
                    return Err(Error::Pole { function: "Mellin transform", at: s.to_string() });
                }
                (ln_gamma(p) - p * (PI * t).ln()).exp() * 0.5
            }
            Family::ExpInverse { a, b } => {
                let k = bessel_k_complex_order(s, 2.0 * (a * b).sqrt())?;
                (s * 0.5 * (b / a).ln()).exp() * k * 2.0
            }
            Family::SmoothBump { .. } => {
                return Err(Error::Domain("SmoothBump has no closed-form Mellin transform".into()))
            }
        };
        Ok(v * self.scale)
    }

    fn check_closed_form(&self, res: &[f64], ims: &[f64]) -> Result<()> {
        for &re in res {
            for &im in ims {
                let s = C64::new(re, im);
                let closed = self.mellin_closed_form(s)?;
                let numeric = mellin_numeric(self, s)?;
                let err = (closed - numeric).norm() / closed.norm().max(1e-300);
                if err > 1e-9 {
                    return Err(Error::Assertion(format!(
                        "closed-form Mellin transform of {:?} disagrees with quadrature at s = {s}: {err:e}",
                        self.family
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn evaluation() {
        let g = TestFunction::gaussian_hermite(0, 1.0).unwrap();
        assert_relative_eq!(g.eval(1.0), (-PI).exp());
        let e = TestFunction::exp_inverse(1.0, 1.0).unwrap();
        assert_relative_eq!(e.eval(2.0), (-2.5f64).exp());
        assert_eq!(e.eval(0.0), 0.0);
        assert_eq!(e.eval(-1.0), 0.0);
        let b = TestFunction::smooth_bump(1.0, 3.0).unwrap();
        assert_relative_eq!(b.eval(2.0), (-1.0f64).exp());
        assert_eq!(b.eval(3.0), 0.0);
        assert_eq!(b.scaled(0.0).eval(2.0), 0.0);
        assert!(TestFunction::smooth_bump(2.0, 1.0).is_err());
        assert!(TestFunction::exp_inverse(0.0, 1.0).is_err());
    }

    #[test]
    fn exp_inverse_flat_at_origin() {
        let e = TestFunction::exp_inverse(0.5, 2.0).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let x = 0.02 / k as f64;
            let r = e.eval(x) / x.powi(20);
            assert!(r < 1e-3 && r < prev);
            prev = r;
        }
    }
}
