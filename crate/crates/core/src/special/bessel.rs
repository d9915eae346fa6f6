//! Bessel functions J₀, J₁, Y₀ (series below a switch point, Hankel
//! expansion above it) and K₀.
//!
//! The ascending series are summed in double-double arithmetic: near the
//! switch point their terms reach ~1e10 before cancelling down to O(1),
//! which would cost six digits in plain `f64`.

use crate::error::{Error, Result};
use crate::numeric::dd::Dd;
use crate::numeric::EULER_GAMMA;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselKind {
    J0,
    J1,
    Y0,
    K0,
}

/// Argument at which J₀, J₁ and Y₀ change from the ascending series to the
/// Hankel expansion.
#[derive(Clone, Copy, Debug)]
pub struct BesselSwitch {
    pub series_max: f64,
}

impl Default for BesselSwitch {
    fn default() -> Self {
        BesselSwitch { series_max: 20.0 }
    }
}

const K0_SERIES_MAX: f64 = 2.0;

/// Checked entry point.
pub fn bessel(kind: BesselKind, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("bessel argument {x} is not finite")));
    }
    match kind {
        BesselKind::J0 => Ok(bessel_j0(x)),
        BesselKind::J1 => Ok(bessel_j1(x)),
        BesselKind::Y0 | BesselKind::K0 if x <= 0.0 => {
            Err(Error::Domain(format!("{kind:?} requires x > 0, got {x}")))
        }
        BesselKind::Y0 => Ok(bessel_y0(x)),
        BesselKind::K0 => Ok(bessel_k0(x)),
    }
}

impl BesselKind {
    /// Ascending-series branch (J₀, J₁, Y₀) or series/integral branch (K₀).
    pub fn eval_series(self, x: f64) -> f64 {
        match self {
            BesselKind::J0 => series_j0_y0(x).0,
            BesselKind::J1 => series_j1(x),
            BesselKind::Y0 => series_j0_y0(x).1,
            BesselKind::K0 => {
                if x <= K0_SERIES_MAX {
                    series_k0(x)
                } else {
                    integral_k0(x)
                }
            }
        }
    }

    /// Hankel asymptotic branch (J₀, J₁, Y₀); K₀ uses its integral form.
    pub fn eval_asymptotic(self, x: f64) -> f64 {
        match self {
            BesselKind::J0 => hankel(0.0, x).0,
            BesselKind::J1 => hankel(1.0, x).0,
            BesselKind::Y0 => hankel(0.0, x).1,
            BesselKind::K0 => integral_k0(x),
        }
    }
}

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= BesselSwitch::default().series_max {
        series_j0_y0(x).0
    } else {
        hankel(0.0, x).0
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    let (ax, sign) = if x < 0.0 { (-x, -1.0) } else { (x, 1.0) };
    let v = if ax <= BesselSwitch::default().series_max { series_j1(ax) } else { hankel(1.0, ax).0 };
    sign * v
}

/// Y₀; NaN for x ≤ 0.
pub fn bessel_y0(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NAN;
    }
    if x <= BesselSwitch::default().series_max {
        series_j0_y0(x).1
    } else {
        hankel(0.0, x).1
    }
}

/// K₀; NaN for x ≤ 0.
pub fn bessel_k0(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NAN;
    }
    if x <= K0_SERIES_MAX {
        series_k0(x)
    } else {
        integral_k0(x)
    }
}

fn series_j0_y0(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (1.0, f64::NEG_INFINITY);
    }
    let q = Dd::square_of(x).mul_f64(0.25);
    let mut term = Dd::ONE;
    let mut j0 = Dd::ONE;
    let mut harmonic = Dd::ZERO;
    let mut ysum = Dd::ZERO;
    for k in 1..400 {
        let kf = k as f64;
        term = -(term * q).div_f64(kf * kf);
        harmonic = harmonic + Dd::ONE.div_f64(kf);
        j0 = j0 + term;
        let h_term = harmonic * term;
        ysum = ysum - h_term;
        if term.abs_f64() < 1e-34 && kf > x {
            break;
        }
    }
    let j = j0.to_f64();
    let log_part = (0.5 * x).ln() + EULER_GAMMA;
    let y = (2.0 / PI) * (log_part * j + ysum.to_f64());
    (j, y)
}

fn series_j1(x: f64) -> f64 {
    let q = Dd::square_of(x).mul_f64(0.25);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 1..400 {
        let kf = k as f64;
        term = -(term * q).div_f64(kf * (kf + 1.0));
        sum = sum + term;
        if term.abs_f64() < 1e-34 && kf > x {
            break;
        }
    }
    sum.mul_f64(0.5 * x).to_f64()
}

fn series_k0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        sum += harmonic * term;
        if term < 1e-18 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + sum
}

/// K₀(x) = e^{-x} ∫₀^∞ exp(-2x sinh²(t/2)) dt by the trapezoid rule, which
/// converges geometrically for this analytic, doubly decaying integrand.
fn integral_k0(x: f64) -> f64 {
    if x > 750.0 {
        return 0.0;
    }
    let h = (0.3 / x.sqrt()).min(0.1);
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let sh = (0.5 * t).sinh();
        let v = (-2.0 * x * sh * sh).exp();
        sum += v;
        if v < 1e-18 {
            break;
        }
        k += 1;
    }
    (-x).exp() * h * sum
}

/// Hankel expansion for order ν ∈ {0, 1}; returns (J_ν, Y_ν).
fn hankel(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (8.0 * kf * x);
        let mag = a.abs();
        if mag > prev {
            break;
        }
        prev = mag;
        // k odd feeds Q with sign (-1)^{(k-1)/2}; k even feeds P with sign (-1)^{k/2}
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
        if mag < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // χ = x - (2ν+1)π/4, expanded so no rounding of the shifted argument occurs
    let (cos_chi, sin_chi) = if nu == 0.0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_relative_eq!(bessel_j0(1.0), 0.765_197_686_557_966_6, max_relative = 1e-14);
        assert_relative_eq!(bessel_j1(1.0), 0.440_050_585_744_933_5, max_relative = 1e-14);
        assert_relative_eq!(bessel_y0(1.0), 0.088_256_964_215_676_96, max_relative = 1e-13);
        assert_relative_eq!(bessel_k0(1.0), 0.421_024_438_240_708_3, max_relative = 1e-14);
        assert_relative_eq!(bessel_k0(5.0), 0.003_691_098_334_042_594, max_relative = 1e-13);
        assert_relative_eq!(bessel_j0(50.0), 0.055_812_327_669_251_86, max_relative = 1e-12);
    }

    #[test]
    fn branches_agree_in_overlap() {
        let mut x = 16.0;
        while x <= 28.0 {
            for kind in [BesselKind::J0, BesselKind::J1, BesselKind::Y0] {
                let d = (kind.eval_series(x) - kind.eval_asymptotic(x)).abs();
                assert!(d < 1e-12, "{kind:?} at {x}: {d}");
            }
            x += 0.37;
        }
    }

    #[test]
    fn k0_branches_agree() {
        for x in [0.5, 1.0, 1.5, 2.0] {
            let s = series_k0(x);
            let i = integral_k0(x);
            assert_relative_eq!(s, i, max_relative = 1e-13);
        }
    }

    #[test]
    fn wronskian_identity() {
        // J₁(x)Y₀(x) - J₀(x)Y₁(x) = 2/(πx); with Y₁ = -Y₀' use J₀Y₀' - J₀'Y₀ = 2/(πx)
        for x in [0.7f64, 3.0, 11.0, 25.0, 300.0] {
            let h = 1e-4;
            let dy0 = (bessel_y0(x + h) - bessel_y0(x - h)) / (2.0 * h);
            let w = bessel_j0(x) * dy0 + bessel_j1(x) * bessel_y0(x);
            assert_relative_eq!(w, 2.0 / (PI * x), max_relative = 1e-7);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel(BesselKind::Y0, 0.0).is_err());
        assert!(bessel(BesselKind::K0, -1.0).is_err());
        assert_eq!(bessel(BesselKind::J0, 0.0).unwrap(), 1.0);
    }
}
