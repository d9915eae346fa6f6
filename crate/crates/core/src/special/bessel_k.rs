use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, C64};
use std::f64::consts::FRAC_PI_2;

/// K_s(x) for complex order s and x > 0.
///
/// Uses K_s(x) = ½ ∫_ℝ exp(-x cosh t + s t) dt on the shifted line
/// t ↦ t + iα with α = sign(Im s)·max(0, π/2 - 7/|Im s|). The shift removes
/// most of the oscillation of e^{i Im(s) t}, leaving a cancellation of at
/// most e⁷ relative to the result. The line integral is evaluated by the
/// trapezoid rule with step halving.
pub fn bessel_k_complex_order(s: C64, x: f64) -> Result<C64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K_s(x) requires x > 0, got {x}")));
    }
    if s.im.abs() > 200.0 {
        return Err(Error::Domain(format!("K_s(x) supports |Im s| <= 200, got {}", s.im)));
    }
    let tau = s.im;
    let alpha = if tau.abs() > 7.0 / FRAC_PI_2 { tau.signum() * (FRAC_PI_2 - 7.0 / tau.abs()) } else { 0.0 };
    let (sa, ca) = alpha.sin_cos();
    let i_alpha = C64::new(0.0, alpha);
    // exponent along the shifted line
    let phase = |t: f64| -> C64 {
        let ch = C64::new(t.cosh() * ca, t.sinh() * sa);
        -ch * x + s * (C64::new(t, 0.0) + i_alpha)
    };
    // real part of the exponent; its maximum locates the bulk of the integrand
    let re_phase = |t: f64| -x * t.cosh() * ca + s.re * t - tau * alpha;
    let peak_t = (s.re / (x * ca)).asinh();
    let peak = re_phase(peak_t);
    let cutoff = peak - 46.0;
    let mut lo = peak_t;
    while re_phase(lo) > cutoff {
        lo -= 0.25;
    }
    let mut hi = peak_t;
    while re_phase(hi) > cutoff {
        hi += 0.25;
    }
    let shift = C64::new(peak, 0.0);
    let g = |t: f64| (phase(t) - shift).exp();
    let mut h = 0.25;
    let nodes = |h: f64, stride: i64, offset: i64| -> (C64, f64) {
        let n = ((hi - lo) / h).ceil() as i64;
        let vals: Vec<C64> =
            (offset..=n).step_by(stride as usize).map(|k| g(lo + k as f64 * h)).collect();
        (pairwise_sum(&vals), vals.iter().map(|v| v.norm()).sum())
    };
    let (mut sum, mut mag) = nodes(h, 1, 0);
    let mut est = sum * h;
    for level in 1..=14 {
        h *= 0.5;
        let (s_new, m_new) = nodes(h, 2, 1);
        sum += s_new;
        mag += m_new;
        let next = sum * h;
        let diff = (next - est).norm();
        est = next;
        // rounding floor set by the cancellation in the oscillating sum
        let floor = 32.0 * f64::EPSILON * mag * h;
        if level >= 2 && diff <= (1e-14 * est.norm()).max(floor) {
            return Ok(est * 0.5 * peak.exp());
        }
    }
    Err(Error::Convergence(format!("K_s(x) quadrature diverged at s = {s}, x = {x}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bessel_k0;
    use approx::assert_relative_eq;

    #[test]
    fn real_order_zero_matches_k0() {
        let v = bessel_k_complex_order(C64::new(0.0, 0.0), 2.0).unwrap();
        assert_relative_eq!(v.re, bessel_k0(2.0), max_relative = 1e-13);
    }

    #[test]
    fn half_order_closed_form() {
        let v = bessel_k_complex_order(C64::new(0.5, 0.0), 2.0).unwrap();
        let exact = (std::f64::consts::PI / 4.0).sqrt() * (-2.0f64).exp();
        assert_relative_eq!(v.re, exact, max_relative = 1e-13);
        // K_{1/2 + iτ} has no closed form, but K_{s} = K_{-s}
        let s = C64::new(0.5, 37.0);
        let a = bessel_k_complex_order(s, 1.3).unwrap();
        let b = bessel_k_complex_order(-s, 1.3).unwrap();
        assert!((a - b).norm() <= 1e-11 * a.norm());
    }

    #[test]
    fn recurrence_in_order() {
        // K_{s+1}(x) - K_{s-1}(x) = (2s/x) K_s(x)
        for s in [C64::new(0.3, 4.0), C64::new(-1.2, 25.0), C64::new(2.0, 80.0)] {
            let x = 2.0;
            let lhs = bessel_k_complex_order(s + 1.0, x).unwrap() - bessel_k_complex_order(s - 1.0, x).unwrap();
            let rhs = bessel_k_complex_order(s, x).unwrap() * (s * 2.0 / x);
            assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm(), "s = {s}");
        }
    }
}
