use super::test_fn::{Family, TestFunction};
use crate::error::{Error, Result};
use crate::numeric::quad::{exp_sinh, gl16, tanh_sinh, trapezoid_real_line};
use crate::numeric::{pairwise_sum, C64, TWO_PI};
use rayon::prelude::*;
use std::f64::consts::PI;

/// A pole that was moved across the contour and compensated by a residue:
/// candidate family `family` (index of the spectral parameter) at shift
/// `shift` (s = 1 - λ_family + shift).
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct PoleOffset {
    pub family: usize,
    pub shift: u32,
}

/// Vertical line Re s = σ, truncated to |Im s| ≤ T and sampled at
/// `node_count` equally spaced points.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ContourSpec {
    pub sigma: f64,
    pub height_cutoff: f64,
    pub node_count: usize,
    /// Largest acceptable contribution of the outer tenth of the line.
    pub tail_tol: f64,
    pub pole_separation_offsets: Vec<PoleOffset>,
}

impl ContourSpec {
    pub fn new(sigma: f64, height_cutoff: f64, node_count: usize) -> Result<Self> {
        if !(height_cutoff > 0.0) || node_count < 3 || !sigma.is_finite() {
            return Err(Error::Domain("contour needs T > 0, at least 3 nodes and finite sigma".into()));
        }
        Ok(ContourSpec { sigma, height_cutoff, node_count, tail_tol: 1e-10, pole_separation_offsets: Vec::new() })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.height_cutoff / (self.node_count - 1) as f64
    }

    pub fn node(&self, k: usize) -> C64 {
        C64::new(self.sigma, -self.height_cutoff + self.step() * k as f64)
    }
}

/// Numerical Mellin transform ∫₀^∞ f(x) x^{s-1} dx.
///
/// For GaussianHermite with p = s + 2m and -2 < Re p < 1/2 the head is
/// ∫₀¹ x^{p-1} (e^{-πtx²} - 1) dx + 1/p, which also continues the transform
/// to the left of its pole.
/// ExpInverse is integrated on the logarithmic scale, where the integrand
/// decays doubly exponentially; the oscillation e^{i Im(s) log x} limits
/// relative accuracy once |Im s| exceeds about 10.
pub fn mellin_numeric(f: &TestFunction, s: C64) -> Result<C64> {
    let scale = f.scale();
    if scale == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let power = |x: f64, p: C64| -> C64 { ((p - 1.0) * x.ln()).exp() };
    let v = match f.family() {
        Family::GaussianHermite { m, t } => {
            let p = s + 2.0 * m as f64;
            let gauss = move |x: f64| (-PI * t * x * x).exp();
            let tail = exp_sinh(1.0, 1e-13, |x: f64| power(x, p) * gauss(x))?;
            if p.re >= 0.5 {
                tanh_sinh(0.0, 1.0, 1e-13, |x: f64| power(x, p) * gauss(x))? + tail
            } else if p.re > -2.0 {
                // ∫₀¹ x^{p-1} (e^{-πtx²} - 1) dx + 1/p continues past the pole at p = 0
                if p.norm() == 0.0 {
                    return Err(Error::Pole { function: "Mellin transform", at: s.to_string() });
                }
                // x^{p-1}(e^{-q} - 1) = -πt x^{p+1} (1 - e^{-q})/q with q = πtx², written
                // so that nothing overflows near x = 0
                let head = tanh_sinh(0.0, 1.0, 1e-13, |x: f64| {
                    let q = PI * t * x * x;
                    let phi = if q < 1e-8 { 1.0 - 0.5 * q } else { -(-q).exp_m1() / q };
                    power(x, p + 2.0) * (-PI * t * phi)
                })?;
                head + p.inv() + tail
            } else {
                return Err(Error::Domain(format!(
                    "s = {s} is outside the continuation strip Re s > -2 - 2m of GaussianHermite"
                )));
            }
        }
        Family::SmoothBump { a, b } => {
            let (la, lb) = (a.ln(), b.ln());
            let g = |u: f64| {
                let x = u.exp();
                (s * u).exp() * (f.eval(x) / scale)
            };
            let mut panels = 64 + (2.0 * s.im.abs() * (lb - la) / PI).ceil() as usize;
            let mut prev: C64 = gl16().integrate_panels(la, lb, panels, g);
            let mut out = None;
            for _ in 0..4 {
                panels *= 2;
                let next: C64 = gl16().integrate_panels(la, lb, panels, g);
                if (next - prev).norm() <= 1e-12 * next.norm().max(1e-300) {
                    out = Some(next);
                    break;
                }
                prev = next;
            }
            out.ok_or_else(|| Error::Convergence(format!("bump Mellin transform at s = {s}")))?
        }
        Family::ExpInverse { a, b } => {
            let re = |u: f64| -a * u.exp() - b * (-u).exp() + s.re * u;
            let center = 0.5 * (b / a).ln();
            // locate the peak of the real exponent
            let mut peak = center;
            for _ in 0..60 {
                let d = -a * peak.exp() + b * (-peak).exp() + s.re;
                let dd = -a * peak.exp() - b * (-peak).exp();
                peak -= d / dd;
            }
            let top = re(peak);
            let mut w = 0.5;
            while re(peak - w) > top - 50.0 || re(peak + w) > top - 50.0 {
                w += 0.5;
            }
            let h0 = 0.25 / (1.0 + s.im.abs() / 8.0);
            let shifted = C64::new(top, 0.0);
            let val = trapezoid_real_line(peak, w, h0, 1e-14, 12, |u: f64| {
                (C64::new(-a * u.exp() - b * (-u).exp(), 0.0) + s * u - shifted).exp()
            })?;
            val * top.exp()
        }
    };
    Ok(v * scale)
}

/// (1/2πi) ∫_{Re s = σ} Mf(s) x^{-s} ds for x > 0 by the trapezoid rule.
pub fn mellin_inverse(
    mf: &(dyn Fn(C64) -> Result<C64> + Sync),
    x: f64,
    contour: &ContourSpec,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("Mellin inversion needs x > 0, got {x}")));
    }
    let lx = x.ln();
    let values: Vec<C64> = (0..contour.node_count)
        .into_par_iter()
        .map(|k| {
            let s = contour.node(k);
            let w = if k == 0 || k + 1 == contour.node_count { 0.5 } else { 1.0 };
            Ok(mf(s)? * (-s * lx).exp() * w)
        })
        .collect::<Result<_>>()?;
    let h = contour.step();
    let total = pairwise_sum(&values) * (h / TWO_PI);
    let edge = 0.9 * contour.height_cutoff;
    let tail: f64 = values
        .iter()
        .enumerate()
        .filter(|(k, _)| contour.node(*k).im.abs() >= edge)
        .map(|(_, v)| v.norm())
        .sum::<f64>()
        * h
        / TWO_PI;
    if tail > contour.tail_tol {
        return Err(Error::Truncation(format!(
            "contour tail estimate {tail:e} exceeds {:e}; raise the height cutoff",
            contour.tail_tol
        )));
    }
    Ok(total.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn numeric_examples() {
        let g = TestFunction::gaussian_hermite(0, 1.0).unwrap();
        assert_relative_eq!(mellin_numeric(&g, C64::new(1.0, 0.0)).unwrap().re, 0.5, max_relative = 1e-12);
        // s Mf(s) → f(0) = 1 near s = 0
        let s = C64::new(1e-3, 0.0);
        let v = mellin_numeric(&g, s).unwrap() * s;
        assert!((v.re - 1.0).abs() < 2e-3);
        let e = TestFunction::exp_inverse(1.0, 1.0).unwrap();
        let s = C64::new(0.5, 3.0);
        let a = mellin_numeric(&e, s).unwrap();
        let b = crate::special::bessel_k_complex_order(s, 2.0).unwrap() * 2.0;
        assert!((a - b).norm() < 1e-10 * b.norm());
        assert!(mellin_numeric(&g, C64::new(-2.5, 0.0)).is_err());
    }

    #[test]
    fn continuation_strip_matches_closed_form() {
        let g = TestFunction::gaussian_hermite(0, 2.0).unwrap();
        let s = C64::new(-0.7, 1.3);
        let a = mellin_numeric(&g, s).unwrap();
        let b = g.mellin_closed_form(s).unwrap();
        assert!((a - b).norm() < 1e-10 * b.norm());
    }

    #[test]
    fn inversion_examples() {
        let g = TestFunction::gaussian_hermite(0, 1.0).unwrap();
        let mf = |s: C64| g.mellin_closed_form(s);
        let c = ContourSpec::new(1.0, 60.0, 2401).unwrap();
        assert_relative_eq!(mellin_inverse(&mf, 1.0, &c).unwrap(), (-PI).exp(), max_relative = 1e-9);
        let c2 = ContourSpec::new(2.0, 60.0, 2401).unwrap();
        let d = mellin_inverse(&mf, 0.8, &c).unwrap() - mellin_inverse(&mf, 0.8, &c2).unwrap();
        assert!(d.abs() < 1e-9);
        let e = TestFunction::exp_inverse(1.0, 1.0).unwrap();
        let mf = |s: C64| e.mellin_closed_form(s);
        let c = ContourSpec::new(0.5, 40.0, 1601).unwrap();
        assert_relative_eq!(mellin_inverse(&mf, 2.0, &c).unwrap(), (-2.5f64).exp(), max_relative = 1e-9);
        let short = ContourSpec::new(0.5, 3.0, 101).unwrap();
        assert!(matches!(mellin_inverse(&mf, 2.0, &short), Err(Error::Truncation(_))));
    }
}
