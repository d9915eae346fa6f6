use super::test_fn::TestFunction;
use crate::error::{Error, Result};
use crate::numeric::quad::{gl16, gl32, oscillatory_tail, tanh_sinh};
use crate::numeric::{is_nonpositive_integer, C64};
use crate::special::{bessel_j0, bessel_k0, bessel_y0, ln_gamma};
use std::f64::consts::PI;

/// Constant factor of the odd kernel, fixed by [`calibrate_parity_one_phase`].
pub const PARITY_ONE_PHASE: C64 = C64 { re: 0.0, im: -1.0 };

/// Continuation of ∫_ℝ e^{-2πix} sgn(x)^parity |x|^{s-1} dx.
///
/// Parity 0 is π^{1/2-s} Γ(s/2)/Γ((1-s)/2); parity 1 is the phase constant
/// times π^{1/2-s} Γ((s+1)/2)/Γ((2-s)/2).
pub fn gamma_ratio_kernel(s: C64, parity: u8) -> Result<C64> {
    let (num, _) = kernel_arguments(s, parity)?;
    if is_nonpositive_integer(num) {
        return Err(Error::Pole { function: "gamma_ratio_kernel", at: s.to_string() });
    }
    Ok(gamma_ratio_kernel_unchecked(s, parity))
}

fn kernel_arguments(s: C64, parity: u8) -> Result<(C64, C64)> {
    match parity {
        0 => Ok((s * 0.5, (1.0 - s) * 0.5)),
        1 => Ok(((s + 1.0) * 0.5, (2.0 - s) * 0.5)),
        p => Err(Error::Domain(format!("parity must be 0 or 1, got {p}"))),
    }
}

/// As [`gamma_ratio_kernel`] for callers that already keep `s` away from
/// the poles and pass a valid parity.
pub(crate) fn gamma_ratio_kernel_unchecked(s: C64, parity: u8) -> C64 {
    let (num, den) = if parity == 0 { (s * 0.5, (1.0 - s) * 0.5) } else { ((s + 1.0) * 0.5, (2.0 - s) * 0.5) };
    if is_nonpositive_integer(den) {
        return C64::new(0.0, 0.0);
    }
    let v = (ln_gamma(num) - ln_gamma(den) + (0.5 - s) * PI.ln()).exp();
    if parity == 0 {
        v
    } else {
        v * PARITY_ONE_PHASE
    }
}

/// Direct quadrature of ∫_ℝ e^{-2πix} sgn(x)^parity |x|^{s-1} dx for
/// 0 < Re s < 1: a tanh-sinh head up to the first zero of the cosine (or
/// sine) and half-period panels with Euler averaging after it.
pub fn fourier_power_integral(s: C64, parity: u8) -> Result<C64> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(Error::Domain(format!("fourier_power_integral needs 0 < Re s < 1, got {s}")));
    }
    let power = move |x: f64| ((s - 1.0) * x.ln()).exp();
    let (head_end, trig): (f64, fn(f64) -> f64) = match parity {
        0 => (0.25, f64::cos),
        1 => (0.5, f64::sin),
        p => return Err(Error::Domain(format!("parity must be 0 or 1, got {p}"))),
    };
    let g = move |x: f64| power(x) * trig(2.0 * PI * x);
    let head = tanh_sinh(0.0, head_end, 1e-13, g)?;
    let (tail, _) = oscillatory_tail(head_end, 0.5, 400, gl32(), g);
    let half = head + tail;
    Ok(if parity == 0 { half * 2.0 } else { half * C64::new(0.0, -2.0) })
}

/// Ratio of the quadrature value of the odd integral to the bare Γ-ratio
/// (without phase), averaged over a few points of the strip.
pub fn calibrate_parity_one_phase() -> Result<C64> {
    let points = [C64::new(0.5, 0.0), C64::new(0.3, 0.0), C64::new(0.7, 0.4)];
    let mut acc = C64::new(0.0, 0.0);
    for &s in &points {
        let bare = gamma_ratio_kernel(s, 1)? / PARITY_ONE_PHASE;
        acc += fourier_power_integral(s, 1)? / bare;
    }
    Ok(acc / points.len() as f64)
}

/// |MF(s) - ratio(s) Mf(1-s)| with F(y) = ∫_ℝ f(x) cos(2πxy) dx and both
/// Mellin transforms computed by quadrature.
pub fn cosine_transform_check(f: &TestFunction, s: C64) -> Result<f64> {
    let t = match f.family() {
        super::Family::GaussianHermite { t, .. } => t,
        _ => return Err(Error::Domain("cosine_transform_check needs an even GaussianHermite function".into())),
    };
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(Error::Domain(format!("cosine_transform_check needs 0 < Re s < 1, got {s}")));
    }
    let x_max = (60.0 / (PI * t)).sqrt() + 2.0;
    let y_max = (60.0 * t / PI).sqrt() + 2.0;
    let transform = |y: f64| -> f64 {
        let panels = 8 + (4.0 * x_max * y).ceil() as usize;
        2.0 * gl16().integrate_panels(0.0, x_max, panels, |x| f.eval(x) * (2.0 * PI * x * y).cos())
    };
    let integrand = |y: f64| ((s - 1.0) * y.ln()).exp() * transform(y);
    let head = tanh_sinh(0.0, 1.0, 1e-12, integrand)?;
    let body: C64 = gl16().integrate_panels(1.0, y_max, (4.0 * y_max).ceil() as usize, integrand);
    let lhs = head + body;
    let rhs = gamma_ratio_kernel(s, 0)? * super::mellin_numeric(f, 1.0 - s)?;
    Ok((lhs - rhs).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    /// 4K₀(√x) − 2πY₀(√x).
    DivisorKernel,
    /// J₀(√x).
    CircleKernel,
}

impl KernelKind {
    fn eval(self, y: f64) -> f64 {
        match self {
            KernelKind::DivisorKernel => 4.0 * bessel_k0(y) - 2.0 * PI * bessel_y0(y),
            KernelKind::CircleKernel => bessel_j0(y),
        }
    }

    /// Closed-form Mellin transform of the kernel in the variable x.
    pub fn mellin_closed_form(self, s: C64) -> C64 {
        match self {
            KernelKind::DivisorKernel => {
                let r = gamma_ratio_kernel_unchecked(s, 0);
                (s * (4.0 * 2f64.ln() + 2.0 * PI.ln())).exp() * r * r
            }
            KernelKind::CircleKernel => {
                (s * 4f64.ln() + ln_gamma(s) - ln_gamma(1.0 - s)).exp()
            }
        }
    }
}

/// |∫₀^∞ K(√x) x^{s-1} dx − closed form| for 0 < Re s < 3/4.
///
/// With x = y² the integral is 2∫₀^∞ K(y) y^{2s-1} dy; the oscillating tail
/// is summed over half-periods of length π with Euler averaging.
pub fn bessel_kernel_mellin_check(s: C64, kind: KernelKind) -> Result<f64> {
    let (numeric, closed) = bessel_kernel_mellin_pair(s, kind)?;
    Ok((numeric - closed).norm())
}

/// The quadrature value and the closed form compared by
/// [`bessel_kernel_mellin_check`].
pub fn bessel_kernel_mellin_pair(s: C64, kind: KernelKind) -> Result<(C64, C64)> {
    if !(s.re > 0.0 && s.re < 0.75) {
        return Err(Error::Domain(format!("Bessel-kernel Mellin identity needs 0 < Re s < 3/4, got {s}")));
    }
    let g = move |y: f64| ((2.0 * s - 1.0) * y.ln()).exp() * kind.eval(y);
    // Asymptotic zeros: J₀ near (k - 1/4)π, Y₀ near (k - 3/4)π.
    let start = match kind {
        KernelKind::CircleKernel => 6.75 * PI,
        KernelKind::DivisorKernel => 6.25 * PI,
    };
    let head = tanh_sinh(0.0, 1.0, 1e-13, g)?;
    let body: C64 = gl32().integrate_panels(1.0, start, 24, g);
    let (tail, _) = oscillatory_tail(start, PI, 80, gl32(), g);
    let numeric = (head + body + tail) * 2.0;
    Ok((numeric, kind.mellin_closed_form(s)))
}
