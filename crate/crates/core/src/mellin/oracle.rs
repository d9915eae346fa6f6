//! Direct repeated-quadrature evaluation of the Voronoi transforms, used to
//! validate the Mellin–Barnes route for parameters where the defining
//! integrals converge in the stated order.
//!
//! The innermost integral ∫₀^∞ f(y) y^p e^{-2πiξy} dy converges absolutely;
//! it is computed along the ray y = r e^{-iθ}, θ = (π/4) sgn ξ, where the
//! integrand decays exponentially, and tabulated on a logarithmic grid in
//! |ξ|. The remaining real-line integrals are taken literally: a
//! logarithmic head on (0, 1] and half-period panels with Euler averaging
//! beyond.

use super::test_fn::{Family, TestFunction};
use crate::error::{Error, Result};
use crate::numeric::quad::{gl16, oscillatory_tail};
use crate::numeric::{C64, TWO_PI};
use std::f64::consts::FRAC_PI_4;

/// Arguments above this size are treated as giving a negligible inner integral.
const XI_MAX: f64 = 400.0;
const XI_MIN: f64 = 1e-10;
const GRID_STEP: f64 = 0.01;
const HEAD_PANEL: f64 = 0.25;

/// Panel counts for the oracle's oscillatory tails.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub outer_panels: usize,
    pub middle_panels: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { outer_panels: 60, middle_panels: 40 }
    }
}

/// ∫₀^∞ f(y) y^p e^{-2πiξy} dy for ExpInverse f, by the trapezoid rule in log r.
pub fn inner_integral(f: &TestFunction, p: C64, xi: f64) -> Result<C64> {
    let Family::ExpInverse { a, b } = f.family() else {
        return Err(Error::Domain("the quadrature oracle needs an ExpInverse test function".into()));
    };
    let theta = if xi == 0.0 { 0.0 } else { FRAC_PI_4 * xi.signum() };
    let rot = C64::from_polar(1.0, -theta);
    let (ct, st) = (theta.cos(), theta.sin().abs());
    let alpha = a * ct + TWO_PI * xi.abs() * st;
    let beta = b * ct;
    let rho = p.re + 1.0;
    let peak = ((rho + (rho * rho + 4.0 * alpha * beta).sqrt()) / (2.0 * alpha)).ln();
    let real = |u: f64| -alpha * u.exp() - beta * (-u).exp() + rho * u;
    let top = real(peak);
    let step = 0.1;
    let mut lo = peak;
    while real(lo) > top - 45.0 {
        lo -= step;
    }
    let mut hi = peak;
    while real(hi) > top - 45.0 {
        hi += step;
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let shift = C64::new(top, 0.0);
    let log_rot = C64::new(0.0, -theta);
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        let u = lo + step * k as f64;
        let y = rot * u.exp();
        let expo = -a * y - b / y - C64::new(0.0, TWO_PI * xi) * y + (p + 1.0) * (log_rot + u) - shift;
        acc += expo.exp();
    }
    Ok(acc * step * top.exp() * f.scale())
}

/// Tabulated inner integral as a function of ξ.
struct InnerTable {
    at_zero: C64,
    pos: Vec<C64>,
    neg: Vec<C64>,
    s0: f64,
    f: TestFunction,
    p: C64,
}

impl InnerTable {
    fn new(f: &TestFunction, p: C64) -> Result<Self> {
        let s0 = XI_MIN.ln();
        let n = ((XI_MAX.ln() - s0) / GRID_STEP).ceil() as usize + 4;
        let build = |sign: f64| -> Result<Vec<C64>> {
            (0..n).map(|k| inner_integral(f, p, sign * (s0 + GRID_STEP * (k as f64 - 1.0)).exp())).collect()
        };
        Ok(InnerTable { at_zero: inner_integral(f, p, 0.0)?, pos: build(1.0)?, neg: build(-1.0)?, s0, f: *f, p })
    }

    fn eval(&self, xi: f64) -> C64 {
        let m = xi.abs();
        if m < XI_MIN {
            return self.at_zero;
        }
        let table = if xi > 0.0 { &self.pos } else { &self.neg };
        // grid point k sits at s0 + (k - 1) step
        let x = (m.ln() - self.s0) / GRID_STEP + 1.0;
        let i = x.floor() as usize;
        if i + 2 >= table.len() {
            return inner_integral(&self.f, self.p, xi).unwrap_or_default();
        }
        let d = x - i as f64;
        // four-point Lagrange weights on nodes -1, 0, 1, 2
        let w = [
            -d * (d - 1.0) * (d - 2.0) / 6.0,
            (d + 1.0) * (d - 1.0) * (d - 2.0) / 2.0,
            -(d + 1.0) * d * (d - 2.0) / 2.0,
            (d + 1.0) * d * (d - 1.0) / 6.0,
        ];
        table[i - 1] * w[0] + table[i] * w[1] + table[i + 1] * w[2] + table[i + 2] * w[3]
    }
}

fn power(x: f64, e: C64) -> C64 {
    (e * x.ln()).exp()
}

fn sign_char(x: f64, delta: u8) -> f64 {
    if delta == 1 && x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// ∫_ℝ g(x) dx for g negligible as x → 0 below `x_min`, oscillating with
/// period 1 for large |x|.
fn line_integral(x_min: f64, panels: usize, g: impl Fn(f64) -> C64 + Sync) -> C64 {
    let both = |x: f64| g(x) + g(-x);
    let v_lo = x_min.ln().min(-HEAD_PANEL);
    let head_panels = (-v_lo / HEAD_PANEL).ceil() as usize;
    let head: C64 = gl16().integrate_panels(v_lo, 0.0, head_panels, |v: f64| {
        let x = v.exp();
        both(x) * x
    });
    let (tail, _) = oscillatory_tail(1.0, 0.5, panels, gl16(), both);
    head + tail
}

/// ∬ f(x₁x₂/t) |x₁|^ν |x₂|^{-ν} e^{-2πi(x₁+x₂)} dx₁ dx₂, integrating over
/// x₁ first. Converges for Re ν > 0.
pub fn gl2_oracle(f: &TestFunction, nu: C64, t: f64, cfg: OracleConfig) -> Result<C64> {
    if t == 0.0 {
        return Err(Error::Domain("oracle evaluated at t = 0".into()));
    }
    let inner = InnerTable::new(f, nu)?;
    let g = |x: f64| {
        let xi = t / x;
        C64::from_polar(1.0, -TWO_PI * x) * power(x.abs(), -nu) * power(xi.abs(), 1.0 + nu) * inner.eval(xi)
    };
    Ok(line_integral(t.abs() / XI_MAX, cfg.outer_panels, g))
}

/// ∭ f(x₁x₂x₃/t) ∏ e^{-2πix_j} |x_j|^{-λ_j} sgn(x_j)^{δ_j} dx, with x₃
/// innermost and x₁ outermost. Converges for Re λ₁ > Re λ₂ > Re λ₃.
pub fn gl3_oracle(f: &TestFunction, lambda: [C64; 3], delta: [u8; 3], t: f64, cfg: OracleConfig) -> Result<C64> {
    if t == 0.0 {
        return Err(Error::Domain("oracle evaluated at t = 0".into()));
    }
    let inner = InnerTable::new(f, -lambda[2])?;
    // x₃-integral as a function of u = t/(x₁x₂)
    let g3 = |u: f64| power(u.abs(), 1.0 - lambda[2]) * sign_char(u, delta[2]) * inner.eval(u);
    let middle = |x1: f64| {
        let g = |x2: f64| {
            C64::from_polar(1.0, -TWO_PI * x2) * power(x2.abs(), -lambda[1]) * sign_char(x2, delta[1]) * g3(t / (x1 * x2))
        };
        line_integral(t.abs() / (x1.abs() * XI_MAX), cfg.middle_panels, g)
    };
    let outer = |x1: f64| {
        C64::from_polar(1.0, -TWO_PI * x1) * power(x1.abs(), -lambda[0]) * sign_char(x1, delta[0]) * middle(x1)
    };
    Ok(line_integral(t.abs() * 1e-5, cfg.outer_panels, outer))
}
