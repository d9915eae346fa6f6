//! Quadrature rules.
//!
//! Gauss–Legendre panels carry the smooth and oscillatory work, tanh-sinh
//! handles endpoint singularities on finite intervals, and
//! [`euler_limit`] extrapolates slowly converging alternating partial sums
//! such as those produced by half-period panels of an oscillatory tail.

use super::{pairwise_sum, Scalar};
use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrates `f` over [a, b] with a single application of the rule.
    pub fn integrate<T: Scalar>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(c + r * x) * (w * r);
        }
        acc
    }

    /// Integrates over `panels` equal sub-intervals of [a, b].
    pub fn integrate_panels<T: Scalar>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        f: impl Fn(f64) -> T,
    ) -> T {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        let parts: Vec<T> = (0..panels)
            .map(|k| {
                let lo = a + width * k as f64;
                let hi = if k + 1 == panels { b } else { lo + width };
                self.integrate(lo, hi, &f)
            })
            .collect();
        pairwise_sum(&parts)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 16-point rule.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Shared 32-point rule.
pub fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

const TS_TMAX: f64 = 6.2;
const TS_MAX_LEVEL: u32 = 12;

/// Tanh-sinh quadrature on [a, b]. Integrable endpoint singularities are
/// fine; `f` is never evaluated at the endpoints themselves. Nodes close to
/// an endpoint are generated from the endpoint distance, so `a = 0` with
/// a `x^{s-1}` factor keeps full relative accuracy.
pub fn tanh_sinh<T: Scalar>(a: f64, b: f64, tol: f64, f: impl Fn(f64) -> T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let r = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    // Contribution of the node pair at abscissa t.
    let pair = |t: f64| -> T {
        let u = half_pi * t.sinh();
        let ch = u.cosh();
        let w = r * half_pi * t.cosh() / (ch * ch);
        // distance from the nearer endpoint: r (1 - tanh|u|) = 2r / (e^{2|u|} + 1)
        let d = 2.0 * r / ((2.0 * u.abs()).exp() + 1.0);
        if d <= 0.0 || w == 0.0 || !w.is_finite() {
            return T::zero();
        }
        if t == 0.0 {
            return f(a + r) * w;
        }
        // a node that rounds onto an endpoint carries negligible weight there
        let inside = |x: f64| if x > a && x < b { f(x) } else { T::zero() };
        (inside(a + d) + inside(b - d)) * w
    };
    let mut h = 1.0;
    let mut sum = pair(0.0);
    let n0 = (TS_TMAX / h) as i64;
    let mut parts: Vec<T> = (1..=n0).map(|k| pair(k as f64 * h)).collect();
    sum = sum + pairwise_sum(&parts);
    let mut estimate = sum * h;
    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let n = (TS_TMAX / h) as i64;
        parts = (1..=n).step_by(2).map(|k| pair(k as f64 * h)).collect();
        sum = sum + pairwise_sum(&parts);
        let next = sum * h;
        let diff = (next - estimate).magnitude();
        estimate = next;
        if level >= 3 && diff <= tol * estimate.magnitude().max(1e-300) {
            return Ok(estimate);
        }
        if level >= 3 && diff < 1e-300 {
            return Ok(estimate);
        }
    }
    Err(Error::Convergence(format!(
        "tanh-sinh on [{a}, {b}] did not reach relative tolerance {tol}"
    )))
}

/// Integral over [a, ∞) of a function decaying at least exponentially,
/// by the exp-sinh map x = a + exp(π/2 · sinh t).
pub fn exp_sinh<T: Scalar>(a: f64, tol: f64, f: impl Fn(f64) -> T) -> Result<T> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| -> T {
        let e = (half_pi * t.sinh()).exp();
        let w = half_pi * t.cosh() * e;
        let x = a + e;
        if !x.is_finite() || !w.is_finite() || e == 0.0 {
            return T::zero();
        }
        f(x) * w
    };
    let (tmin, tmax) = (-4.0, 4.0);
    let mut h = 0.5;
    let idx = |h: f64| ((tmin / h).ceil() as i64, (tmax / h).floor() as i64);
    let (lo, hi) = idx(h);
    let parts: Vec<T> = (lo..=hi).map(|k| node(k as f64 * h)).collect();
    let mut sum = pairwise_sum(&parts);
    let mut estimate = sum * h;
    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let (lo, hi) = idx(h);
        let parts: Vec<T> = (lo..=hi)
            .filter(|k| k.rem_euclid(2) == 1)
            .map(|k| node(k as f64 * h))
            .collect();
        sum = sum + pairwise_sum(&parts);
        let next = sum * h;
        let diff = (next - estimate).magnitude();
        estimate = next;
        if level >= 3 && (diff <= tol * estimate.magnitude() || diff < 1e-300) {
            return Ok(estimate);
        }
    }
    Err(Error::Convergence(format!(
        "exp-sinh on [{a}, inf) did not reach relative tolerance {tol}"
    )))
}

/// Trapezoid rule on the whole real line with step halving.
///
/// `g` must decay on both sides; `half_width` bounds the region outside of
/// which the integrand is negligible. Returns the converged value.
pub fn trapezoid_real_line<T: Scalar>(
    center: f64,
    half_width: f64,
    h0: f64,
    tol: f64,
    max_level: u32,
    g: impl Fn(f64) -> T,
) -> Result<T> {
    let mut h = h0;
    let n = (half_width / h).ceil() as i64;
    let parts: Vec<T> = (-n..=n).map(|k| g(center + k as f64 * h)).collect();
    let mut sum = pairwise_sum(&parts);
    let mut estimate = sum * h;
    for level in 1..=max_level {
        h *= 0.5;
        let n = (half_width / h).ceil() as i64;
        let parts: Vec<T> = (-n..=n)
            .filter(|k| k.rem_euclid(2) == 1)
            .map(|k| g(center + k as f64 * h))
            .collect();
        sum = sum + pairwise_sum(&parts);
        let next = sum * h;
        let diff = (next - estimate).magnitude();
        estimate = next;
        if level >= 2 && (diff <= tol * estimate.magnitude() || diff < 1e-300) {
            return Ok(estimate);
        }
    }
    Err(Error::Convergence(format!(
        "trapezoid rule did not reach relative tolerance {tol} after {max_level} halvings"
    )))
}

/// Limit of a sequence of partial sums whose increments alternate with a
/// slowly varying amplitude, by repeated averaging of neighbours (the
/// Euler transform applied to the tail).
pub fn euler_limit<T: Scalar>(partial_sums: &[T], depth: usize) -> T {
    assert!(!partial_sums.is_empty());
    let depth = depth.min(partial_sums.len() - 1);
    let start = partial_sums.len() - 1 - depth;
    let mut row: Vec<T> = partial_sums[start..].to_vec();
    while row.len() > 1 {
        row = row.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    row[0]
}

/// Integrates `g` over [start, ∞) where `g` oscillates with half-period
/// `half_period` (consecutive panels alternate in sign). Each panel is one
/// Gauss–Legendre application; the tail is extrapolated with
/// [`euler_limit`]. Returns the value and the number of panels used.
pub fn oscillatory_tail<T: Scalar>(
    start: f64,
    half_period: f64,
    panels: usize,
    rule: &GaussLegendre,
    g: impl Fn(f64) -> T + Sync,
) -> (T, usize) {
    let values: Vec<T> = (0..panels)
        .map(|k| {
            let lo = start + half_period * k as f64;
            rule.integrate(lo, lo + half_period, &g)
        })
        .collect();
    let mut partial = Vec::with_capacity(values.len());
    let mut acc = T::zero();
    for v in values {
        acc = acc + v;
        partial.push(acc);
    }
    (euler_limit(&partial, panels / 2), panels)
}

/// As [`oscillatory_tail`] but with caller-supplied panel boundaries
/// (for kernels whose zeros are not equally spaced).
pub fn oscillatory_tail_with_edges<T: Scalar>(
    edges: &[f64],
    rule: &GaussLegendre,
    g: impl Fn(f64) -> T,
) -> T {
    let mut partial = Vec::with_capacity(edges.len());
    let mut acc = T::zero();
    for w in edges.windows(2) {
        acc = acc + rule.integrate(w[0], w[1], &g);
        partial.push(acc);
    }
    euler_limit(&partial, partial.len() / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C64;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(8);
        let v: f64 = rule.integrate(-1.0, 2.0, |x| x.powi(15));
        assert_relative_eq!(v, (2f64.powi(16) - 1.0) / 16.0, max_relative = 1e-13);
        let w: f64 = rule.weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        let v = tanh_sinh(0.0, 1.0, 1e-13, |x: f64| x.powf(-0.75)).unwrap();
        assert_relative_eq!(v, 4.0, max_relative = 1e-11);
        let w = tanh_sinh(0.0, 1.0, 1e-13, |x: f64| x.ln()).unwrap();
        assert_relative_eq!(w, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn exp_sinh_matches_gamma() {
        let v = exp_sinh(0.0, 1e-13, |x: f64| x.powi(3) * (-x).exp()).unwrap();
        assert_relative_eq!(v, 6.0, max_relative = 1e-11);
    }

    #[test]
    fn euler_limit_sums_leibniz_series() {
        let mut partial = Vec::new();
        let mut acc = 0.0;
        for k in 0..40 {
            acc += if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64;
            partial.push(acc);
        }
        assert_relative_eq!(euler_limit(&partial, 20), std::f64::consts::FRAC_PI_4, max_relative = 1e-12);
    }

    #[test]
    fn oscillatory_tail_dirichlet_integral() {
        // ∫_0^∞ sin(x)/x dx = π/2, panels between zeros of sin
        let head = gl16().integrate_panels(0.0, std::f64::consts::PI, 4, |x: f64| {
            if x == 0.0 { 1.0 } else { x.sin() / x }
        });
        let (tail, _) = oscillatory_tail(std::f64::consts::PI, std::f64::consts::PI, 40, gl16(), |x: f64| x.sin() / x);
        assert_relative_eq!(head + tail, std::f64::consts::FRAC_PI_2, max_relative = 1e-12);
    }

    #[test]
    fn complex_trapezoid_gaussian_fourier() {
        let xi: f64 = 0.7;
        let v = trapezoid_real_line(0.0, 8.0, 0.25, 1e-14, 8, |x: f64| {
            C64::from_polar((-std::f64::consts::PI * x * x).exp(), -2.0 * std::f64::consts::PI * x * xi)
        })
        .unwrap();
        assert_relative_eq!(v.re, (-std::f64::consts::PI * xi * xi).exp(), max_relative = 1e-13);
        assert!(v.im.abs() < 1e-15);
    }
}
