use super::report::{FormulaId, Truncation, TruncationPolicy, VerificationReport};
use crate::error::{Error, Result};
use crate::mellin::{mellin_inverse, ContourSpec, Family, TestFunction};
use crate::numeric::quad::gl16;
use crate::numeric::{pairwise_sum, C64};
use crate::special::{theta, zeta};
use std::f64::consts::PI;
use std::time::Instant;

/// Worst violation of √t θ(t) = θ(1/t) over the given points.
pub fn verify_theta(ts: &[f64]) -> Result<VerificationReport> {
    let start = Instant::now();
    if ts.is_empty() {
        return Err(Error::Domain("theta sweep needs at least one point".into()));
    }
    let mut worst = (0.0, 0.0, 0.0, ts[0]);
    for &t in ts {
        let lhs = t.sqrt() * theta(t)?;
        let rhs = theta(1.0 / t)?;
        let d = (lhs - rhs).abs();
        if d > worst.0 || t == ts[0] {
            worst = (d, lhs, rhs, t);
        }
    }
    let (d, lhs, rhs, t) = worst;
    Ok(VerificationReport::with_residual(FormulaId::Theta, lhs, rhs, d, Truncation::new(ts.len(), ts.len()))
        .note(format!("{} points; worst at t = {t}", ts.len()))
        .timed(start))
}

fn gaussian_params(f: &TestFunction) -> Result<(u32, f64)> {
    match f.family() {
        Family::GaussianHermite { m, t } => Ok((m, t)),
        _ => Err(Error::Domain("Poisson engines need an even GaussianHermite test function".into())),
    }
}

/// F(y) = ∫_ℝ f(x) cos(2πxy) dx by Gauss–Legendre panels.
fn cosine_transform(f: &TestFunction, m: u32, t: f64, y: f64) -> f64 {
    let x_max = ((50.0 + 2.0 * m as f64 * 10f64.ln()) / (PI * t)).sqrt() + 1.0;
    let panels = 16 + (4.0 * x_max * y).ceil() as usize;
    2.0 * gl16().integrate_panels(0.0, x_max, panels, |x| f.eval(x) * (2.0 * PI * x * y).cos())
}

/// Sums `term(1), term(2), …` until the policy says stop or three terms in
/// a row fall below `floor`; the terms must be eventually decreasing past
/// `settle`.
fn sum_until(
    policy: &TruncationPolicy,
    settle: usize,
    floor: f64,
    term: impl Fn(usize) -> f64,
) -> Result<(f64, usize, f64)> {
    let mut terms = Vec::new();
    let mut quiet = 0;
    loop {
        let n = terms.len() + 1;
        let v = term(n);
        terms.push(v);
        let total = pairwise_sum(&terms);
        if n >= settle && (policy.done(n, v.abs(), total) || v.abs() <= floor) {
            quiet += 1;
            if quiet == 3 || policy.strategy == super::report::TruncationStrategy::FixedCount {
                return Ok((total, n, v.abs()));
            }
        } else {
            quiet = 0;
        }
        if policy.exhausted(n) && policy.strategy == super::report::TruncationStrategy::TailBound {
            return Err(Error::Truncation(format!("sum not converged after {n} terms")));
        }
    }
}

/// Σ_{n≥1} f(n) = ∫₀^∞ f - f(0)/2 + Σ_{n≥1} F(n) for even f, with F the
/// cosine transform computed by quadrature.
pub fn verify_poisson(f: &TestFunction, trunc: &TruncationPolicy) -> Result<VerificationReport> {
    let start = Instant::now();
    let (m, t) = gaussian_params(f)?;
    let settle = 2 + (2.0 * ((m as f64 + 1.0) * t.max(1.0 / t)).sqrt()).ceil() as usize;
    let (lhs, lhs_terms, lhs_tail) = sum_until(trunc, settle, 0.0, |n| f.eval(n as f64))?;
    let half_integral = 0.5 * cosine_transform(f, m, t, 0.0);
    // Quadrature cannot resolve F(n) below a few ulps of ∫|f|.
    let floor = 64.0 * f64::EPSILON * half_integral.abs();
    let (series, rhs_terms, rhs_tail) = sum_until(trunc, settle, floor, |n| cosine_transform(f, m, t, n as f64))?;
    let rhs = half_integral - 0.5 * f.eval(0.0) + series;
    Ok(VerificationReport::new(
        FormulaId::Poisson,
        lhs,
        rhs,
        Truncation::new(lhs_terms, rhs_terms).with("lhs_last_term", lhs_tail).with("rhs_last_term", rhs_tail),
    )
    .timed(start))
}

/// Result of the contour route, with the second contour used to check the
/// residues at s = 1 and s = 0.
#[derive(Clone, Debug)]
pub struct ZetaRouteOutcome {
    pub report: VerificationReport,
    pub contour_reflected: f64,
    pub residue_sum: f64,
    /// |contour(σ) - contour(-1) - (Mf(1) - f(0)/2)|.
    pub reconciliation: f64,
}

/// Σ_{n≥1} f(n) against (1/2πi)∫_{(σ)} ζ(s) Mf(s) ds, plus the same
/// integral on Re s = -1 corrected by the residues Mf(1) and ζ(0) f(0).
pub fn verify_poisson_via_zeta(f: &TestFunction, sigma: f64, trunc: &TruncationPolicy) -> Result<ZetaRouteOutcome> {
    let start = Instant::now();
    let (m, t) = gaussian_params(f)?;
    if !(sigma > 1.0) {
        return Err(Error::Domain(format!("the Dirichlet series route needs σ > 1, got {sigma}")));
    }
    let settle = 2 + (2.0 * ((m as f64 + 1.0) * t.max(1.0 / t)).sqrt()).ceil() as usize;
    let (lhs, lhs_terms, lhs_tail) = sum_until(trunc, settle, 0.0, |n| f.eval(n as f64))?;
    let integrand = |s: C64| Ok(zeta(s)? * f.mellin_closed_form(s)?);
    let mut line = ContourSpec::new(sigma, 60.0, 1201)?;
    line.tail_tol = 1e-12;
    let rhs = mellin_inverse(&integrand, 1.0, &line)?;
    let mut reflected_line = ContourSpec::new(-1.0, 60.0, 1201)?;
    reflected_line.tail_tol = 1e-12;
    let reflected = mellin_inverse(&integrand, 1.0, &reflected_line)?;
    let residue_sum = f.mellin_closed_form(C64::new(1.0, 0.0))?.re - 0.5 * f.eval(0.0);
    let reconciliation = (rhs - reflected - residue_sum).abs();
    let report = VerificationReport::new(
        FormulaId::PoissonZeta,
        lhs,
        rhs,
        Truncation::new(lhs_terms, line.node_count).with("lhs_last_term", lhs_tail).with("contour_height", line.height_cutoff),
    )
    .note(format!(
        "contour at Re s = -1 gives {reflected:e}; residues Mf(1) + zeta(0) f(0) = {residue_sum:e}; reconciliation {reconciliation:e}"
    ))
    .timed(start);
    Ok(ZetaRouteOutcome { report, contour_reflected: reflected, residue_sum, reconciliation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> TruncationPolicy {
        TruncationPolicy::tail_bound(1e-17, 10_000).unwrap()
    }

    #[test]
    fn theta_sweep() {
        let ts: Vec<f64> = (1..=100).map(|k| k as f64 / 10.0).collect();
        let r = verify_theta(&ts).unwrap();
        assert!(r.abs_residual < 1e-12);
    }

    #[test]
    fn self_dual_gaussian() {
        let f = TestFunction::gaussian_hermite(0, 1.0).unwrap();
        let r = verify_poisson(&f, &policy()).unwrap();
        assert!(r.abs_residual < 1e-12, "{r:?}");
        // Σ_{n≥1} e^{-πn²} = (θ(1) - 1)/2
        assert!((r.lhs - (theta(1.0).unwrap() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_t2_matches_theta() {
        let f = TestFunction::gaussian_hermite(0, 2.0).unwrap();
        let r = verify_poisson(&f, &policy()).unwrap();
        assert!(r.rel_residual < 1e-11);
        assert!((r.lhs - (theta(2.0).unwrap() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_route_for_gaussians() {
        let g = TestFunction::gaussian_hermite(0, 1.0).unwrap();
        let out = verify_poisson_via_zeta(&g, 2.0, &policy()).unwrap();
        assert!(out.report.abs_residual < 1e-8);
        assert!(out.reconciliation < 1e-8);
        let g4 = TestFunction::gaussian_hermite(2, 1.0).unwrap();
        let out = verify_poisson_via_zeta(&g4, 2.0, &policy()).unwrap();
        assert!(out.report.abs_residual < 1e-7);
        assert!(verify_poisson_via_zeta(&g4, 0.5, &policy()).is_err());
    }
}
