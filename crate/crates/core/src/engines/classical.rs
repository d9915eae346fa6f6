use super::report::{FormulaId, Truncation, TruncationPolicy, TruncationStrategy, VerificationReport};
use crate::arith::{divisor_table, r2_table};
use crate::error::{Error, Result};
use crate::mellin::{Family, TestFunction};
use crate::numeric::quad::gl16;
use crate::numeric::{pairwise_sum, EULER_GAMMA};
use crate::special::{bessel_j0, bessel_k0, bessel_y0};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::time::Instant;

const BLOCK: usize = 512;
const MIN_PANELS: usize = 64;

fn bump_support(f: &TestFunction) -> Result<(f64, f64)> {
    match f.family() {
        Family::SmoothBump { a, b } => Ok((a, b)),
        _ => Err(Error::Domain("classical Voronoi engines need a SmoothBump test function".into())),
    }
}

/// ∫_a^b f(x) k(√x) dx after x = y², with about one GL16 panel per period
/// of a kernel oscillating like cos(ω y).
fn kernel_integral(f: &TestFunction, a: f64, b: f64, omega: f64, k: impl Fn(f64) -> f64) -> f64 {
    let (ya, yb) = (a.sqrt(), b.sqrt());
    let panels = MIN_PANELS.max(((yb - ya) * omega / (2.0 * PI)).ceil() as usize);
    gl16().integrate_panels(ya, yb, panels, |y| f.eval(y * y) * k(y) * 2.0 * y)
}

/// Σ_{n≥1} c(n) I(n) over blocks evaluated in parallel, stopping once two
/// consecutive blocks have absolute mass below the policy's tolerance
/// relative to `reference` (the size of the whole side).
fn kernel_series(
    coeffs: &(dyn Fn(usize) -> f64 + Sync),
    term: &(dyn Fn(usize) -> f64 + Sync),
    reference: f64,
    policy: &TruncationPolicy,
) -> Result<(f64, usize, f64)> {
    let mut blocks: Vec<f64> = Vec::new();
    let mut quiet = 0;
    let mut n_done = 0;
    loop {
        let lo = n_done + 1;
        let hi = (n_done + BLOCK).min(policy.max_terms);
        let terms: Vec<f64> = (lo..=hi)
            .into_par_iter()
            .map(|n| {
                let c = coeffs(n);
                if c == 0.0 {
                    0.0
                } else {
                    c * term(n)
                }
            })
            .collect();
        let mass: f64 = terms.iter().map(|t| t.abs()).sum();
        blocks.push(pairwise_sum(&terms));
        n_done = hi;
        let total = pairwise_sum(&blocks);
        match policy.strategy {
            TruncationStrategy::FixedCount => {
                if n_done >= policy.max_terms {
                    return Ok((total, n_done, mass));
                }
            }
            TruncationStrategy::TailBound => {
                if policy.done(n_done, mass, total.abs().max(reference)) {
                    quiet += 1;
                    if quiet == 2 {
                        return Ok((total, n_done, mass));
                    }
                } else {
                    quiet = 0;
                }
                if policy.exhausted(n_done) {
                    return Err(Error::Truncation(format!(
                        "RHS block mass {mass:e} still above tail_tol after {n_done} terms"
                    )));
                }
            }
        }
    }
}

fn integer_range(a: f64, b: f64) -> std::ops::RangeInclusive<u64> {
    (a.max(1.0).ceil() as u64)..=(b.floor() as u64)
}

/// Σ d(n) f(n) against the main term ∫ f(x)(log x + 2γ) dx plus the
/// K₀/Y₀ Bessel series.
pub fn verify_voronoi_divisor(f: &TestFunction, trunc: &TruncationPolicy) -> Result<VerificationReport> {
    let start = Instant::now();
    let (a, b) = bump_support(f)?;
    let table = divisor_table(trunc.max_terms.max(b as usize + 1));
    let lhs_terms: Vec<f64> = integer_range(a, b).map(|n| table[n as usize] as f64 * f.eval(n as f64)).collect();
    let lhs = pairwise_sum(&lhs_terms);
    let main = gl16().integrate_panels(a, b, 256, |x| f.eval(x) * (x.ln() + 2.0 * EULER_GAMMA));
    let coeff = |n: usize| table[n] as f64;
    let term = |n: usize| {
        let w = 4.0 * PI * (n as f64).sqrt();
        kernel_integral(f, a, b, w, |y| 4.0 * bessel_k0(w * y) - 2.0 * PI * bessel_y0(w * y))
    };
    let (series, rhs_terms, tail) = kernel_series(&coeff, &term, lhs.abs().max(main.abs()), trunc)?;
    Ok(VerificationReport::new(
        FormulaId::VoronoiDivisor,
        lhs,
        main + series,
        Truncation::new(lhs_terms.len(), rhs_terms).with("rhs_last_block_mass", tail),
    )
    .note(format!("main term {main:.15e}"))
    .timed(start))
}

/// Σ r₂(n) f(n) against Σ_{n≥0} r₂(n) ∫ f(x) π J₀(2π√(nx)) dx.
pub fn verify_voronoi_circle(f: &TestFunction, trunc: &TruncationPolicy) -> Result<VerificationReport> {
    let start = Instant::now();
    let (a, b) = bump_support(f)?;
    let table = r2_table(trunc.max_terms.max(b as usize + 1));
    let lhs_terms: Vec<f64> = integer_range(a, b).map(|n| table[n as usize] as f64 * f.eval(n as f64)).collect();
    let lhs = pairwise_sum(&lhs_terms);
    let main = PI * gl16().integrate_panels(a, b, 256, |x| f.eval(x));
    let coeff = |n: usize| table[n] as f64;
    let term = |n: usize| {
        let w = 2.0 * PI * (n as f64).sqrt();
        kernel_integral(f, a, b, w, |y| PI * bessel_j0(w * y))
    };
    let (series, rhs_terms, tail) = kernel_series(&coeff, &term, lhs.abs().max(main.abs()), trunc)?;
    Ok(VerificationReport::new(
        FormulaId::VoronoiCircle,
        lhs,
        main + series,
        Truncation::new(lhs_terms.len(), rhs_terms + 1).with("rhs_last_block_mass", tail),
    )
    .note(format!("n = 0 term {main:.15e}"))
    .timed(start))
}
