use super::report::{FormulaId, Truncation, TruncationPolicy, TruncationStrategy, VerificationReport};
use crate::arith::{CoefficientTable, TableKind, TwistParams};
use crate::error::{Error, Result};
use crate::mellin::{real_part_checked, Family, SpectralParams, TestFunction, VoronoiTransform};
use crate::numeric::{pairwise_sum, C64, TWO_PI};
use rayon::prelude::*;
use std::time::Instant;

const BLOCK: usize = 64;

/// e(k/m) with k reduced exactly and folded into (-m/2, m/2], so that
/// twists by k and -k give conjugate values bit for bit.
pub(super) fn additive_character(k: i128, m: i128) -> C64 {
    let m = m.abs();
    let r = k.rem_euclid(m);
    if 2 * r == m {
        return C64::new(-1.0, 0.0);
    }
    let r = if 2 * r > m { r - m } else { r };
    let angle = TWO_PI * (r.unsigned_abs() as f64) / m as f64;
    let (s, c) = angle.sin_cos();
    C64::new(c, if r < 0 { -s } else { s })
}

pub(super) fn exp_inverse_params(f: &TestFunction) -> Result<(f64, f64)> {
    match f.family() {
        Family::ExpInverse { a, b } => Ok((a, b)),
        _ => Err(Error::Domain("Voronoi engines for automorphic coefficients need an ExpInverse test function".into())),
    }
}

/// g·Σ_{n>N} n e^{-An}, the tail of Σ |c_n f(n)| under |c_n| ≤ g·n.
pub(super) fn linear_growth_tail(g: f64, a: f64, n: usize) -> f64 {
    let q = (-a).exp();
    let n = n as f64;
    g * (-a * (n + 1.0)).exp() * ((n + 1.0) - n * q) / ((1.0 - q) * (1.0 - q))
}

/// Σ_{n=1}^{N} c(n) f(n) with N the first index where the linear-growth
/// tail bound drops below the policy tolerance.
pub(super) fn twisted_lhs(
    coeff: &(dyn Fn(usize) -> Result<f64> + Sync),
    phase: &(dyn Fn(usize) -> C64 + Sync),
    f: &TestFunction,
    growth: f64,
    available: usize,
    policy: &TruncationPolicy,
) -> Result<(C64, usize, f64)> {
    let (a, _) = exp_inverse_params(f)?;
    let mut terms = Vec::new();
    loop {
        let n = terms.len() + 1;
        if n > available {
            return Err(Error::Table(format!("LHS needs coefficients beyond n = {available}")));
        }
        terms.push(phase(n) * (coeff(n)? * f.eval(n as f64)));
        let total = pairwise_sum(&terms);
        let tail = linear_growth_tail(growth * f.scale().abs(), a, n);
        let stop = match policy.strategy {
            TruncationStrategy::FixedCount => n >= policy.max_terms,
            TruncationStrategy::TailBound => {
                if policy.done(n, tail, total.norm()) {
                    true
                } else if policy.exhausted(n) {
                    return Err(Error::Truncation(format!("LHS tail bound {tail:e} after {n} terms")));
                } else {
                    false
                }
            }
        };
        if stop {
            return Ok((total, n, tail));
        }
    }
}

/// Σ_{n≥1} term(n), in parallel blocks, until two consecutive blocks carry
/// negligible mass.
pub(super) fn block_series(
    term: &(dyn Fn(usize) -> Result<C64> + Sync),
    available: usize,
    policy: &TruncationPolicy,
) -> Result<(C64, usize, f64)> {
    let mut blocks = Vec::new();
    let mut quiet = 0;
    let mut done = 0;
    loop {
        let hi = match policy.strategy {
            TruncationStrategy::FixedCount => (done + BLOCK).min(policy.max_terms),
            TruncationStrategy::TailBound => done + BLOCK,
        };
        if hi > available {
            return Err(Error::Table(format!(
                "RHS still significant at n = {done}; coefficient table stops at {available}"
            )));
        }
        let terms: Vec<C64> = (done + 1..=hi).into_par_iter().map(term).collect::<Result<_>>()?;
        let mass: f64 = terms.iter().map(|t| t.norm()).sum();
        blocks.push(pairwise_sum(&terms));
        done = hi;
        let total = pairwise_sum(&blocks);
        match policy.strategy {
            TruncationStrategy::FixedCount if done >= policy.max_terms => return Ok((total, done, mass)),
            TruncationStrategy::FixedCount => {}
            TruncationStrategy::TailBound => {
                if policy.done(done, mass, total.norm()) {
                    quiet += 1;
                    if quiet == 2 {
                        return Ok((total, done, mass));
                    }
                } else {
                    quiet = 0;
                }
                if policy.exhausted(done) {
                    return Err(Error::Truncation(format!("RHS block mass {mass:e} after {done} terms")));
                }
            }
        }
    }
}

/// Largest |c_n|/n over the table, the growth constant of the LHS bound.
pub(super) fn observed_growth(coeff: impl Fn(usize) -> Result<f64>, n: usize) -> Result<f64> {
    let mut g: f64 = 0.0;
    for k in 1..=n {
        g = g.max(coeff(k)?.abs() / k as f64);
    }
    Ok(g)
}

/// Σ_{n≠0} aₙ e(-na/c) f(n) against |c| Σ_{n≠0} (aₙ/|n|) e(nā/c) F(n/c²).
///
/// Both sides are computed as complex numbers; the report carries real
/// parts and the imaginary parts go into the notes.
pub fn verify_gl2_voronoi(
    coeffs: &CoefficientTable,
    params: &SpectralParams,
    twist: &TwistParams,
    f: &TestFunction,
    trunc: &TruncationPolicy,
) -> Result<VerificationReport> {
    let start = Instant::now();
    coeffs.require_kind(TableKind::NormalizedGl2)?;
    let SpectralParams::Gl2 { eta, holomorphic, .. } = *params else {
        return Err(Error::Domain("GL(2) engine needs GL(2) spectral parameters".into()));
    };
    exp_inverse_params(f)?;
    let tw = twist.reduced();
    let c = tw.c.abs() as i128;
    let n_max = coeffs.max_index();
    let a_n = |n: usize| coeffs.at(n);
    let growth = observed_growth(a_n, n_max)?;

    let lhs_phase = |n: usize| additive_character(-(n as i128) * tw.a as i128, c);
    let (lhs, lhs_terms, lhs_tail) = twisted_lhs(&a_n, &lhs_phase, f, growth, n_max, trunc)?;

    let transform = VoronoiTransform::new(f, params)?;
    let c2 = (c * c) as f64;
    let negative_sign = if eta == 0 { 1.0 } else { -1.0 };
    // F is real for real ν, which keeps conjugate twists bitwise symmetric.
    let big_f = |t: f64| -> Result<f64> { real_part_checked(transform.eval(t)?) };
    let rhs_term = |n: usize| -> Result<C64> {
        let an = coeffs.at(n)? / n as f64;
        let pos = additive_character(n as i128 * tw.a_bar as i128, c) * big_f(n as f64 / c2)?;
        if holomorphic {
            return Ok(pos * an);
        }
        let neg = additive_character(-(n as i128) * tw.a_bar as i128, c) * big_f(-(n as f64) / c2)?;
        Ok((pos + neg * negative_sign) * an)
    };
    let (series, rhs_terms, rhs_tail) = block_series(&rhs_term, n_max, trunc)?;
    let rhs = series * c as f64;

    let report = VerificationReport::new(
        FormulaId::Gl2,
        lhs.re,
        rhs.re,
        Truncation::new(lhs_terms, rhs_terms)
            .with("lhs_tail_bound", lhs_tail)
            .with("rhs_last_block_mass", rhs_tail)
            .with("contour_tail", transform.tail_estimate()),
    )
    .note(format!("twist a/c = {}/{}, a_bar = {}", tw.a, tw.c, tw.a_bar))
    .note(format!("LHS growth bound |a_n| <= {growth:.6} n (observed)"))
    .note(format!("imaginary parts: lhs {:e}, rhs {:e}", lhs.im, rhs.im))
    .note(if holomorphic { "holomorphic: a_n = 0 for n < 0" } else { "a_{-n} = (-1)^eta a_n" });
    Ok(report.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_are_exact_conjugates() {
        for m in [2i128, 3, 7, 12] {
            for k in -30i128..30 {
                let (p, q) = (additive_character(k, m), additive_character(-k, m));
                assert_eq!(p.re, q.re);
                assert_eq!(p.im, -q.im);
                assert_eq!(p, additive_character(k + 5 * m, m));
            }
        }
        assert_eq!(additive_character(1, 2), C64::new(-1.0, 0.0));
        assert_eq!(additive_character(3, 1), C64::new(1.0, 0.0));
    }

    fn delta_setup() -> (CoefficientTable, SpectralParams, TestFunction, TruncationPolicy) {
        let tau = crate::arith::ramanujan_tau_table(2000).unwrap();
        let (a, params) = crate::arith::normalized_gl2_coeffs(&tau, 12).unwrap();
        let f = TestFunction::exp_inverse(1.0, 4.0).unwrap();
        (a, params, f, TruncationPolicy::tail_bound(1e-12, 2000).unwrap())
    }

    #[test]
    fn delta_untwisted_and_twisted() {
        let (a, params, f, p) = delta_setup();
        for (ta, tc) in [(0, 1), (1, 2), (2, 5)] {
            let tw = TwistParams::new(ta, tc, 1).unwrap();
            let r = verify_gl2_voronoi(&a, &params, &tw, &f, &p).unwrap();
            assert!(r.rel_residual < 1e-10, "{ta}/{tc}: {r:?}");
        }
    }

    #[test]
    fn twist_periodicity_and_conjugation() {
        let (a, params, f, p) = delta_setup();
        let run = |ta, tc| {
            let mut r = verify_gl2_voronoi(&a, &params, &TwistParams::new(ta, tc, 1).unwrap(), &f, &p).unwrap();
            r.runtime_ms = 0;
            r
        };
        let (r1, r2) = (run(1, 3), run(4, 3));
        assert_eq!(r1, r2);
        let r3 = run(-1, 3);
        assert_eq!(r1.lhs, r3.lhs);
        assert_eq!(r1.rhs, r3.rhs);
    }

    #[test]
    fn rejects_wrong_inputs() {
        let (a, params, _, p) = delta_setup();
        let tw = TwistParams::new(0, 1, 1).unwrap();
        let g = TestFunction::gaussian_hermite(0, 1.0).unwrap();
        assert!(verify_gl2_voronoi(&a, &params, &tw, &g, &p).is_err());
        let f = TestFunction::exp_inverse(1.0, 4.0).unwrap();
        let short = a.truncated(20).unwrap();
        assert!(matches!(verify_gl2_voronoi(&short, &params, &tw, &f, &p), Err(Error::Table(_))));
    }

    #[test]
    fn growth_tail_matches_direct_sum() {
        let (g, a, n) = (1.7, 0.3, 40);
        let direct: f64 = (n + 1..5000).map(|k| g * k as f64 * (-a * k as f64).exp()).sum();
        assert!((linear_growth_tail(g, a, n) - direct).abs() < 1e-12 * direct);
    }
}
