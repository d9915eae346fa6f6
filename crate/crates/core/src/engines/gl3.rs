use super::gl2::{additive_character, block_series, exp_inverse_params, observed_growth, twisted_lhs};
use super::report::{FormulaId, Truncation, TruncationPolicy, VerificationReport};
use crate::arith::sym2::abelian_from_a;
use crate::arith::{divisors, kloosterman, CoefficientTable, KloostermanParams, NegativeIndexConvention, TableKind, TwistParams};
use crate::error::{Error, Result};
use crate::mellin::{SpectralParams, TestFunction, VoronoiTransform};
use crate::numeric::{pairwise_sum, C64};
use std::time::Instant;

/// How the GL(3) right-hand side is normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gl3Options {
    /// Extension of a_{n,d} to n < 0.
    pub convention: NegativeIndexConvention,
    /// Global factor applied to the right-hand side.
    pub scalar: f64,
}

impl Default for Gl3Options {
    /// The combination resolved by [`resolve_gl3_normalization`] on the
    /// weight-12 symmetric square.
    fn default() -> Self {
        Gl3Options { convention: NegativeIndexConvention::Even, scalar: 1.0 }
    }
}

/// One GL(3) run with both sign conventions evaluated.
#[derive(Clone, Debug)]
pub struct Gl3Outcome {
    pub report: VerificationReport,
    pub lhs: C64,
    /// Σ over n > 0 of the right-hand side.
    pub rhs_positive: C64,
    /// Σ over n < 0 with a_{n,d} = a_{|n|,d}.
    pub rhs_negative: C64,
}

impl Gl3Outcome {
    pub fn rhs(&self, convention: NegativeIndexConvention) -> C64 {
        match convention {
            NegativeIndexConvention::Even => self.rhs_positive + self.rhs_negative,
            NegativeIndexConvention::Odd => self.rhs_positive - self.rhs_negative,
        }
    }
}

/// Result of the convention scan and global-scalar fit over several runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Gl3Resolution {
    pub convention: NegativeIndexConvention,
    pub scalar: f64,
    pub max_rel_residual: f64,
    /// (convention, fitted scalar, worst relative residual) for each candidate.
    pub candidates: Vec<(NegativeIndexConvention, f64, f64)>,
}

/// Least-squares real κ minimizing Σ |L - κR|² over the outcomes.
pub fn fit_gl3_scalar(outcomes: &[Gl3Outcome], convention: NegativeIndexConvention) -> f64 {
    let num: f64 = outcomes.iter().map(|o| (o.rhs(convention).conj() * o.lhs).re).sum();
    let den: f64 = outcomes.iter().map(|o| o.rhs(convention).norm_sqr()).sum();
    if den == 0.0 {
        1.0
    } else {
        num / den
    }
}

fn rel_residual(lhs: C64, rhs: C64) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300)
}

/// Runs both conventions with a jointly fitted scalar and keeps the pair
/// with the smallest worst-case residual.
pub fn resolve_gl3_normalization(outcomes: &[Gl3Outcome]) -> Result<Gl3Resolution> {
    if outcomes.is_empty() {
        return Err(Error::Domain("convention scan needs at least one run".into()));
    }
    let candidates: Vec<_> = [NegativeIndexConvention::Even, NegativeIndexConvention::Odd]
        .into_iter()
        .map(|conv| {
            let k = fit_gl3_scalar(outcomes, conv);
            let worst = outcomes.iter().map(|o| rel_residual(o.lhs, o.rhs(conv) * k)).fold(0.0, f64::max);
            (conv, k, worst)
        })
        .collect();
    let best = candidates.iter().min_by(|a, b| a.2.total_cmp(&b.2)).copied().expect("two candidates");
    Ok(Gl3Resolution { convention: best.0, scalar: best.1, max_rel_residual: best.2, candidates })
}

/// Σ_{n≥1} a_{q,n} e(-na/c) f(n) against
/// Σ_{d|cq} |c/d| Σ_{n≠0} (a_{n,d}/|n|) S(qā, n; qc/d) F(nd²/(c³q)).
///
/// `big_a` is the table of A_n from which a_{m,n} is assembled.
pub fn verify_gl3_voronoi(
    big_a: &CoefficientTable,
    params: &SpectralParams,
    twist: &TwistParams,
    f: &TestFunction,
    trunc: &TruncationPolicy,
    options: &Gl3Options,
) -> Result<Gl3Outcome> {
    let start = Instant::now();
    big_a.require_kind(TableKind::SymSquareA)?;
    if !matches!(params, SpectralParams::Gl3 { .. }) {
        return Err(Error::Domain("GL(3) engine needs GL(3) spectral parameters".into()));
    }
    exp_inverse_params(f)?;
    let tw = twist.reduced();
    let c = tw.c.abs();
    let q = tw.q as i64;
    let cq = (c as u64)
        .checked_mul(tw.q)
        .filter(|&v| v <= i64::MAX as u64 / 4)
        .ok_or_else(|| Error::Overflow(format!("c·q for c = {c}, q = {q}")))?;
    let available = big_a.max_index();
    if tw.q as usize > available {
        return Err(Error::Table(format!("a_(q,n) needs A_n up to q = {q}")));
    }

    let a_qn = |n: usize| abelian_from_a(tw.q as usize, n, big_a);
    let growth = observed_growth(a_qn, available)?;
    let lhs_phase = |n: usize| additive_character(-(n as i128) * tw.a as i128, c as i128);
    let (lhs, lhs_terms, lhs_tail) = twisted_lhs(&a_qn, &lhs_phase, f, growth, available, trunc)?;

    let transform = VoronoiTransform::new(f, params)?;
    let c3q = (c as f64).powi(3) * q as f64;
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let mut rhs_terms = 0;
    let mut rhs_tail: f64 = 0.0;
    let mut trivial_kloosterman = true;
    let ds = divisors(cq);
    for &d in &ds {
        let d = d as i64;
        if d as usize > available {
            return Err(Error::Table(format!("a_(n,d) needs A_n up to d = {d}")));
        }
        let modulus = q * c / d;
        let weight = c as f64 / d as f64;
        let scale = (d * d) as f64 / c3q;
        let transform = &transform;
        let side = |sign: i64| {
            move |n: usize| -> Result<C64> {
                let m = sign * n as i64;
                let s = kloosterman(KloostermanParams { m: q * tw.a_bar, n: m, c: modulus })?;
                let coeff = abelian_from_a(n, d as usize, big_a)? / n as f64;
                Ok(transform.eval(m as f64 * scale)? * (weight * coeff * s))
            }
        };
        if modulus == 1 {
            trivial_kloosterman &= kloosterman(KloostermanParams { m: q * tw.a_bar, n: 1, c: 1 })? == 1.0;
        }
        let (p, np, tp) = block_series(&side(1), available, trunc)?;
        let (m, nm, tm) = block_series(&side(-1), available, trunc)?;
        positive.push(p);
        negative.push(m);
        rhs_terms += np + nm;
        rhs_tail = rhs_tail.max(tp).max(tm);
    }
    let rhs_positive = pairwise_sum(&positive);
    let rhs_negative = pairwise_sum(&negative);

    let mut outcome = Gl3Outcome {
        report: VerificationReport::new(FormulaId::Gl3, 0.0, 0.0, Truncation::new(0, 0)),
        lhs,
        rhs_positive,
        rhs_negative,
    };
    let rhs = outcome.rhs(options.convention) * options.scalar;
    let mut report = VerificationReport::new(
        FormulaId::Gl3,
        lhs.re,
        rhs.re,
        Truncation::new(lhs_terms, rhs_terms)
            .with("lhs_tail_bound", lhs_tail)
            .with("rhs_last_block_mass", rhs_tail)
            .with("contour_tail", transform.tail_estimate()),
    )
    .note(format!("twist a/c = {}/{}, q = {q}, divisors of cq: {ds:?}", tw.a, tw.c))
    .note(format!("convention = {}, scalar = {}", options.convention.name(), options.scalar))
    .note(format!("imaginary parts: lhs {:e}, rhs {:e}", lhs.im, rhs.im));
    if c == 1 && q == 1 {
        report = report.note(format!("all Kloosterman factors equal 1: {trivial_kloosterman}"));
    }
    for conv in [NegativeIndexConvention::Even, NegativeIndexConvention::Odd] {
        let r = outcome.rhs(conv);
        let k = fit_gl3_scalar(std::slice::from_ref(&outcome), conv);
        report = report.note(format!(
            "scan {}: residual {:e} at scalar 1, fitted scalar {k:.9}",
            conv.name(),
            rel_residual(lhs, r)
        ));
    }
    outcome.report = report.timed(start);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(lhs: C64, p: C64, n: C64) -> Gl3Outcome {
        Gl3Outcome {
            report: VerificationReport::new(FormulaId::Gl3, 0.0, 0.0, Truncation::new(0, 0)),
            lhs,
            rhs_positive: p,
            rhs_negative: n,
        }
    }

    #[test]
    fn scan_recovers_planted_normalization() {
        let runs = [
            outcome(C64::new(2.0 * 1.5, 0.0), C64::new(2.5, 0.0), C64::new(0.5, 0.0)),
            outcome(C64::new(-0.3 * 1.5, 0.0), C64::new(0.1, 0.0), C64::new(0.4, 0.0)),
        ];
        let r = resolve_gl3_normalization(&runs).unwrap();
        assert_eq!(r.convention, NegativeIndexConvention::Odd);
        assert!((r.scalar - 1.5).abs() < 1e-15);
        assert!(r.max_rel_residual < 1e-15);
        assert!(resolve_gl3_normalization(&[]).is_err());
    }
}
