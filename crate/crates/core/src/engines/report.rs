use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    Theta,
    Poisson,
    PoissonZeta,
    VoronoiDivisor,
    VoronoiCircle,
    Gl2,
    Gl3,
    MellinId,
    SmoothedCircle,
}

impl FormulaId {
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Theta => "theta",
            FormulaId::Poisson => "poisson",
            FormulaId::PoissonZeta => "poisson-zeta",
            FormulaId::VoronoiDivisor => "voronoi-divisor",
            FormulaId::VoronoiCircle => "voronoi-circle",
            FormulaId::Gl2 => "gl2",
            FormulaId::Gl3 => "gl3",
            FormulaId::MellinId => "mellin-id",
            FormulaId::SmoothedCircle => "smoothed-circle",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Truncation {
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    /// Named bounds or estimates for what the truncated parts contribute.
    pub tail_estimates: BTreeMap<String, f64>,
}

impl Truncation {
    pub fn new(lhs_terms: usize, rhs_terms: usize) -> Self {
        Truncation { lhs_terms, rhs_terms, tail_estimates: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.tail_estimates.insert(name.to_string(), value);
        self
    }
}

/// Outcome of one two-sided evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub formula: FormulaId,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub truncation: Truncation,
    pub runtime_ms: u64,
    pub convention_notes: String,
}

impl VerificationReport {
    pub fn new(formula: FormulaId, lhs: f64, rhs: f64, truncation: Truncation) -> Self {
        Self::with_residual(formula, lhs, rhs, (lhs - rhs).abs(), truncation)
    }

    /// For reports whose residual is not simply |lhs - rhs| (sweeps report
    /// the worst point).
    pub fn with_residual(formula: FormulaId, lhs: f64, rhs: f64, abs_residual: f64, truncation: Truncation) -> Self {
        let rel_residual = abs_residual / lhs.abs().max(rhs.abs()).max(1e-300);
        VerificationReport {
            formula,
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            truncation,
            runtime_ms: 0,
            convention_notes: String::new(),
        }
    }

    pub fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.convention_notes.is_empty() {
            self.convention_notes.push_str("; ");
        }
        self.convention_notes.push_str(text.as_ref());
        self
    }

    pub fn timed(mut self, start: std::time::Instant) -> Self {
        self.runtime_ms = start.elapsed().as_millis() as u64;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize")
    }

    pub const CSV_HEADER: &'static str =
        "formula,lhs,rhs,abs_residual,rel_residual,lhs_terms,rhs_terms,runtime_ms,convention_notes";

    pub fn to_csv_row(&self) -> String {
        let notes = self.convention_notes.replace('"', "'");
        format!(
            "{},{:e},{:e},{:e},{:e},{},{},{},\"{}\"",
            self.formula.name(),
            self.lhs,
            self.rhs,
            self.abs_residual,
            self.rel_residual,
            self.truncation.lhs_terms,
            self.truncation.rhs_terms,
            self.runtime_ms,
            notes
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationStrategy {
    /// Sum exactly `max_terms` terms.
    FixedCount,
    /// Stop once the remaining terms are bounded by `tail_tol` (relative).
    TailBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub tail_tol: f64,
    pub max_terms: usize,
    pub strategy: TruncationStrategy,
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, max_terms: usize, strategy: TruncationStrategy) -> Result<Self> {
        if !(tail_tol > 0.0) || max_terms == 0 {
            return Err(Error::Domain(format!("truncation needs tail_tol > 0 and max_terms > 0, got {tail_tol}, {max_terms}")));
        }
        Ok(TruncationPolicy { tail_tol, max_terms, strategy })
    }

    pub fn tail_bound(tail_tol: f64, max_terms: usize) -> Result<Self> {
        Self::new(tail_tol, max_terms, TruncationStrategy::TailBound)
    }

    /// True once a term (or block) of size `size` is negligible against `total`.
    pub(crate) fn done(&self, terms: usize, size: f64, total: f64) -> bool {
        match self.strategy {
            TruncationStrategy::FixedCount => terms >= self.max_terms,
            TruncationStrategy::TailBound => size <= self.tail_tol * total.abs().max(1e-300),
        }
    }

    pub(crate) fn exhausted(&self, terms: usize) -> bool {
        terms >= self.max_terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals_and_serialization() {
        let r = VerificationReport::new(FormulaId::Poisson, 2.0, 2.0 + 1e-9, Truncation::new(3, 4).with("rhs", 1e-20));
        let rhs = 2.0 + 1e-9;
        assert_eq!(r.rel_residual, (rhs - 2.0) / rhs);
        let j = r.to_json();
        for key in ["formula", "lhs", "rhs", "abs_residual", "rel_residual", "truncation", "runtime_ms", "convention_notes"] {
            assert!(j.contains(&format!("\"{key}\"")));
        }
        assert!(j.contains("\"poisson\""));
        let zero = VerificationReport::new(FormulaId::Gl3, 0.0, 0.0, Truncation::default());
        assert_eq!(zero.rel_residual, 0.0);
        assert_eq!(zero.to_csv_row().split(',').count(), VerificationReport::CSV_HEADER.split(',').count());
        assert!(TruncationPolicy::tail_bound(0.0, 10).is_err());
    }
}
