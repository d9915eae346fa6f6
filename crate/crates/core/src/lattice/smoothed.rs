use super::counting::{circle_count, delta_circle};
use super::mollifier::Mollifier;
use crate::arith::r2_table;
use crate::engines::{FormulaId, Truncation, VerificationReport};
use crate::error::{Error, Result};
use crate::numeric::quad::gl16;
use crate::numeric::pairwise_sum;
use crate::special::bessel_j1;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

/// |ψ| level below which the Bessel series is cut off.
pub const PSI_TAIL_TOL: f64 = 1e-10;

/// The disc indicator of radius √X convolved with Φ scaled to radius
/// δ = X^{-1/6}.
#[derive(Clone, Copy, Debug)]
pub struct SmoothedIndicator {
    pub x: f64,
    pub delta: f64,
    mollifier: &'static Mollifier,
}

impl SmoothedIndicator {
    pub fn new(x: f64) -> Result<Self> {
        if !(x > 1.0) || !x.is_finite() {
            return Err(Error::Domain(format!("smoothed indicator needs X > 1, got {x}")));
        }
        Ok(SmoothedIndicator { x, delta: x.powf(-1.0 / 6.0), mollifier: Mollifier::shared()? })
    }

    pub fn mollifier(&self) -> &'static Mollifier {
        self.mollifier
    }

    /// f_X at radius √r2, with the squared radius passed exactly.
    pub fn profile_sq(&self, r2: f64) -> f64 {
        let sx = self.x.sqrt();
        let r = r2.sqrt();
        if r <= sx - self.delta {
            return 1.0;
        }
        if r >= sx + self.delta {
            return 0.0;
        }
        // Φ-mass of {u : |v - δu| ≤ √X}; for |u| = ρ the admissible angles
        // are those with cos θ ≥ c(ρ).
        let gap = r2 - self.x;
        let rho0 = (r - sx).abs() / self.delta;
        let inside = gap < 0.0;
        let core = if inside { self.mollifier.mass_within(rho0) } else { 0.0 };
        let d = self.delta;
        let arc = |u: f64| -> f64 {
            let rho = rho0 + (1.0 - rho0) * u * u;
            if rho <= 0.0 {
                return 0.0;
            }
            let c = ((gap + d * d * rho * rho) / (2.0 * r * d * rho)).clamp(-1.0, 1.0);
            rho * self.mollifier.phi(rho) * 2.0 * c.acos() * 2.0 * (1.0 - rho0) * u
        };
        (core + gl16().integrate_panels(0.0, 1.0, 8, arc)).clamp(0.0, 1.0)
    }

    /// f_X(r).
    pub fn profile(&self, r: f64) -> f64 {
        self.profile_sq(r * r)
    }

    /// F_X(v).
    pub fn eval(&self, v: [f64; 2]) -> f64 {
        self.profile_sq(v[0] * v[0] + v[1] * v[1])
    }

    /// Integers n with √X - δ ≤ √n ≤ √X + δ.
    pub fn band(&self) -> (u64, u64) {
        let sx = self.x.sqrt();
        let lo = ((sx - self.delta).max(0.0).powi(2)).ceil() as u64;
        let hi = ((sx + self.delta).powi(2)).floor() as u64;
        (lo, hi)
    }

    /// Largest n entering the Bessel series.
    fn series_cutoff(&self) -> Result<usize> {
        let rho = self.mollifier.psi_cutoff(PSI_TAIL_TOL)?;
        Ok(((rho / self.delta).powi(2)).ceil() as usize + 1)
    }

    /// √X r₂(n) n^{-1/2} ψ(δ√n) J₁(2π√(nX)) for 1 ≤ n ≤ cutoff.
    fn bessel_terms(&self) -> Result<Vec<f64>> {
        let n_max = self.series_cutoff()?;
        let r2 = r2_table(n_max);
        let sx = self.x.sqrt();
        Ok((1..=n_max)
            .into_par_iter()
            .map(|n| {
                if r2[n] == 0 {
                    return 0.0;
                }
                let sn = (n as f64).sqrt();
                sx * r2[n] as f64 / sn * self.mollifier.psi(self.delta * sn) * bessel_j1(2.0 * PI * sn * sx)
            })
            .collect())
    }
}

/// Smoothing used in the two-dimensional Poisson identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    /// F_X: the disc of radius √X blurred by the bump at scale X^{-1/6}.
    Bump,
    /// exp(-π|v|²/X), whose transform X exp(-πX|ξ|²) leaves only n = 0.
    Gaussian,
}

/// Σ_{n≥0} r₂(n) f_X(√n) against πX + √X Σ_{n≥1} n^{-1/2} r₂(n) ψ(δ√n) J₁(2π√(nX)).
pub fn smoothed_circle_identity(x: f64, smoothing: Smoothing) -> Result<VerificationReport> {
    let start = Instant::now();
    if !(x >= 100.0) || !x.is_finite() {
        return Err(Error::Domain(format!("smoothed identity needs X >= 100, got {x}")));
    }
    let report = match smoothing {
        Smoothing::Bump => {
            let ind = SmoothedIndicator::new(x)?;
            let (_, hi) = ind.band();
            let r2 = r2_table(hi as usize);
            let lhs_terms: Vec<f64> =
                (0..=hi as usize).map(|n| if r2[n] == 0 { 0.0 } else { r2[n] as f64 * ind.profile_sq(n as f64) }).collect();
            let lhs = pairwise_sum(&lhs_terms);
            let series = ind.bessel_terms()?;
            let rhs = PI * x + pairwise_sum(&series);
            VerificationReport::new(
                FormulaId::SmoothedCircle,
                lhs,
                rhs,
                Truncation::new(lhs_terms.len(), series.len() + 1).with("psi_cutoff_level", PSI_TAIL_TOL),
            )
            .note(format!("delta = X^(-1/6) = {}", ind.delta))
        }
        Smoothing::Gaussian => {
            // e^{-πn/X} < 1e-18 past n = 42 X/π
            let n_max = (42.0 * x / PI).ceil() as usize;
            let r2 = r2_table(n_max);
            let lhs_terms: Vec<f64> = (0..=n_max).map(|n| r2[n] as f64 * (-PI * n as f64 / x).exp()).collect();
            let rhs_terms: Vec<f64> = (0..=n_max.min(8)).map(|n| r2[n] as f64 * (-PI * x * n as f64).exp()).collect();
            VerificationReport::new(
                FormulaId::SmoothedCircle,
                pairwise_sum(&lhs_terms),
                x * pairwise_sum(&rhs_terms),
                Truncation::new(lhs_terms.len(), rhs_terms.len()),
            )
            .note("gaussian smoothing")
        }
    };
    Ok(report.timed(start))
}

/// The three terms bounding Δ(X), with Δ(X) itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundTerms {
    pub x: f64,
    pub delta: f64,
    pub error: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl BoundTerms {
    pub fn holds(&self) -> bool {
        self.error <= self.b1 + self.b2 + self.b3
    }
}

/// B₁ (lattice points in the band), B₂ and B₃ (absolute Bessel sums below
/// and above n = δ^{-2}).
pub fn bound_terms(x: f64) -> Result<BoundTerms> {
    if !(x >= 100.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bound terms need X >= 100, got {x}")));
    }
    let ind = SmoothedIndicator::new(x)?;
    let (lo, hi) = ind.band();
    let b1 = if hi >= lo {
        let below = if lo > 1 { circle_count((lo - 1) as f64)? } else { 0 };
        (circle_count(hi as f64)? - below) as f64
    } else {
        0.0
    };
    let terms = ind.bessel_terms()?;
    let split = (ind.delta.powi(-2)).floor() as usize;
    let abs: Vec<f64> = terms.iter().map(|t| t.abs()).collect();
    let k = split.min(abs.len());
    Ok(BoundTerms {
        x,
        delta: ind.delta,
        error: delta_circle(x)?,
        b1,
        b2: pairwise_sum(&abs[..k]),
        b3: pairwise_sum(&abs[k..]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_limits() {
        let ind = SmoothedIndicator::new(1e4).unwrap();
        let d = ind.delta;
        assert_eq!(ind.profile(100.0 - d), 1.0);
        assert_eq!(ind.profile(100.0 + d), 0.0);
        assert!((ind.profile(100.0 - d * (1.0 - 1e-9)) - 1.0).abs() < 1e-12);
        assert!(ind.profile(100.0 + d * (1.0 - 1e-9)) < 1e-12);
        let mid = ind.profile(100.0);
        assert!((mid - 0.5).abs() < 0.01, "{mid}");
        let mut prev = 1.0;
        for k in 0..=100 {
            let v = ind.profile(100.0 - d + 2.0 * d * k as f64 / 100.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn smoothed_identity_at_1e4() {
        let r = smoothed_circle_identity(1e4, Smoothing::Bump).unwrap();
        assert!(r.rel_residual < 1e-6, "{r:?}");
        let g = smoothed_circle_identity(1e4, Smoothing::Gaussian).unwrap();
        assert!(g.rel_residual < 1e-10, "{g:?}");
        assert!(smoothed_circle_identity(50.0, Smoothing::Bump).is_err());
    }

    #[test]
    fn bounds_dominate_error() {
        for x in [1e3, 1e4, 1e5] {
            let b = bound_terms(x).unwrap();
            assert!(b.holds(), "{b:?}");
        }
    }
}
