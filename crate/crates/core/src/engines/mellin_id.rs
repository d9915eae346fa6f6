use super::report::{FormulaId, Truncation, VerificationReport};
use crate::error::{Error, Result};
use crate::mellin::{bessel_kernel_mellin_pair, fourier_power_integral, gamma_ratio_kernel, KernelKind};
use crate::numeric::C64;
use std::time::Instant;

/// Γ-ratio kernel and both Bessel-kernel Mellin identities at real points
/// 0 < s < 3/4, reporting the worst relative mismatch between quadrature
/// and closed form.
pub fn verify_mellin_identities(points: &[f64]) -> Result<VerificationReport> {
    let start = Instant::now();
    if points.is_empty() {
        return Err(Error::Domain("mellin-id needs at least one point".into()));
    }
    let mut worst: Option<(f64, &str, f64, C64, C64)> = None;
    for &x in points {
        if !(x > 0.0 && x < 0.75) {
            return Err(Error::Domain(format!("mellin-id points must lie in (0, 3/4), got {x}")));
        }
        let s = C64::new(x, 0.0);
        let pairs = [
            ("gamma-ratio", (fourier_power_integral(s, 0)?, gamma_ratio_kernel(s, 0)?)),
            ("divisor kernel", bessel_kernel_mellin_pair(s, KernelKind::DivisorKernel)?),
            ("circle kernel", bessel_kernel_mellin_pair(s, KernelKind::CircleKernel)?),
        ];
        for (name, (numeric, closed)) in pairs {
            let rel = (numeric - closed).norm() / numeric.norm().max(closed.norm()).max(1e-300);
            if worst.as_ref().is_none_or(|w| rel > w.0) {
                worst = Some((rel, name, x, numeric, closed));
            }
        }
    }
    let (_, name, x, numeric, closed) = worst.expect("at least one point");
    Ok(VerificationReport::with_residual(
        FormulaId::MellinId,
        numeric.re,
        closed.re,
        (numeric - closed).norm(),
        Truncation::new(points.len(), points.len()),
    )
    .note(format!("{} points x 3 identities; worst is the {name} identity at s = {x}", points.len()))
    .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_on_a_few_points() {
        let r = verify_mellin_identities(&[0.25, 0.5]).unwrap();
        assert!(r.rel_residual < 1e-8, "{r:?}");
        assert_eq!(r.truncation.lhs_terms, 2);
    }

    #[test]
    fn rejects_points_outside_the_strip() {
        assert!(verify_mellin_identities(&[]).is_err());
        assert!(verify_mellin_identities(&[0.8]).is_err());
    }
}
