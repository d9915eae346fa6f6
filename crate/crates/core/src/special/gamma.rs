use crate::error::{Error, Result};
use crate::numeric::{is_nonpositive_integer, C64};
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Log-gamma without the pole check; returns an infinite value at poles.
///
/// The branch is the analytic continuation from the positive real axis
/// (sum of principal logarithms in the recurrence), so `exp` of the result
/// is Γ(s) everywhere.
pub fn ln_gamma(s: C64) -> C64 {
    if is_nonpositive_integer(s) {
        return C64::new(f64::INFINITY, 0.0);
    }
    if s.re < 0.5 {
        // Γ(s)Γ(1-s) = π / sin(πs)
        return C64::new(PI.ln(), 0.0) - ln_sin_pi(s) - ln_gamma(C64::new(1.0, 0.0) - s);
    }
    let mut z = s;
    let mut shift = C64::new(0.0, 0.0);
    while z.re < 10.0 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - shift
}

/// Logarithm of sin(πs), stable for large |Im s|.
pub fn ln_sin_pi(s: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let ln2 = std::f64::consts::LN_2;
    if s.im.abs() < 8.0 {
        (s * PI).sin().ln()
    } else if s.im > 0.0 {
        // sin(πs) = e^{-iπs}(1 - e^{2πis}) / (-2i)
        -i * PI * s + (C64::new(1.0, 0.0) - (i * 2.0 * PI * s).exp()).ln() - ln2 + i * (PI / 2.0)
    } else {
        i * PI * s + (C64::new(1.0, 0.0) - (-i * 2.0 * PI * s).exp()).ln() - ln2 - i * (PI / 2.0)
    }
}

/// Complex log-gamma with explicit pole signalling.
pub fn log_gamma(s: C64) -> Result<C64> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::Pole { function: "log_gamma", at: s.to_string() });
    }
    Ok(ln_gamma(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArchimedeanKind {
    /// Γ_R(s) = π^{-s/2} Γ(s/2)
    R,
    /// Γ_C(s) = 2 (2π)^{-s} Γ(s)
    C,
}

pub fn gamma_archimedean(s: C64, kind: ArchimedeanKind) -> Result<C64> {
    match kind {
        ArchimedeanKind::R => {
            let lg = log_gamma(s * 0.5)
                .map_err(|_| Error::Pole { function: "gamma_R", at: s.to_string() })?;
            Ok((lg - s * 0.5 * PI.ln()).exp())
        }
        ArchimedeanKind::C => {
            let lg =
                log_gamma(s).map_err(|_| Error::Pole { function: "gamma_C", at: s.to_string() })?;
            Ok((lg - s * (2.0 * PI).ln()).exp() * 2.0)
        }
    }
}
