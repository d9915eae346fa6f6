use crate::error::{Error, Result};
use std::f64::consts::PI;

/// θ(t) = Σ_{n∈ℤ} exp(-π n² t), truncated once terms drop below 1e-17.
pub fn theta(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("theta requires t > 0, got {t}")));
    }
    let mut terms = Vec::new();
    let mut n = 1u64;
    loop {
        let v = (-PI * (n * n) as f64 * t).exp();
        if v < 1e-17 {
            break;
        }
        terms.push(v);
        n += 1;
    }
    let tail: f64 = terms.iter().rev().sum();
    Ok(1.0 + 2.0 * tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((theta(50.0).unwrap() - 1.0).abs() <= 1e-17);
        assert!((theta(1.0).unwrap() - 1.086_434_811_213_308).abs() < 1e-15);
        let r = 2f64.sqrt() * theta(2.0).unwrap() - theta(0.5).unwrap();
        assert!(r.abs() < 1e-13);
        assert!(theta(0.0).is_err());
        assert!(theta(-1.0).is_err());
    }
}
