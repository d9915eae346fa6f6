use crate::arith::r2_table;
use crate::error::{Error, Result};
use crate::numeric::EULER_GAMMA;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Largest X accepted by the exact counters.
pub const MAX_COUNT_X: f64 = 1e13;

fn check_x(x: f64) -> Result<u64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("lattice counts need X >= 1, got {x}")));
    }
    if x > MAX_COUNT_X {
        return Err(Error::Domain(format!("X = {x:e} exceeds the counting budget {MAX_COUNT_X:e}")));
    }
    Ok(x.floor() as u64)
}

/// Σ_{1≤n≤X} r₂(n): lattice points in the closed disc of radius √X, minus
/// the origin, counted column by column.
pub fn circle_count(x: f64) -> Result<u64> {
    let m = check_x(x)?;
    let r = m.isqrt();
    let points: u64 = (1..=r).into_par_iter().map(|c| 2 * (2 * (m - c * c).isqrt() + 1)).sum();
    Ok(points + 2 * r + 1 - 1)
}

/// Δ(X) = |Σ_{1≤n≤X} r₂(n) - πX|.
pub fn delta_circle(x: f64) -> Result<f64> {
    Ok((circle_count(x)? as f64 - PI * x).abs())
}

/// Σ_{n≤X} d(n) by the hyperbola method, 2Σ_{k≤√X}⌊X/k⌋ - ⌊√X⌋².
pub fn divisor_summatory(x: f64) -> Result<u64> {
    let m = check_x(x)?;
    let s = m.isqrt();
    let half: u64 = (1..=s).into_par_iter().map(|k| m / k).sum();
    Ok(2 * half - s * s)
}

/// Σ_{n≤X} d(n) as Σ_{k≤X} ⌊X/k⌋, the count of pairs with k·j ≤ X.
pub fn divisor_summatory_brute(x: f64) -> Result<u64> {
    let m = check_x(x)?;
    Ok((1..=m).map(|k| m / k).sum())
}

fn divisor_main_term(x: f64) -> f64 {
    x * x.ln() + (2.0 * EULER_GAMMA - 1.0) * x
}

/// D(X) = Σ_{n≤X} d(n) - X log X - (2γ - 1)X.
pub fn d_divisor(x: f64) -> Result<f64> {
    Ok(divisor_summatory(x)? as f64 - divisor_main_term(x))
}

pub(crate) fn delta_from_count(count: u64, x: f64) -> f64 {
    (count as f64 - PI * x).abs()
}

pub(crate) fn d_from_count(count: u64, x: f64) -> f64 {
    count as f64 - divisor_main_term(x)
}

/// Maximizes Δ(X)/X^{1/4} over the jump points X ≤ X_max (integers with
/// r₂(X) > 0). Returns (X*, ratio*).
pub fn hardy_scan(x_max: f64) -> Result<(f64, f64)> {
    let m = check_x(x_max)?;
    if x_max < 1e3 {
        return Err(Error::Domain(format!("hardy_scan needs X_max >= 1000, got {x_max}")));
    }
    let table = r2_table(m as usize);
    let mut count = 0u64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for (n, &r) in table.iter().enumerate().skip(1) {
        if r == 0 {
            continue;
        }
        count += r as u64;
        let x = n as f64;
        let ratio = delta_from_count(count, x) / x.powf(0.25);
        if ratio > best.1 {
            best = (x, ratio);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divisor_table;

    #[test]
    fn circle_examples() {
        assert_eq!(circle_count(1.0).unwrap(), 4);
        assert_eq!(circle_count(2.0).unwrap(), 8);
        assert_eq!(circle_count(100.0).unwrap(), 316);
        assert!((delta_circle(1.0).unwrap() - 0.858_407_346_410_206_9).abs() < 1e-12);
        assert!((delta_circle(2.0).unwrap() - 1.716_814_692_820_413_8).abs() < 1e-12);
        assert!((delta_circle(100.0).unwrap() - 1.840_734_641_020_676_7).abs() < 1e-10);
        assert!(delta_circle(0.5).is_err());
        assert!(delta_circle(2e13).is_err());
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisor_summatory(10.0).unwrap(), 27);
        assert!((d_divisor(10.0).unwrap() - 2.429_835_772).abs() < 1e-9);
        assert!((d_divisor(1.0).unwrap() - 0.845_568_670_196_934).abs() < 1e-12);
        for x in 1..=10_000u64 {
            assert_eq!(divisor_summatory(x as f64).unwrap(), divisor_summatory_brute(x as f64).unwrap());
        }
    }

    #[test]
    fn sieve_counts_match_lattice_counts() {
        let r2 = r2_table(100_000);
        let mut acc = 0u64;
        for x in 1..=100_000usize {
            acc += r2[x] as u64;
            if x % 997 == 0 || x == 100_000 {
                assert_eq!(acc, circle_count(x as f64).unwrap());
            }
        }
        let d = divisor_table(2_000);
        let mut acc = 0u64;
        for x in 1..=2_000usize {
            acc += d[x] as u64;
            assert_eq!(acc, divisor_summatory(x as f64).unwrap());
        }
    }

    #[test]
    fn circle_count_matches_two_loop_count() {
        for m in [5i64, 50, 1000, 4321] {
            let r = (m as f64).sqrt() as i64 + 1;
            let mut direct = 0u64;
            for a in -r..=r {
                for b in -r..=r {
                    if a * a + b * b <= m && (a, b) != (0, 0) {
                        direct += 1;
                    }
                }
            }
            assert_eq!(circle_count(m as f64).unwrap(), direct);
        }
    }

    #[test]
    fn hardy_scan_witness_and_consistency() {
        let (x, ratio) = hardy_scan(1e3).unwrap();
        assert!(ratio >= 0.582);
        assert_eq!(delta_circle(x).unwrap() / x.powf(0.25), ratio);
        let (_, bigger) = hardy_scan(1e4).unwrap();
        assert!(bigger >= ratio);
        assert!(hardy_scan(10.0).is_err());
    }
}
