use super::sieve::{gcd, mod_inverse};
use crate::numeric::Neumaier;
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, TWO_PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KloostermanParams {
    pub m: i64,
    pub n: i64,
    pub c: i64,
}

/// S(m, n; c) = Σ_{x ∈ (ℤ/cℤ)^*} e((m x + n x̄)/c).
///
/// Phases are reduced exactly in integers and folded into (-c/2, c/2], so
/// the sine terms of x and -x cancel to rounding; the imaginary part is
/// accumulated with compensation and must stay below 1e-12.
pub fn kloosterman(p: KloostermanParams) -> Result<f64> {
    if p.c == 0 {
        return Err(Error::Domain("Kloosterman modulus must be nonzero".into()));
    }
    let c = p.c.unsigned_abs() as i64;
    if c == 1 {
        return Ok(1.0);
    }
    let mut re = Vec::with_capacity(c as usize);
    let mut im = Neumaier::new();
    for x in 1..c {
        if gcd(x as u64, c as u64) != 1 {
            continue;
        }
        let xb = mod_inverse(x, c).expect("unit");
        let k = ((p.m as i128 * x as i128 + p.n as i128 * xb as i128).rem_euclid(c as i128)) as i64;
        let k = if 2 * k > c { k - c } else { k };
        let angle = TWO_PI * k as f64 / c as f64;
        re.push(angle.cos());
        im.add(angle.sin());
    }
    let imag = im.value();
    if imag.abs() >= 1e-12 {
        return Err(Error::Assertion(format!(
            "Kloosterman sum S({}, {}; {}) has imaginary part {imag:e}",
            p.m, p.n, p.c
        )));
    }
    Ok(pairwise_sum(&re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;

    fn k(m: i64, n: i64, c: i64) -> f64 {
        kloosterman(KloostermanParams { m, n, c }).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(k(1, 1, 1), 1.0);
        for c in [2i64, 7, 12, 30] {
            assert!((k(0, 0, c) - euler_phi(c as u64) as f64).abs() < 1e-12);
        }
        let expected = 2.0 + 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        assert!((k(1, 1, 5) - expected).abs() < 1e-14);
        // Ramanujan sum: S(0, 1; c) = μ(c)
        assert!((k(0, 1, 30) + 1.0).abs() < 1e-12);
        assert!((k(3, 5, -11) - k(3, 5, 11)).abs() < 1e-12);
    }
}
