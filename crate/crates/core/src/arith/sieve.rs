use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of x modulo m by the extended Euclidean algorithm.
pub fn mod_inverse(x: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (x.rem_euclid(m) as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as i64)
}

/// Number of positive divisors, by trial division.
pub fn divisor_count(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("divisor_count(0) is undefined".into()));
    }
    let mut count = 1;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if m > 1 {
        count *= 2;
    }
    Ok(count)
}

/// All positive divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// d(n) for 0 ≤ n ≤ max by the divisor sieve; entry 0 is 0.
pub fn divisor_table(max: usize) -> Vec<u32> {
    let mut t = vec![0u32; max + 1];
    for d in 1..=max {
        for m in (d..=max).step_by(d) {
            t[m] += 1;
        }
    }
    t
}

pub fn mobius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Domain("mobius(0) is undefined".into()));
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// μ(n) for 0 ≤ n ≤ max (entry 0 unused).
pub fn mobius_table(max: usize) -> Vec<i8> {
    let mut mu = vec![1i8; max + 1];
    let mut composite = vec![false; max + 1];
    if max >= 1 {
        mu[0] = 0;
    }
    for p in 2..=max {
        if composite[p] {
            continue;
        }
        for m in (p..=max).step_by(p) {
            if m > p {
                composite[m] = true;
            }
            mu[m] = -mu[m];
        }
        if let Some(sq) = p.checked_mul(p) {
            for m in (sq..=max).step_by(sq) {
                mu[m] = 0;
            }
        }
    }
    mu
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum R2Method {
    /// Enumerate lattice points on the circle.
    Lattice,
    /// 4 (#{d | n : d ≡ 1 mod 4} - #{d | n : d ≡ 3 mod 4}).
    Character,
}

/// Number of representations of n as x² + y² with x, y ∈ ℤ.
pub fn r2(n: u64, method: R2Method) -> Result<u64> {
    match method {
        R2Method::Lattice => {
            if n == 0 {
                return Ok(1);
            }
            let mut count = 0;
            let mut x = 0u64;
            while x * x <= n {
                let rest = n - x * x;
                let y = rest.isqrt();
                if y * y == rest {
                    // points (±x, ±y) counted once per distinct sign choice
                    count += match (x == 0, y == 0) {
                        (true, true) => 1,
                        (true, false) | (false, true) => 2,
                        (false, false) => 4,
                    };
                }
                x += 1;
            }
            Ok(count)
        }
        R2Method::Character => {
            if n == 0 {
                return Err(Error::Domain("character formula for r2 requires n >= 1".into()));
            }
            let mut diff = 0i64;
            for d in divisors(n) {
                match d % 4 {
                    1 => diff += 1,
                    3 => diff -= 1,
                    _ => {}
                }
            }
            Ok((4 * diff) as u64)
        }
    }
}

/// r₂(n) for 0 ≤ n ≤ max by enumerating the lattice points of the disc.
pub fn r2_table(max: usize) -> Vec<u16> {
    let mut t = vec![0u16; max + 1];
    let rmax = (max as u64).isqrt();
    for x in 0..=rmax {
        let x2 = x * x;
        for y in 0..=rmax {
            let n = x2 + y * y;
            if n as usize > max {
                break;
            }
            let mult = match (x == 0, y == 0) {
                (true, true) => 1,
                (true, false) | (false, true) => 2,
                (false, false) => 4,
            };
            t[n as usize] += mult;
        }
    }
    t
}
