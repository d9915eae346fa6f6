//! Coefficients of the symmetric-square lift of a GL(2) eigenform.

use super::sieve::{gcd, mobius_table};
use super::table::{CoefficientTable, TableKind, TableValues};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// How a_{m,n} extends to negative indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegativeIndexConvention {
    /// a_{m,n} depends only on (|m|, |n|).
    Even,
    /// a_{m,n} = sgn(m)·sgn(n)·a_{|m|,|n|}.
    Odd,
}

impl NegativeIndexConvention {
    pub fn sign(self, m: i64, n: i64) -> f64 {
        match self {
            NegativeIndexConvention::Even => 1.0,
            NegativeIndexConvention::Odd => (m.signum() * n.signum()) as f64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NegativeIndexConvention::Even => "even",
            NegativeIndexConvention::Odd => "odd",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "even" => Some(NegativeIndexConvention::Even),
            "odd" => Some(NegativeIndexConvention::Odd),
            _ => None,
        }
    }
}

/// A_n = Σ_{d² | n} a_{(n/d²)²} for n ≤ N.
pub fn sym2_a_table(a: &CoefficientTable, n: usize) -> Result<CoefficientTable> {
    a.require_kind(TableKind::NormalizedGl2)?;
    let need = n.checked_mul(n).ok_or_else(|| Error::Overflow("N² for A table".into()))?;
    if a.max_index() < need {
        return Err(Error::Table(format!(
            "A_n for n <= {n} needs normalized coefficients up to {need}, table has N = {}",
            a.max_index()
        )));
    }
    let values = (1..=n)
        .map(|m| {
            let mut acc = 0.0;
            let mut d = 1;
            while d * d <= m {
                if m % (d * d) == 0 {
                    let k = m / (d * d);
                    acc += a.get(k * k).expect("checked length");
                }
                d += 1;
            }
            acc
        })
        .collect();
    CoefficientTable::from_reals(TableKind::SymSquareA, values)
}

/// a_{m,n} = Σ_{d | (m,n)} μ(d) A_{n/d} A_{m/d}.
///
/// `a` must be the normalized GL(2) table the A table was built from; it is
/// only consulted for consistency of lengths.
pub fn sym2_abelian_coeff(m: usize, n: usize, big_a: &CoefficientTable, a: &CoefficientTable) -> Result<f64> {
    big_a.require_kind(TableKind::SymSquareA)?;
    a.require_kind(TableKind::NormalizedGl2)?;
    if a.max_index() < big_a.max_index().saturating_mul(big_a.max_index()) {
        return Err(Error::Table("A table is longer than its source table supports".into()));
    }
    abelian_from_a(m, n, big_a)
}

pub(crate) fn abelian_from_a(m: usize, n: usize, big_a: &CoefficientTable) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::Domain("a_{m,n} needs positive indices".into()));
    }
    let g = gcd(m as u64, n as u64) as usize;
    let mu = mobius_table(g);
    let mut acc = 0.0;
    for d in 1..=g {
        if g % d != 0 || mu[d] == 0 {
            continue;
        }
        acc += mu[d] as f64 * big_a.at(n / d)? * big_a.at(m / d)?;
    }
    Ok(acc)
}

/// a_{m,n} from the double-sum description
/// Σ_{d|(m,n)} μ(d) Σ { a_r a_s : r = m²/(k⁴d²), s = n²/(l⁴d²) }.
pub fn sym2_abelian_coeff_double_sum(m: usize, n: usize, a: &CoefficientTable) -> Result<f64> {
    a.require_kind(TableKind::NormalizedGl2)?;
    if m == 0 || n == 0 {
        return Err(Error::Domain("a_{m,n} needs positive indices".into()));
    }
    let g = gcd(m as u64, n as u64) as usize;
    let mu = mobius_table(g);
    let quotients = |x: usize, d: usize| -> Vec<usize> {
        let sq = (x as u128) * (x as u128);
        let mut out = Vec::new();
        let mut k: u128 = 1;
        while k.pow(4) * (d as u128).pow(2) <= sq {
            let den = k.pow(4) * (d as u128).pow(2);
            if sq % den == 0 {
                out.push((sq / den) as usize);
            }
            k += 1;
        }
        out
    };
    let mut acc = 0.0;
    for d in 1..=g {
        if g % d != 0 || mu[d] == 0 {
            continue;
        }
        let mut inner = 0.0;
        for r in quotients(m, d) {
            for s in quotients(n, d) {
                inner += a.at(r)? * a.at(s)?;
            }
        }
        acc += mu[d] as f64 * inner;
    }
    Ok(acc)
}

/// Symmetric table of a_{m,n} for 1 ≤ m, n ≤ N.
pub fn sym2_abelian_table(big_a: &CoefficientTable, n: usize) -> Result<CoefficientTable> {
    big_a.require_kind(TableKind::SymSquareA)?;
    let mut v = vec![0.0; n * n];
    for m in 1..=n {
        for k in m..=n {
            let x = abelian_from_a(m, k, big_a)?;
            v[(m - 1) * n + (k - 1)] = x;
            v[(k - 1) * n + (m - 1)] = x;
        }
    }
    CoefficientTable::new(TableKind::SymSquareAbelian, TableValues::Pair(v))
}

fn tau_big(tau: &CoefficientTable, n: usize) -> Result<BigInt> {
    tau.int(n).map(BigInt::from).ok_or_else(|| {
        Error::Table(format!("tau({n}) needed but table has N = {}", tau.max_index()))
    })
}

/// Exact a_{k²} = τ(k²)/k¹¹ for a weight-12 form.
fn a_square_rational(tau: &CoefficientTable, k: usize) -> Result<BigRational> {
    let den = BigInt::from(k).pow(11);
    Ok(BigRational::new(tau_big(tau, k * k)?, den))
}

/// Exact A_n = Σ_{d²|n} τ(k²)/k¹¹ with k = n/d², for the weight-12 form.
pub fn sym2_a_rational(tau: &CoefficientTable, n: usize) -> Result<BigRational> {
    tau.require_kind(TableKind::RamanujanTau)?;
    let mut acc = BigRational::zero();
    let mut d = 1;
    while d * d <= n {
        if n % (d * d) == 0 {
            acc += a_square_rational(tau, n / (d * d))?;
        }
        d += 1;
    }
    Ok(acc)
}

/// Dirichlet coefficients 1..=N of ∏_p [(1 - α²X)(1 - X)(1 - α⁻²X)]⁻¹,
/// X = p^{-s}, expanded exactly. With e = α² + 1 + α⁻² = τ(p)²/p¹¹ - 1 the
/// local coefficients obey c_k = e c_{k-1} - e c_{k-2} + c_{k-3}.
pub fn sym2_euler_product_coefficients(tau: &CoefficientTable, n: usize) -> Result<Vec<BigRational>> {
    tau.require_kind(TableKind::RamanujanTau)?;
    let mut coeffs = vec![BigRational::one(); n + 1];
    coeffs[0] = BigRational::zero();
    let mut composite = vec![false; n + 1];
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        for m in (2 * p..=n).step_by(p) {
            composite[m] = true;
        }
        let tp = tau_big(tau, p)?;
        let e = BigRational::new(&tp * &tp, BigInt::from(p).pow(11)) - BigRational::one();
        // local coefficients c_0 .. c_K with p^K ≤ n
        let mut local = vec![BigRational::one()];
        let mut pk = p;
        while pk <= n {
            let k = local.len();
            let at = |i: isize| -> BigRational {
                if i < 0 { BigRational::zero() } else { local[i as usize].clone() }
            };
            let k = k as isize;
            let next = &e * at(k - 1) - &e * at(k - 2) + at(k - 3);
            local.push(next);
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
        for m in (p..=n).step_by(p) {
            let mut e_p = 0;
            let mut r = m;
            while r % p == 0 {
                r /= p;
                e_p += 1;
            }
            coeffs[m] = &coeffs[m] * &local[e_p];
        }
    }
    Ok(coeffs)
}
