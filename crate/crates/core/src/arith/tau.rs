use super::table::{CoefficientTable, TableKind};
use crate::error::{Error, Result};
use crate::mellin::SpectralParams;
use rayon::prelude::*;

/// Ramanujan τ(n) for n ≤ N, the coefficients of q·∏(1 - q^m)²⁴.
///
/// ∏(1 - q^m)³ = Σ_{k≥0} (-1)^k (2k+1) q^{k(k+1)/2} has only O(√N) nonzero
/// terms below q^N, so the 24th power is built as eight factors of that
/// sparse series: seven dense-by-sparse products with checked i128
/// arithmetic, parallel over output coefficients.
pub fn ramanujan_tau_table(n: usize) -> Result<CoefficientTable> {
    if n == 0 {
        return Err(Error::Domain("tau table needs N >= 1".into()));
    }
    let len = n; // coefficients of q^0 .. q^{N-1}
    let mut sparse: Vec<(usize, i128)> = Vec::new();
    for k in 0usize.. {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * k + 1) as i128;
        sparse.push((e, if k % 2 == 0 { c } else { -c }));
    }
    let mut dense = vec![0i128; len];
    for &(e, c) in &sparse {
        dense[e] = c;
    }
    for _ in 0..7 {
        dense = mul_dense_sparse(&dense, &sparse)?;
    }
    CoefficientTable::from_integers(TableKind::RamanujanTau, dense)
}

fn mul_dense_sparse(dense: &[i128], sparse: &[(usize, i128)]) -> Result<Vec<i128>> {
    let out: Vec<Option<i128>> = (0..dense.len())
        .into_par_iter()
        .map(|i| {
            let mut acc: i128 = 0;
            for &(e, c) in sparse {
                if e > i {
                    break;
                }
                acc = acc.checked_add(c.checked_mul(dense[i - e])?)?;
            }
            Some(acc)
        })
        .collect();
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Overflow(format!("tau power series coefficient {i}"))))
        .collect()
}

/// aₙ = τ(n)·n^{-(k-1)/2} for a weight-k table, together with the GL(2)
/// spectral data ν = (1-k)/2 of the holomorphic form.
pub fn normalized_gl2_coeffs(tau: &CoefficientTable, weight: u32) -> Result<(CoefficientTable, SpectralParams)> {
    tau.require_kind(TableKind::RamanujanTau)?;
    if weight == 0 || weight % 2 != 0 {
        return Err(Error::Domain(format!("weight must be even and positive, got {weight}")));
    }
    let exponent = (weight as f64 - 1.0) / 2.0;
    let lead = tau.int(1).unwrap_or(0);
    if lead == 0 {
        return Err(Error::Table("tau table has vanishing first coefficient".into()));
    }
    let values: Vec<f64> = (1..=tau.max_index())
        .map(|n| {
            let t = tau.int(n).expect("in range") as f64 / lead as f64;
            t / (n as f64).powf(exponent)
        })
        .collect();
    let table = CoefficientTable::from_reals(TableKind::NormalizedGl2, values)?;
    Ok((table, SpectralParams::gl2_holomorphic(weight)?))
}
