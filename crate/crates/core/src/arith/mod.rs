//! Integer sequences and coefficient tables.

mod cache;
mod kloosterman;
mod sieve;
pub(crate) mod sym2;
mod table;
mod tau;

pub use cache::TableCache;
pub use kloosterman::{kloosterman, KloostermanParams};
pub use sieve::{
    divisor_count, divisor_table, divisors, euler_phi, gcd, mobius, mobius_table, mod_inverse,
    r2, r2_table, R2Method,
};
pub use sym2::{
    sym2_a_rational, sym2_a_table, sym2_abelian_coeff, sym2_abelian_coeff_double_sum,
    sym2_abelian_table, sym2_euler_product_coefficients, NegativeIndexConvention,
};
pub use table::{CoefficientTable, TableKind, TableValues};
pub use tau::{normalized_gl2_coeffs, ramanujan_tau_table};

use crate::error::{Error, Result};

/// Additive twist data a/c with a·ā ≡ 1 (mod c), plus the GL(3) level q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistParams {
    pub a: i64,
    pub c: i64,
    pub a_bar: i64,
    pub q: u64,
}

impl TwistParams {
    /// Validates gcd(a, c) = 1 and computes ā in [0, |c|).
    pub fn new(a: i64, c: i64, q: u64) -> Result<Self> {
        if c == 0 {
            return Err(Error::Domain("twist modulus c must be nonzero".into()));
        }
        if q == 0 {
            return Err(Error::Domain("twist level q must be positive".into()));
        }
        let m = c.unsigned_abs() as i64;
        if gcd(a.unsigned_abs(), m as u64) != 1 {
            return Err(Error::Domain(format!("gcd({a}, {c}) != 1")));
        }
        let a_bar = if m == 1 { 0 } else { mod_inverse(a.rem_euclid(m), m).expect("coprime") };
        Ok(TwistParams { a, c, a_bar, q })
    }

    /// The same twist with a and ā reduced into [0, |c|).
    pub fn reduced(&self) -> Self {
        let m = self.c.abs();
        TwistParams { a: self.a.rem_euclid(m), a_bar: self.a_bar.rem_euclid(m), ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_inverse() {
        let t = TwistParams::new(3, 7, 1).unwrap();
        assert_eq!((t.a * t.a_bar).rem_euclid(7), 1);
        assert!(TwistParams::new(2, 4, 1).is_err());
        assert!(TwistParams::new(1, 0, 1).is_err());
        assert_eq!(TwistParams::new(0, 1, 1).unwrap().a_bar, 0);
        assert_eq!(TwistParams::new(-1, 2, 1).unwrap().reduced().a, 1);
    }
}
