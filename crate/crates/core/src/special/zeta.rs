use super::gamma::{ln_gamma, ln_sin_pi};
use crate::error::{Error, Result};
use crate::numeric::C64;
use std::f64::consts::PI;

// B_{2k} / (2k)! for k = 1..8
const EM: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// Hurwitz zeta ζ(s, a) for 0 < a ≤ 1 by Euler–Maclaurin with eight
/// Bernoulli corrections and cutoff N = |Im s| + 20.
pub fn hurwitz_zeta(s: C64, a: f64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole { function: "hurwitz_zeta", at: s.to_string() });
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("hurwitz_zeta requires 0 < a <= 1, got {a}")));
    }
    Ok(euler_maclaurin(s, a, s.im.abs().ceil() as usize + 20))
}

fn euler_maclaurin(s: C64, a: f64, n: usize) -> C64 {
    let big = n as f64 + a;
    euler_maclaurin_regular(s, a, n) + (-s * big.ln()).exp() * big / (s - 1.0)
}

/// Euler–Maclaurin sum without the N^{1-s}/(s-1) term.
fn euler_maclaurin_regular(s: C64, a: f64, n: usize) -> C64 {
    let mut head = C64::new(0.0, 0.0);
    // sum from the smallest terms upwards
    for k in (0..n).rev() {
        head += (-s * (k as f64 + a).ln()).exp();
    }
    let big = n as f64 + a;
    let ln_big = big.ln();
    let pow = (-s * ln_big).exp();
    let mut tail = pow * 0.5;
    let inv2 = 1.0 / (big * big);
    let mut t = s * pow / big;
    for (k, c) in EM.iter().enumerate() {
        tail += t * *c;
        let m = 2.0 * (k as f64 + 1.0);
        t = t * (s + (m - 1.0)) * (s + m) * inv2;
    }
    head + tail
}

/// Riemann zeta function. Euler–Maclaurin for Re s ≥ 0, functional
/// equation for Re s < 0.
pub fn zeta(s: C64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole { function: "zeta", at: s.to_string() });
    }
    if s.re >= 0.0 {
        return Ok(euler_maclaurin(s, 1.0, s.im.abs().ceil() as usize + 20));
    }
    if s.im == 0.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let one = C64::new(1.0, 0.0);
    let reflected = euler_maclaurin(one - s, 1.0, s.im.abs().ceil() as usize + 20);
    let log_factor = s * std::f64::consts::LN_2 + (s - 1.0) * PI.ln() + ln_sin_pi(s * 0.5) + ln_gamma(one - s);
    Ok(log_factor.exp() * reflected)
}

/// Direct Euler–Maclaurin value with a chosen cutoff, used to cross-check
/// the reflected branch.
#[cfg(test)]
pub(crate) fn zeta_em(s: C64, n: usize) -> C64 {
    euler_maclaurin(s, 1.0, n)
}

/// Completed zeta ξ(s) = π^{-s/2} Γ(s/2) ζ(s).
pub fn xi(s: C64) -> Result<C64> {
    if s == C64::new(0.0, 0.0) || s == C64::new(1.0, 0.0) {
        return Err(Error::Pole { function: "xi", at: s.to_string() });
    }
    let half = s * 0.5;
    if half.im == 0.0 && half.re <= 0.0 && half.re == half.re.round() {
        // Γ pole against a trivial zero of ζ
        return xi(C64::new(1.0, 0.0) - s);
    }
    Ok((ln_gamma(half) - half * PI.ln()).exp() * zeta(s)?)
}

/// L(s, χ₄) = 4^{-s} (ζ(s, 1/4) - ζ(s, 3/4)), entire.
///
/// The two Euler–Maclaurin tails contain N^{1-s}/(s-1); their difference
/// is combined before dividing so s = 1 needs no special case.
pub fn dirichlet_l_chi4(s: C64) -> C64 {
    let n = s.im.abs().ceil() as usize + 20;
    let scale = (-s * 4f64.ln()).exp();
    let (la, lb) = ((n as f64 + 0.25).ln(), (n as f64 + 0.75).ln());
    let z = 1.0 - s;
    // (e^{z la} - e^{z lb}) / (s - 1) = e^{z lb} (e^{z (la - lb)} - 1) / (-z)
    let d = la - lb;
    let zd = z * d;
    let ratio = if zd.norm() < 1e-3 {
        (1.0 + zd / 2.0 + zd * zd / 6.0 + zd * zd * zd / 24.0) * d
    } else {
        (zd.exp() - 1.0) / z
    };
    let pole_terms = -(z * lb).exp() * ratio;
    (euler_maclaurin_regular(s, 0.25, n) - euler_maclaurin_regular(s, 0.75, n) + pole_terms) * scale
}

/// L(s, χ₄) from the alternating series Σ (-1)^k (2k+1)^{-s}, accelerated
/// by the Cohen–Rodriguez Villegas–Zagier weights. An independent route to
/// [`dirichlet_l_chi4`] for moderate |Im s|.
pub fn l_chi4_alternating(s: C64, terms: usize) -> C64 {
    let n = terms as f64;
    let mut d = (3.0 + 8f64.sqrt()).powf(n);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..terms {
        c = b - c;
        let ak = (-s * ((2 * k + 1) as f64).ln()).exp();
        acc += ak * c;
        let kf = k as f64;
        b = (kf + n) * (kf - n) * b / ((kf + 0.5) * (kf + 1.0));
    }
    acc / d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert_relative_eq!(zeta(c(2.0, 0.0)).unwrap().re, PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(zeta(c(0.0, 0.0)).unwrap().re, -0.5, max_relative = 1e-14);
        assert_relative_eq!(zeta(c(-1.0, 0.0)).unwrap().re, -1.0 / 12.0, max_relative = 1e-13);
        assert!(zeta(c(1.0, 0.0)).is_err());
        // first nontrivial zero
        assert!(zeta(c(0.5, 14.134_725_141_734_693)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn reflected_branch_matches_direct_em() {
        for s in [c(-0.3, 2.0), c(-1.7, 0.4), c(-0.9, 11.0)] {
            let a = zeta(s).unwrap();
            let b = zeta_em(s, 30);
            assert!((a - b).norm() <= 1e-10 * a.norm(), "s = {s}");
        }
    }

    #[test]
    fn xi_functional_equation_and_reality() {
        let s = c(0.3, 4.0);
        let d = xi(s).unwrap() - xi(c(1.0, 0.0) - s).unwrap();
        assert!(d.norm() < 1e-12);
        assert_relative_eq!(xi(c(2.0, 0.0)).unwrap().re, xi(c(-1.0, 0.0)).unwrap().re, max_relative = 1e-12);
        assert!(xi(c(0.5, 0.0)).unwrap().im.abs() < 1e-15);
        for eps in [1e-3, -1e-3] {
            let s = c(1.0 + eps, 0.0);
            let v = s * (s - 1.0) * xi(s).unwrap();
            assert_relative_eq!(v.re, 1.0, max_relative = 2e-3);
        }
    }

    #[test]
    fn l_chi4_routes_agree() {
        assert_relative_eq!(dirichlet_l_chi4(c(1.0, 0.0)).re, PI / 4.0, max_relative = 1e-13);
        for s in [c(0.7, 0.0), c(2.0, 3.0), c(-1.5, 1.0), c(0.5, 8.0)] {
            let a = dirichlet_l_chi4(s);
            let b = l_chi4_alternating(s, 60);
            assert!((a - b).norm() <= 1e-10 * a.norm(), "s = {s}: {a} vs {b}");
        }
    }

    #[test]
    fn l_chi4_functional_equation() {
        // Λ(s) = (π/4)^{-(s+1)/2} Γ((s+1)/2) L(s, χ₄) = Λ(1 - s)
        let lam = |s: C64| {
            let h = (s + 1.0) * 0.5;
            (ln_gamma(h) - h * (PI / 4.0).ln()).exp() * dirichlet_l_chi4(s)
        };
        let s = c(0.7, 0.0);
        let r = (lam(s) - lam(c(1.0, 0.0) - s)).norm() / lam(s).norm();
        assert!(r < 1e-9, "{r}");
    }
}
