//! Voronoi integral transforms for GL(2) and GL(3) by Mellin–Barnes.
//!
//! For f supported on x > 0 the transform with parameters λ_j, δ_j is
//!
//!   F(t) = (1/2πi) ∫ Mf(s) |t|^s · ½[∏ K_{δ_j}(1-λ_j-s) + sgn(t) ∏ K_{1-δ_j}(1-λ_j-s)] ds
//!
//! along a contour passing to the left of every pole s = 1 - λ_j + m,
//! where K_δ is [`gamma_ratio_kernel`](super::gamma_ratio_kernel). The
//! contour used in practice is a vertical line in [-1/2, 1/2]; poles left of
//! it are compensated by residues taken on small circles.

use super::kernel::gamma_ratio_kernel_unchecked;
use super::test_fn::{Family, TestFunction};
use super::transform::{ContourSpec, PoleOffset};
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, C64, TWO_PI};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum SpectralParams {
    /// ν and parity η. The parity only relates a_{-n} to a_n; the transform
    /// itself carries no sign characters.
    Gl2 { nu: C64, eta: u8, holomorphic: bool },
    Gl3 { lambda: [C64; 3], delta: [u8; 3] },
}

impl SpectralParams {
    pub fn gl2(nu: C64, eta: u8) -> Result<Self> {
        if eta > 1 || !nu.re.is_finite() || !nu.im.is_finite() {
            return Err(Error::Domain(format!("invalid GL(2) parameters ν = {nu}, η = {eta}")));
        }
        Ok(SpectralParams::Gl2 { nu, eta, holomorphic: false })
    }

    /// Holomorphic form of even weight k: ν = (1 - k)/2.
    pub fn gl2_holomorphic(weight: u32) -> Result<Self> {
        if weight == 0 || weight % 2 == 1 {
            return Err(Error::Domain(format!("weight must be even and positive, got {weight}")));
        }
        Ok(SpectralParams::Gl2 { nu: C64::new((1.0 - weight as f64) / 2.0, 0.0), eta: 0, holomorphic: true })
    }

    pub fn gl3(lambda: [C64; 3], delta: [u8; 3]) -> Result<Self> {
        let sum: f64 = lambda.iter().map(|l| l.re).sum();
        if sum.abs() > 1e-12 {
            return Err(Error::Domain(format!("GL(3) parameters need Σ Re λ = 0, got {sum}")));
        }
        if delta.iter().any(|&d| d > 1) {
            return Err(Error::Domain(format!("δ entries must be 0 or 1, got {delta:?}")));
        }
        Ok(SpectralParams::Gl3 { lambda, delta })
    }

    /// Symmetric-square lift of a holomorphic form of weight k:
    /// λ = (1-k, k-1, 0), δ = (1, 0, 1).
    pub fn sym2_of_weight(weight: u32) -> Result<Self> {
        if weight == 0 || weight % 2 == 1 {
            return Err(Error::Domain(format!("weight must be even and positive, got {weight}")));
        }
        let k = weight as f64 - 1.0;
        Self::gl3([C64::new(-k, 0.0), C64::new(k, 0.0), C64::new(0.0, 0.0)], [1, 0, 1])
    }

    /// Exponents λ_j and sign characters δ_j of the integral representation.
    pub fn exponents(&self) -> (Vec<C64>, Vec<u8>) {
        match *self {
            SpectralParams::Gl2 { nu, .. } => (vec![-nu, nu], vec![0, 0]),
            SpectralParams::Gl3 { lambda, delta } => (lambda.to_vec(), delta.to_vec()),
        }
    }
}

/// A point s = 1 - λ_family + shift where some Γ-ratio factor may be singular.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CandidatePole {
    pub location: C64,
    pub family: usize,
    pub shift: u32,
    /// Pole order of the sign-even and sign-odd products (negative for zeros).
    pub order_even: i32,
    pub order_odd: i32,
    /// True when the pole lies left of the line and a residue is subtracted.
    pub compensated: bool,
}

const SIGMA_MIN_DISTANCE: f64 = 0.05;
const BLOCK_HEIGHT: f64 = 2.0;
const HEIGHT_CAP: f64 = 150.0;
const RESIDUE_NODES: usize = 64;

/// Precomputed contour data for one (f, parameters) pair.
#[derive(Clone, Debug)]
pub struct VoronoiTransform {
    contour: ContourSpec,
    nodes: Vec<C64>,
    w_even: Vec<C64>,
    w_odd: Vec<C64>,
    residue_nodes: Vec<C64>,
    r_even: Vec<C64>,
    r_odd: Vec<C64>,
    poles: Vec<CandidatePole>,
    tail_estimate: f64,
}

impl VoronoiTransform {
    /// Picks the line automatically: among abscissae in [-1/2, 1/2] at least
    /// min(0.3, best possible) away from every candidate pole, the one
    /// closest to 1/2.
    pub fn new(f: &TestFunction, params: &SpectralParams) -> Result<Self> {
        let (lambda, _) = params.exponents();
        let cands = candidate_locations(&lambda);
        let grid: Vec<f64> = (0..=100).map(|k| -0.5 + 0.01 * k as f64).collect();
        let dist = |sigma: f64| cands.iter().map(|c| (c.0.re - sigma).abs()).fold(f64::INFINITY, f64::min);
        let best = grid.iter().map(|&s| dist(s)).fold(0.0, f64::max);
        let target = best.min(0.3) - 1e-12;
        let sigma = grid
            .iter()
            .copied()
            .filter(|&s| dist(s) >= target)
            .min_by(|a, b| (0.5 - a).abs().total_cmp(&(0.5 - b).abs()))
            .expect("grid is nonempty");
        Self::with_sigma(f, params, sigma)
    }

    pub fn with_sigma(f: &TestFunction, params: &SpectralParams, sigma: f64) -> Result<Self> {
        if !matches!(f.family(), Family::ExpInverse { .. }) {
            return Err(Error::Domain(
                "Voronoi transforms need a test function supported on x > 0 and flat at the origin (ExpInverse)".into(),
            ));
        }
        let (lambda, delta) = params.exponents();
        let cands = candidate_locations(&lambda);
        let dist = cands.iter().map(|c| (c.0.re - sigma).abs()).fold(f64::INFINITY, f64::min);
        if dist < SIGMA_MIN_DISTANCE {
            return Err(Error::Pole {
                function: "Voronoi contour",
                at: format!("line Re s = {sigma} passes within {dist:.3} of a Γ-factor pole"),
            });
        }
        let odd: Vec<u8> = delta.iter().map(|d| 1 - d).collect();
        let half_products = |s: C64| -> (C64, C64) {
            let mut a = C64::new(0.5, 0.0);
            let mut b = C64::new(0.5, 0.0);
            for (j, l) in lambda.iter().enumerate() {
                let w = 1.0 - l - s;
                a *= gamma_ratio_kernel_unchecked(w, delta[j]);
                b *= gamma_ratio_kernel_unchecked(w, odd[j]);
            }
            (a, b)
        };

        // Line nodes s_k = σ + i k h, marched outward block by block.
        let h = (TWO_PI * dist / 40.0).min(0.05);
        let per_block = (BLOCK_HEIGHT / h).ceil() as i64;
        let eval_node = |k: i64| -> Result<(C64, C64, C64)> {
            let s = C64::new(sigma, k as f64 * h);
            let m = f.mellin_closed_form(s)?;
            let (a, b) = half_products(s);
            Ok((s, m * a * (h / TWO_PI), m * b * (h / TWO_PI)))
        };
        let mut entries: Vec<(C64, C64, C64)> = vec![eval_node(0)?];
        let mut global = entries[0].1.norm() + entries[0].2.norm();
        let mut last_block;
        let mut reached = 0i64;
        loop {
            let ks: Vec<i64> = (reached + 1..=reached + per_block).flat_map(|k| [k, -k]).collect();
            let block: Vec<(C64, C64, C64)> = ks.par_iter().map(|&k| eval_node(k)).collect::<Result<_>>()?;
            last_block = block.iter().map(|e| e.1.norm() + e.2.norm()).fold(0.0, f64::max);
            let block_sum: f64 = block.iter().map(|e| e.1.norm() + e.2.norm()).sum();
            global = global.max(last_block);
            entries.extend(block);
            reached += per_block;
            if last_block <= 1e-17 * global {
                let tail_estimate = block_sum;
                return Self::finish(f, &lambda, &delta, &odd, sigma, h, reached, entries, tail_estimate, cands, &half_products);
            }
            if reached as f64 * h > HEIGHT_CAP {
                if last_block < 1e-12 * global {
                    let tail_estimate = block_sum;
                    return Self::finish(f, &lambda, &delta, &odd, sigma, h, reached, entries, tail_estimate, cands, &half_products);
                }
                return Err(Error::Truncation(format!(
                    "Mellin–Barnes integrand still at {:e} of its maximum at height {HEIGHT_CAP}",
                    last_block / global
                )));
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        f: &TestFunction,
        lambda: &[C64],
        delta: &[u8],
        odd: &[u8],
        sigma: f64,
        h: f64,
        reached: i64,
        mut entries: Vec<(C64, C64, C64)>,
        tail_estimate: f64,
        cands: Vec<(C64, usize, u32)>,
        half_products: &(dyn Fn(C64) -> (C64, C64) + Sync),
    ) -> Result<Self> {
        entries.sort_by(|a, b| a.0.im.total_cmp(&b.0.im));
        let mut poles = Vec::new();
        let mut residue_nodes = Vec::new();
        let mut r_even = Vec::new();
        let mut r_odd = Vec::new();
        let mut offsets = Vec::new();
        for (i, &(p, family, shift)) in cands.iter().enumerate() {
            let order_even = pole_order(lambda, delta, p);
            let order_odd = pole_order(lambda, odd, p);
            let compensated = p.re < sigma && (order_even > 0 || order_odd > 0);
            poles.push(CandidatePole { location: p, family, shift, order_even, order_odd, compensated });
            if !compensated {
                continue;
            }
            offsets.push(PoleOffset { family, shift });
            let mut radius = 0.25f64.min(0.5 * (sigma - p.re));
            for (k, q) in cands.iter().enumerate() {
                if k != i {
                    radius = radius.min(0.5 * (q.0 - p).norm());
                }
            }
            let circle: Vec<(C64, C64, C64)> = (0..RESIDUE_NODES)
                .into_par_iter()
                .map(|k| {
                    let e = C64::from_polar(1.0, TWO_PI * (k as f64 + 0.5) / RESIDUE_NODES as f64);
                    let z = p + e * radius;
                    let m = f.mellin_closed_form(z)?;
                    let (a, b) = half_products(z);
                    let w = e * (radius / RESIDUE_NODES as f64) * m;
                    Ok((z, w * a, w * b))
                })
                .collect::<Result<_>>()?;
            for (z, a, b) in circle {
                residue_nodes.push(z);
                r_even.push(a);
                r_odd.push(b);
            }
        }
        let mut contour = ContourSpec::new(sigma, reached as f64 * h, entries.len())?;
        contour.tail_tol = tail_estimate.max(1e-300);
        contour.pole_separation_offsets = offsets;
        Ok(VoronoiTransform {
            contour,
            nodes: entries.iter().map(|e| e.0).collect(),
            w_even: entries.iter().map(|e| e.1).collect(),
            w_odd: entries.iter().map(|e| e.2).collect(),
            residue_nodes,
            r_even,
            r_odd,
            poles,
            tail_estimate,
        })
    }

    pub fn contour(&self) -> &ContourSpec {
        &self.contour
    }

    pub fn candidate_poles(&self) -> &[CandidatePole] {
        &self.poles
    }

    /// Sum of the integrand magnitudes over the outermost block of nodes,
    /// scaled by the step (an estimate of the truncated remainder).
    pub fn tail_estimate(&self) -> f64 {
        self.tail_estimate
    }

    pub fn eval(&self, t: f64) -> Result<C64> {
        if t == 0.0 || !t.is_finite() {
            return Err(Error::Domain(format!("Voronoi transform evaluated at t = {t}")));
        }
        let lt = t.abs().ln();
        let sgn = t.signum();
        let line: Vec<C64> = self
            .nodes
            .iter()
            .zip(self.w_even.iter().zip(&self.w_odd))
            .map(|(s, (a, b))| (s * lt).exp() * (a + b * sgn))
            .collect();
        let res: Vec<C64> = self
            .residue_nodes
            .iter()
            .zip(self.r_even.iter().zip(&self.r_odd))
            .map(|(z, (a, b))| (z * lt).exp() * (a + b * sgn))
            .collect();
        Ok(pairwise_sum(&line) - pairwise_sum(&res))
    }
}

/// Distinct candidate poles with real part below 2, each tagged with the
/// first (family, shift) producing it.
fn candidate_locations(lambda: &[C64]) -> Vec<(C64, usize, u32)> {
    let mut out: Vec<(C64, usize, u32)> = Vec::new();
    for (j, l) in lambda.iter().enumerate() {
        let base = 1.0 - l;
        let mut m = 0u32;
        while base.re + (m as f64) < 2.0 {
            let p = base + m as f64;
            if !out.iter().any(|q| (q.0 - p).norm() < 1e-9) {
                out.push((p, j, m));
            }
            m += 1;
        }
    }
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    out
}

/// Poles minus zeros of ∏_j K_{parity_j}(1 - λ_j - s) at s = p.
fn pole_order(lambda: &[C64], parity: &[u8], p: C64) -> i32 {
    let mut order = 0;
    for (l, &d) in lambda.iter().zip(parity) {
        let w = 1.0 - l - p;
        let r = w.re.round();
        if (w.re - r).abs() > 1e-9 || w.im.abs() > 1e-9 {
            continue;
        }
        let n = r as i64;
        let even = n.rem_euclid(2) == 0;
        match d {
            0 if n <= 0 && even => order += 1,
            0 if n >= 1 && !even => order -= 1,
            1 if n <= -1 && !even => order += 1,
            1 if n >= 2 && even => order -= 1,
            _ => {}
        }
    }
    order
}

/// GL(2) transform at t, which is real for real ν.
pub fn gl2_transform(f: &TestFunction, params: &SpectralParams, t: f64) -> Result<f64> {
    if !matches!(params, SpectralParams::Gl2 { .. }) {
        return Err(Error::Domain("gl2_transform needs GL(2) parameters".into()));
    }
    real_part_checked(VoronoiTransform::new(f, params)?.eval(t)?)
}

pub(crate) fn real_part_checked(v: C64) -> Result<f64> {
    if v.im.abs() > 1e-9 * v.re.abs().max(1.0) {
        return Err(Error::Assertion(format!("transform value {v} is not real")));
    }
    Ok(v.re)
}

/// GL(3) transform at t. Complex in general: for sign characters with
/// odd total parity F(-t) is the conjugate of F(t) rather than real.
pub fn gl3_transform(f: &TestFunction, params: &SpectralParams, t: f64) -> Result<C64> {
    if !matches!(params, SpectralParams::Gl3 { .. }) {
        return Err(Error::Domain("gl3_transform needs GL(3) parameters".into()));
    }
    VoronoiTransform::new(f, params)?.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_gl2() -> SpectralParams {
        SpectralParams::gl2(C64::new(0.3, 0.0), 0).unwrap()
    }

    fn synthetic_gl3() -> SpectralParams {
        SpectralParams::gl3([C64::new(0.4, 0.0), C64::new(0.1, 0.0), C64::new(-0.5, 0.0)], [0, 0, 0]).unwrap()
    }

    fn f() -> TestFunction {
        TestFunction::exp_inverse(1.0, 1.0).unwrap()
    }

    #[test]
    fn automatic_abscissa() {
        let cases = [
            (SpectralParams::gl2_holomorphic(12).unwrap(), 0.2),
            (SpectralParams::sym2_of_weight(12).unwrap(), 0.5),
            (synthetic_gl2(), 0.4),
            (synthetic_gl3(), 0.3),
        ];
        for (p, sigma) in cases {
            let v = VoronoiTransform::new(&f(), &p).unwrap();
            assert!((v.contour().sigma - sigma).abs() < 1e-9, "{p:?}: {}", v.contour().sigma);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(SpectralParams::gl3([C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)], [0, 0, 0]).is_err());
        assert!(SpectralParams::gl2_holomorphic(11).is_err());
        assert!(VoronoiTransform::with_sigma(&f(), &synthetic_gl2(), 0.68).is_err());
        let g = TestFunction::gaussian_hermite(0, 1.0).unwrap();
        assert!(VoronoiTransform::new(&g, &synthetic_gl2()).is_err());
        assert!(gl2_transform(&f(), &synthetic_gl2(), 0.0).is_err());
    }

    #[test]
    fn pole_bookkeeping_for_delta() {
        // For Δ every candidate pole of one factor is cancelled by a zero of
        // the other.
        let p = SpectralParams::gl2_holomorphic(12).unwrap();
        let v = VoronoiTransform::new(&f(), &p).unwrap();
        assert!(v.candidate_poles().iter().all(|c| !c.compensated));
        let q = synthetic_gl2();
        let w = VoronoiTransform::with_sigma(&f(), &q, 0.9).unwrap();
        let moved: Vec<_> = w.candidate_poles().iter().filter(|c| c.compensated).collect();
        assert_eq!(moved.len(), 1);
        assert!((moved[0].location.re - 0.7).abs() < 1e-12);
    }

    #[test]
    fn abscissa_independence() {
        for p in [synthetic_gl2(), synthetic_gl3(), SpectralParams::gl2_holomorphic(12).unwrap(), SpectralParams::sym2_of_weight(12).unwrap()] {
            let base = VoronoiTransform::new(&f(), &p).unwrap();
            let sigma = base.contour().sigma;
            for shift in [-0.2, 0.2] {
                let other = VoronoiTransform::with_sigma(&f(), &p, sigma + shift).unwrap();
                for t in [0.5, 1.0, -2.0, 7.0] {
                    let a = base.eval(t).unwrap();
                    let b = other.eval(t).unwrap();
                    assert!((a - b).norm() < 1e-8, "{p:?} σ={sigma}±{shift} t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn residues_across_a_pole() {
        // Moving the line past s = 0.7 and compensating the residue must not
        // change the result.
        let p = synthetic_gl2();
        let a = VoronoiTransform::with_sigma(&f(), &p, 0.4).unwrap();
        let b = VoronoiTransform::with_sigma(&f(), &p, 1.0).unwrap();
        for t in [0.3, 1.0, 3.0, -1.5] {
            assert!((a.eval(t).unwrap() - b.eval(t).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn linearity_and_scaling() {
        let p = SpectralParams::sym2_of_weight(12).unwrap();
        let g = f().scaled(-2.5);
        let a = gl3_transform(&f(), &p, 1.3).unwrap();
        let b = gl3_transform(&g, &p, 1.3).unwrap();
        assert!((b - a * -2.5).norm() <= 1e-13 * a.norm());
        // f(cx) = ExpInverse(cA, B/c) has transform F(t/c).
        let c = 1.7;
        let fc = TestFunction::exp_inverse(c, 1.0 / c).unwrap();
        for t in [0.8, 2.0, -3.0] {
            let lhs = gl3_transform(&fc, &p, t).unwrap();
            let rhs = gl3_transform(&f(), &p, t / c).unwrap();
            assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn sym2_conjugate_symmetry_and_gl2_reality() {
        let p = SpectralParams::sym2_of_weight(12).unwrap();
        let v = VoronoiTransform::new(&f(), &p).unwrap();
        for t in [0.4, 2.5] {
            let a = v.eval(t).unwrap();
            let b = v.eval(-t).unwrap();
            assert!((a - b.conj()).norm() < 1e-10 * a.norm().max(1.0));
        }
        let d = SpectralParams::gl2_holomorphic(12).unwrap();
        for t in [0.2, 1.0, 5.0] {
            gl2_transform(&f(), &d, t).unwrap();
        }
    }

    #[test]
    fn rapid_decay() {
        let d = SpectralParams::gl2_holomorphic(12).unwrap();
        let s = SpectralParams::sym2_of_weight(12).unwrap();
        let vd = VoronoiTransform::new(&f(), &d).unwrap();
        let vs = VoronoiTransform::new(&f(), &s).unwrap();
        let mut bd: f64 = 0.0;
        let mut bs: f64 = 0.0;
        for k in 0..=30 {
            let t = 10.0 * 10f64.powf(k as f64 / 30.0);
            bd = bd.max(vd.eval(t).unwrap().norm() * t.powi(4));
            bs = bs.max(vs.eval(t).unwrap().norm() * t.powi(4));
        }
        // observed suprema 1.7998 (Δ) and 42.518 (Sym²Δ) for ExpInverse(1, 1)
        assert!(bd < 1.85 && bs < 43.5, "t^4 |F| reached {bd}, {bs}");
        let end = vs.eval(100.0).unwrap().norm() * 1e8;
        assert!(end < 0.6 * bs);
    }
}
