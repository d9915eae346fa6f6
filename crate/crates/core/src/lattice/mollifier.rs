use crate::error::{Error, Result};
use crate::numeric::quad::gl16;
use crate::numeric::{pairwise_sum, TWO_PI};
use crate::special::bessel_j0;
use std::sync::OnceLock;

const GRID_STEP: f64 = 1.0 / 256.0;
const GRID_MAX: f64 = 80.0;
const RADIAL_PANELS: usize = 96;

/// The radial bump Φ(ρ) = C exp(-1/(1 - ρ²)) on the unit disc, normalized
/// to total integral 1, and its radial Fourier profile ψ tabulated on a
/// uniform grid.
#[derive(Debug)]
pub struct Mollifier {
    norm: f64,
    grid: Vec<f64>,
    /// suffix[k] = max_{j ≥ k} |ψ(j h)|.
    suffix: Vec<f64>,
}

fn bump(rho: f64) -> f64 {
    if rho >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - rho * rho)).exp()
    }
}

impl Mollifier {
    fn build() -> Result<Self> {
        let rule = gl16();
        let width = 1.0 / RADIAL_PANELS as f64;
        let mut nodes = Vec::with_capacity(RADIAL_PANELS * rule.nodes.len());
        for p in 0..RADIAL_PANELS {
            let c = (p as f64 + 0.5) * width;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let r = c + 0.5 * width * x;
                nodes.push((r, 0.5 * width * w * r * bump(r)));
            }
        }
        let mass = TWO_PI * pairwise_sum(&nodes.iter().map(|n| n.1).collect::<Vec<_>>());
        let norm = 1.0 / mass;
        let hankel = |rho: f64| -> f64 {
            let terms: Vec<f64> = nodes.iter().map(|&(r, w)| w * bessel_j0(TWO_PI * rho * r)).collect();
            TWO_PI * norm * pairwise_sum(&terms)
        };
        let count = (GRID_MAX / GRID_STEP) as usize + 1;
        let grid: Vec<f64> = {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(|k| hankel(k as f64 * GRID_STEP)).collect()
        };
        let mut suffix = vec![0.0; count];
        let mut m: f64 = 0.0;
        for k in (0..count).rev() {
            m = m.max(grid[k].abs());
            suffix[k] = m;
        }
        let moll = Mollifier { norm, grid, suffix };
        if (moll.grid[0] - 1.0).abs() > 1e-14 {
            return Err(Error::Convergence(format!("mollifier transform at 0 is {}", moll.grid[0])));
        }
        for k in 0..64 {
            let rho = 0.37 + k as f64 * 1.13;
            let direct = hankel(rho);
            let err = (moll.psi(rho) - direct).abs();
            if err > 1e-9 {
                return Err(Error::Convergence(format!("mollifier transform interpolation error {err:e} at {rho}")));
            }
        }
        Ok(moll)
    }

    /// The shared instance, built on first use.
    pub fn shared() -> Result<&'static Mollifier> {
        static CELL: OnceLock<std::result::Result<Mollifier, String>> = OnceLock::new();
        CELL.get_or_init(|| Mollifier::build().map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| Error::Convergence(e.clone()))
    }

    /// Φ at radius ρ.
    pub fn phi(&self, rho: f64) -> f64 {
        self.norm * bump(rho)
    }

    /// ∫ Φ over the disc of radius ρ.
    pub fn mass_within(&self, rho: f64) -> f64 {
        let rho = rho.clamp(0.0, 1.0);
        TWO_PI * gl16().integrate_panels(0.0, rho, 32, |r| r * self.phi(r))
    }

    /// ψ(ρ) by cubic interpolation on the grid; zero beyond the grid.
    pub fn psi(&self, rho: f64) -> f64 {
        let rho = rho.abs();
        let u = rho / GRID_STEP;
        let k = u.floor() as usize;
        if k + 2 >= self.grid.len() {
            return 0.0;
        }
        let k0 = k.max(1) - 1;
        let t = u - (k0 + 1) as f64;
        let y = &self.grid[k0..k0 + 4];
        // four-point Lagrange weights on nodes -1, 0, 1, 2
        let w = [
            -t * (t - 1.0) * (t - 2.0) / 6.0,
            (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
            -(t + 1.0) * t * (t - 2.0) / 2.0,
            (t + 1.0) * t * (t - 1.0) / 6.0,
        ];
        w[0] * y[0] + w[1] * y[1] + w[2] * y[2] + w[3] * y[3]
    }

    /// Smallest grid radius beyond which |ψ| stays below `tol`.
    pub fn psi_cutoff(&self, tol: f64) -> Result<f64> {
        self.suffix
            .iter()
            .position(|&m| m <= tol)
            .map(|k| k as f64 * GRID_STEP)
            .ok_or_else(|| Error::Truncation(format!("|psi| does not fall below {tol:e} within rho <= {GRID_MAX}")))
    }
}
