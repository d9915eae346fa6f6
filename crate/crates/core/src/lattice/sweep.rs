use super::counting::{d_from_count, delta_from_count, MAX_COUNT_X};
use super::fit::ErrorTermSeries;
use super::smoothed::bound_terms;
use crate::arith::{divisor_table, r2_table};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Sweeps hold a full coefficient table, so they stop well below the
/// single-count budget.
const MAX_SWEEP_X: f64 = 1e8;
const GRID_RATIO: f64 = 1.15;

/// Integers X_min·1.15^k up to X_max, with X_max itself appended.
pub fn sample_grid(x_min: f64, x_max: f64) -> Result<Vec<u64>> {
    if !(x_min >= 1.0) || !(x_max > x_min) || x_max > MAX_SWEEP_X.min(MAX_COUNT_X) {
        return Err(Error::Domain(format!("sweep range [{x_min}, {x_max}] outside 1 <= X_min < X_max <= {MAX_SWEEP_X:e}")));
    }
    let mut out: Vec<u64> = Vec::new();
    let mut x = x_min;
    while x < x_max {
        let n = x.round() as u64;
        if out.last() != Some(&n) {
            out.push(n);
        }
        x *= GRID_RATIO;
    }
    let last = x_max.floor() as u64;
    if out.last() != Some(&last) {
        out.push(last);
    }
    Ok(out)
}

/// Samples at the grid points and at every X ≥ X_min where
/// M(X) = max_{1≤Y≤X} |E(Y)| increases. The exponent is fitted to M on
/// the grid, so the window start does not truncate the maximum.
fn sweep(x_min: f64, x_max: f64, increments: impl Iterator<Item = u64>, error: impl Fn(u64, f64) -> f64) -> Result<ErrorTermSeries> {
    let grid = sample_grid(x_min, x_max)?;
    let first = grid[0];
    let mut next = grid.iter().copied().peekable();
    let mut samples = Vec::new();
    let mut envelope = Vec::with_capacity(grid.len());
    let mut running: f64 = 0.0;
    let mut count = 0u64;
    for (n, inc) in increments.enumerate().skip(1) {
        count += inc;
        let n = n as u64;
        let x = n as f64;
        let e = error(count, x);
        let record = e.abs() > running;
        running = running.max(e.abs());
        if n < first {
            continue;
        }
        let on_grid = next.peek() == Some(&n);
        if on_grid {
            next.next();
            envelope.push((x, running));
        }
        if record || on_grid {
            samples.push((x, e));
        }
    }
    ErrorTermSeries::with_envelope(samples, &envelope)
}

/// Δ(X) over [X_min, X_max].
pub fn circle_sweep(x_min: f64, x_max: f64) -> Result<ErrorTermSeries> {
    let n = sample_grid(x_min, x_max)?.last().copied().unwrap_or(1) as usize;
    let table = r2_table(n);
    sweep(x_min, x_max, table.into_iter().map(u64::from), delta_from_count)
}

/// D(X) over [X_min, X_max].
pub fn divisor_sweep(x_min: f64, x_max: f64) -> Result<ErrorTermSeries> {
    let n = sample_grid(x_min, x_max)?.last().copied().unwrap_or(1) as usize;
    let table = divisor_table(n);
    sweep(x_min, x_max, table.into_iter().map(u64::from), d_from_count)
}

/// One CSV row: the error value, the bounding terms when computed, and
/// |E|/X^{1/4}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub x: f64,
    pub error: f64,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub b3: Option<f64>,
    pub ratio_x14: f64,
}

impl ExperimentRow {
    pub const CSV_HEADER: &'static str = "X,delta,B1,B2,B3,ratio_x14";

    fn plain(x: f64, error: f64) -> Self {
        ExperimentRow { x, error, b1: None, b2: None, b3: None, ratio_x14: error.abs() / x.powf(0.25) }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.10e}")).unwrap_or_default();
        format!(
            "{},{:.10e},{},{},{},{:.10e}",
            self.x,
            self.error,
            opt(self.b1),
            opt(self.b2),
            opt(self.b3),
            self.ratio_x14
        )
    }
}

/// Rows for a circle sweep; with `with_bounds` each row also carries
/// B₁, B₂, B₃ (computed for X ≥ 100 only).
pub fn circle_rows(series: &ErrorTermSeries, with_bounds: bool) -> Result<Vec<ExperimentRow>> {
    series
        .samples
        .par_iter()
        .map(|&(x, e)| {
            let mut row = ExperimentRow::plain(x, e);
            if with_bounds && x >= 100.0 {
                let b = bound_terms(x)?;
                row.b1 = Some(b.b1);
                row.b2 = Some(b.b2);
                row.b3 = Some(b.b3);
            }
            Ok(row)
        })
        .collect()
}

pub fn divisor_rows(series: &ErrorTermSeries) -> Vec<ExperimentRow> {
    series.samples.iter().map(|&(x, e)| ExperimentRow::plain(x, e)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::counting::{d_divisor, delta_circle};
    use super::*;

    #[test]
    fn grid_shape() {
        let g = sample_grid(1000.0, 1e4).unwrap();
        assert_eq!(g[0], 1000);
        assert_eq!(*g.last().unwrap(), 10_000);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(sample_grid(10.0, 5.0).is_err());
    }

    #[test]
    fn sweeps_agree_with_direct_counts() {
        let c = circle_sweep(1000.0, 1e5).unwrap();
        for &(x, e) in c.samples.iter().step_by(7) {
            assert_eq!(e, delta_circle(x).unwrap());
        }
        let d = divisor_sweep(1000.0, 1e5).unwrap();
        for &(x, e) in d.samples.iter().step_by(7) {
            assert_eq!(e, d_divisor(x).unwrap());
        }
        let rows = circle_rows(&c, false).unwrap();
        assert_eq!(rows[0].to_csv().split(',').count(), 6);
        assert_eq!(ExperimentRow::CSV_HEADER.split(',').count(), 6);
    }

    #[test]
    fn sup_exponents_on_short_windows() {
        // A numpy prefix-maximum fit on the same grid gives 0.3171 and 0.3248.
        let c = circle_sweep(1e3, 1e6).unwrap();
        assert!((c.fitted_exponent - 0.316933).abs() < 1e-6, "{}", c.fitted_exponent);
        let d = divisor_sweep(1e3, 1e5).unwrap();
        assert!((d.fitted_exponent - 0.322533).abs() < 1e-6, "{}", d.fitted_exponent);
        // records below the window still raise the envelope
        assert!(c.samples.iter().all(|&(x, _)| x >= 1e3));
    }
}
