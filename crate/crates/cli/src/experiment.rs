use clap::{Subcommand, ValueEnum};
use serde::Serialize;
use vlab_core::engines::FormulaId;
use vlab_core::lattice::*;

use crate::config::Format;
use crate::{CliError, Context, Outcome};

#[derive(Subcommand)]
pub enum ExperimentCmd {
    /// Δ(X) for the circle problem on a geometric grid.
    Circle {
        /// Defaults to min(1000, xmax/100).
        #[arg(long)]
        xmin: Option<f64>,
        #[arg(long, default_value_t = 1e6)]
        xmax: f64,
        /// Append the fitted sup-exponent and check it against the config.
        #[arg(long)]
        fit: bool,
        /// Fill the B1, B2, B3 columns.
        #[arg(long)]
        bounds: bool,
    },
    /// D(X) for the divisor problem on a geometric grid.
    Divisor {
        #[arg(long)]
        xmin: Option<f64>,
        #[arg(long, default_value_t = 1e5)]
        xmax: f64,
        #[arg(long)]
        fit: bool,
    },
    /// Largest |Δ(X)|/X^{1/4} over the jump points up to xmax.
    Hardy {
        #[arg(long, default_value_t = 1e4)]
        xmax: f64,
    },
    /// Smoothed lattice count against its Bessel series.
    Smoothed {
        #[arg(long, default_value_t = 1e4)]
        x: f64,
        #[arg(long, value_enum, default_value_t = Kernel::Bump)]
        smoothing: Kernel,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kernel {
    Bump,
    Gaussian,
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    rows: &'a [ExperimentRow],
    #[serde(skip_serializing_if = "Option::is_none")]
    fitted_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_window: Option<(f64, f64)>,
}

#[derive(Serialize)]
struct HardyOutput {
    x_max: f64,
    witness_x: f64,
    ratio: f64,
    min_ratio: f64,
}

fn default_xmin(xmin: Option<f64>, xmax: f64) -> f64 {
    xmin.unwrap_or_else(|| (xmax / 100.0).clamp(1.0, 1e3))
}

fn sweep_text(rows: &[ExperimentRow], series: &ErrorTermSeries, fit: bool, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(ExperimentRow::CSV_HEADER);
            for r in rows {
                out.push('\n');
                out.push_str(&r.to_csv());
            }
            if fit {
                let (lo, hi) = series.fit_window;
                out.push_str(&format!("\n# fitted_exponent={:.6} window={lo}:{hi}", series.fitted_exponent));
            }
            out
        }
        Format::Json => serde_json::to_string_pretty(&SweepOutput {
            rows,
            fitted_exponent: fit.then_some(series.fitted_exponent),
            fit_window: fit.then_some(series.fit_window),
        })
        .expect("rows serialize"),
    }
}

pub fn run(cmd: &ExperimentCmd, ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.config;
    let th = &cfg.thresholds;
    match *cmd {
        ExperimentCmd::Circle { xmin, xmax, fit, bounds } => {
            let series = circle_sweep(default_xmin(xmin, xmax), xmax)?;
            let rows = circle_rows(&series, bounds)?;
            let k = series.fitted_exponent;
            let passed = !fit || (th.circle_exponent.0..=th.circle_exponent.1).contains(&k);
            Ok(Outcome { text: sweep_text(&rows, &series, fit, cfg.format), passed })
        }
        ExperimentCmd::Divisor { xmin, xmax, fit } => {
            let series = divisor_sweep(default_xmin(xmin, xmax), xmax)?;
            let rows = divisor_rows(&series);
            let passed = !fit || series.fitted_exponent <= th.divisor_exponent_max;
            Ok(Outcome { text: sweep_text(&rows, &series, fit, cfg.format), passed })
        }
        ExperimentCmd::Hardy { xmax } => {
            let (witness_x, ratio) = hardy_scan(xmax)?;
            let out = HardyOutput { x_max: xmax, witness_x, ratio, min_ratio: th.hardy_min_ratio };
            let text = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&out).expect("fields serialize"),
                Format::Csv => format!("x_max,witness_x,ratio\n{xmax},{witness_x},{ratio:.10e}"),
            };
            Ok(Outcome { text, passed: ratio >= th.hardy_min_ratio })
        }
        ExperimentCmd::Smoothed { x, smoothing } => {
            let smoothing = match smoothing {
                Kernel::Bump => Smoothing::Bump,
                Kernel::Gaussian => Smoothing::Gaussian,
            };
            let mut r = smoothed_circle_identity(x, smoothing)?;
            if !cfg.timing {
                r.runtime_ms = 0;
            }
            let passed = r.rel_residual <= cfg.tolerance(FormulaId::SmoothedCircle);
            let text = match cfg.format {
                Format::Json => r.to_json(),
                Format::Csv => format!("{}\n{}", vlab_core::VerificationReport::CSV_HEADER, r.to_csv_row()),
            };
            Ok(Outcome { text, passed })
        }
    }
}
