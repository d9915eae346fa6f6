use crate::error::{Error, Result};
use serde::Serialize;

/// Error-term samples (X, E(X)) with strictly increasing X and the fitted
/// growth exponent of their running maximum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorTermSeries {
    pub samples: Vec<(f64, f64)>,
    pub fitted_exponent: f64,
    pub fit_window: (f64, f64),
}

impl ErrorTermSeries {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Domain("error-term samples must have strictly increasing X".into()));
        }
        let fitted_exponent = exponent_fit(&samples)?;
        let fit_window = (samples[0].0, samples[samples.len() - 1].0);
        Ok(ErrorTermSeries { samples, fitted_exponent, fit_window })
    }

    /// Samples whose exponent is fitted to a separately supplied
    /// nondecreasing envelope (X, M(X)) instead of to the samples.
    pub(crate) fn with_envelope(samples: Vec<(f64, f64)>, envelope: &[(f64, f64)]) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Domain("error-term samples must have strictly increasing X".into()));
        }
        let fitted_exponent = exponent_fit(envelope)?;
        let fit_window = (envelope[0].0, envelope[envelope.len() - 1].0);
        Ok(ErrorTermSeries { samples, fitted_exponent, fit_window })
    }
}

/// Least-squares slope of log(running max |E|) against log X.
pub fn exponent_fit(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 10 {
        return Err(Error::Domain(format!("exponent fit needs at least 10 samples, got {}", samples.len())));
    }
    let (lo, hi) = (samples[0].0, samples[samples.len() - 1].0);
    if !(lo > 0.0) || hi / lo < 100.0 {
        return Err(Error::Domain(format!("exponent fit needs two decades of X, got [{lo}, {hi}]")));
    }
    let mut running: f64 = 0.0;
    let mut pts = Vec::with_capacity(samples.len());
    for &(x, e) in samples {
        running = running.max(e.abs());
        if running > 0.0 {
            pts.push((x.ln(), running.ln()));
        }
    }
    if pts.len() < 2 {
        return Err(Error::Domain("error-term samples are all zero".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(k: f64, c: f64) -> Vec<(f64, f64)> {
        (0..40).map(|i| 10f64.powf(1.0 + i as f64 * 0.1)).map(|x| (x, c * x.powf(k))).collect()
    }

    #[test]
    fn pure_powers() {
        assert!((exponent_fit(&synthetic(1.0 / 3.0, 1.0)).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        assert!((exponent_fit(&synthetic(0.25, 7.5)).unwrap() - 0.25).abs() < 1e-10);
        let s = ErrorTermSeries::new(synthetic(0.25, 2.0)).unwrap();
        assert_eq!(s.fit_window.0, 10.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(exponent_fit(&synthetic(0.3, 1.0)[..5]).is_err());
        let narrow: Vec<_> = (1..20).map(|i| (100.0 + i as f64, 1.0)).collect();
        assert!(exponent_fit(&narrow).is_err());
        let zeros: Vec<_> = synthetic(0.3, 0.0);
        assert!(exponent_fit(&zeros).is_err());
        let mut unsorted = synthetic(0.3, 1.0);
        unsorted.swap(3, 4);
        assert!(ErrorTermSeries::new(unsorted).is_err());
    }
}
