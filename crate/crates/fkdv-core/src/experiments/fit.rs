//! Ordinary least squares on log-log data.

use serde::{Deserialize, Serialize};

use crate::error::{FkdvError, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    pub r2: f64,
    pub points: usize,
}

/// Fit `ln y = slope * ln x + intercept` over strictly positive samples.
/// Requires at least three points with distinct abscissae.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<FitResult> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let mut xs: Vec<f64> = logs.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    if logs.len() < 3 || xs.len() < 3 {
        return Err(FkdvError::InsufficientFitPoints {
            need: 3,
            got: xs.len().min(logs.len()),
        });
    }
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let ybar = sy / n;
    let ss_res: f64 = logs
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let ss_tot: f64 = logs.iter().map(|&(_, y)| (y - ybar).powi(2)).sum();
    Ok(FitResult {
        slope,
        intercept,
        residual: (ss_res / n).sqrt(),
        r2: if ss_tot > 0.0 {
            1.0 - ss_res / ss_tot
        } else {
            1.0
        },
        points: logs.len(),
    })
}
