use crate::error::{BenchError, Result};
use crate::run::ConvergenceRecord;

/// Errors below this are treated as saturated at the rounding floor.
pub const ERROR_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Negated least-squares slope of `log(error)` against `log(n)`, so that a
/// method of order `p` reports about `p`. Failed and floor-saturated rows are
/// skipped.
pub fn fit_slope(records: &[ConvergenceRecord]) -> Result<f64> {
    if let Some(first) = records.first() {
        if records.iter().any(|r| r.scheme != first.scheme) {
            return Err(BenchError::InvalidConfig(
                "fit_slope expects records of a single scheme".into(),
            ));
        }
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.error.is_finite() && r.error > ERROR_FLOOR)
        .map(|r| ((r.n as f64).ln(), r.error.ln()))
        .collect();
    if points.len() < 3 {
        return Err(BenchError::TooFewPoints(points.len()));
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in &points {
        sxy += (x - mean_x) * (y - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    Ok(-sxy / sxx)
}
