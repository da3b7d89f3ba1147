//! Least-squares power-law fit on log-log data.

use super::PowerLawFit;

/// Fit `y = a x + b` over `(x, y, sigma_y)` triples, where x = ln L and
/// y = ln(-ln p). Points are weighted by 1/sigma^2 when all sigmas are
/// positive and finite; otherwise the fit is unweighted. The exponent
/// standard error comes from the weighted normal equations (known-variance
/// form) or from the residual variance in the unweighted case.
pub fn fit_power_law(points: &[(f64, f64, f64)]) -> PowerLawFit {
    assert!(points.len() >= 2);
    let n = points.len() as f64;
    let weighted = points.iter().all(|&(_, _, s)| s.is_finite() && s > 0.0);
    let w = |s: f64| if weighted { 1.0 / (s * s) } else { 1.0 };

    let sw: f64 = points.iter().map(|&(_, _, s)| w(s)).sum();
    let xbar: f64 = points.iter().map(|&(x, _, s)| w(s) * x).sum::<f64>() / sw;
    let ybar: f64 = points.iter().map(|&(_, y, s)| w(s) * y).sum::<f64>() / sw;
    let sxx: f64 = points
        .iter()
        .map(|&(x, _, s)| w(s) * (x - xbar) * (x - xbar))
        .sum();
    let sxy: f64 = points
        .iter()
        .map(|&(x, y, s)| w(s) * (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;

    let ssr: f64 = points
        .iter()
        .map(|&(x, y, s)| {
            let r = y - (slope * x + intercept);
            w(s) * r * r
        })
        .sum();
    let sst: f64 = points
        .iter()
        .map(|&(_, y, s)| w(s) * (y - ybar) * (y - ybar))
        .sum();
    let r_squared = if sst == 0.0 { 1.0 } else { 1.0 - ssr / sst };

    let exponent_std_err = if weighted {
        (1.0 / sxx).sqrt()
    } else if points.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };

    PowerLawFit {
        exponent: slope,
        exponent_std_err,
        prefactor: intercept.exp(),
        r_squared,
        points_used: points.len(),
    }
}
