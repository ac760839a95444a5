//! Log-log least-squares exponent fits.

use crate::{CoreError, Result};

/// Result of fitting log(value) = slope * log(n) + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest |log residual| over the data.
    pub max_residual: f64,
}

/// Ordinary least squares in (ln n, ln value). Values and scales must be
/// strictly positive, at least three points with distinct scales are
/// required.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    if pairs.len() < 3 {
        return Err(CoreError::Empty(
            "exponent fit needs at least three points".into(),
        ));
    }
    for &(n, v) in pairs {
        if !(n > 0.0) {
            return Err(CoreError::BadParameter(format!(
                "fit scales must be positive, got {n}"
            )));
        }
        if !(v > 0.0) {
            return Err(CoreError::NonPositiveValue(v));
        }
    }
    let logs: Vec<(f64, f64)> = pairs.iter().map(|&(n, v)| (n.ln(), v.ln())).collect();
    let m = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-12 * (1.0 + sxx * m) {
        return Err(CoreError::BadParameter(
            "fit scales are all equal; slope is undefined".into(),
        ));
    }
    let slope = (m * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / m;
    let max_residual = logs
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(ExponentFit {
        slope,
        intercept,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_laws() {
        let c = 2.5f64;
        let sigma = -0.75f64;
        let pairs: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0, 16.0]
            .iter()
            .map(|&n| (n, c * n.powf(sigma)))
            .collect();
        let fit = fit_exponent(&pairs).unwrap();
        assert!((fit.slope - sigma).abs() < 1e-12);
        assert!((fit.intercept - c.ln()).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
    }

    #[test]
    fn reports_residual_for_noisy_data() {
        let pairs = vec![(2.0, 4.1), (4.0, 15.8), (8.0, 65.0)];
        let fit = fit_exponent(&pairs).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.05);
        assert!(fit.max_residual > 0.0);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(fit_exponent(&[(2.0, 1.0)]).is_err());
        assert!(fit_exponent(&[(2.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_exponent(&[(2.0, 1.0), (4.0, 0.0)]).is_err());
        assert!(fit_exponent(&[(2.0, 1.0), (4.0, -3.0)]).is_err());
        assert!(fit_exponent(&[(0.0, 1.0), (4.0, 3.0)]).is_err());
    }
}
