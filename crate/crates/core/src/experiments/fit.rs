use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub stderr: f64,
    /// Fitted `ln c` in `y ≈ c · n^exponent`.
    pub log_intercept: f64,
}

/// Unweighted least squares of `ln y` on `ln n`. The standard error comes
/// from the residuals and is 0 for exactly two points or a perfect fit.
pub fn fit_power_law(ns: &[f64], ys: &[f64]) -> Result<PowerFit> {
    if ns.len() != ys.len() || ns.len() < 2 {
        return Err(Error::InsufficientData(format!("power fit needs at least two points, got {}", ns.len())));
    }
    if let Some(bad) = ns.iter().chain(ys).find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::InsufficientData(format!("power fit needs positive finite data, got {bad}")));
    }
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ls.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("power fit needs at least two distinct n".into()));
    }
    let sxy: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if xs.len() > 2 {
        let ssr: f64 = xs.iter().zip(&ls).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (ssr / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(PowerFit { exponent: slope, stderr, log_intercept: intercept })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_data_recovers_exponent() {
        let ns = [1024.0, 2048.0, 4096.0, 8192.0, 16384.0];
        let ys: Vec<f64> = ns.iter().map(|n: &f64| n.powf(0.5)).collect();
        let f = fit_power_law(&ns, &ys).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
        assert!(f.log_intercept.abs() < 1e-10);
    }

    #[test]
    fn logarithmic_growth_looks_flat() {
        let ns = [256.0, 512.0, 1024.0, 2048.0, 4096.0];
        let ys: Vec<f64> = ns.iter().map(|n: &f64| 2.0 * n.log2()).collect();
        let f = fit_power_law(&ns, &ys).unwrap();
        assert!(f.exponent <= 0.15 && f.exponent > 0.09, "{}", f.exponent);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(fit_power_law(&[1.0], &[1.0]).is_err());
        assert!(fit_power_law(&[2.0, 4.0], &[0.0, 1.0]).is_err());
        assert!(fit_power_law(&[2.0, 2.0], &[1.0, 3.0]).is_err());
    }
}
