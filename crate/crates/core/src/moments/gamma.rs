//! Log-gamma helpers that stay accurate for differences at large arguments.

use statrs::function::gamma::ln_gamma;

const SHIFT: f64 = 15.0;
// Stirling series coefficients B_{2j} / (2j (2j-1))
const STIRLING: [f64; 5] = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0];

/// `lnΓ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> f64 {
    ln_gamma(x)
}

/// `lnΓ(x + a) − lnΓ(x)` for `x > 0`, `x + a > 0`, without forming the
/// two large log-gammas separately.
pub fn log_gamma_ratio(x: f64, a: f64) -> f64 {
    debug_assert!(x > 0.0 && x + a > 0.0);
    if a == 0.0 {
        return 0.0;
    }
    if a < 0.0 {
        return -log_gamma_ratio(x + a, -a);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT {
        // Γ(x + a) / Γ(x) = [Γ(x + 1 + a) / Γ(x + 1)] · x / (x + a)
        acc -= (a / x).ln_1p();
        x += 1.0;
    }
    let y = x + a;
    let mut series = 0.0;
    let (mut px, mut py) = (1.0 / x, 1.0 / y);
    let (ix2, iy2) = (px * px, py * py);
    for c in STIRLING {
        series += c * (py - px);
        px *= ix2;
        py *= iy2;
    }
    acc + (x - 0.5) * (a / x).ln_1p() + a * y.ln() - a + series
}

/// `ln C(n, k)`; `−∞` when `k > n`.
pub fn log_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    log_gamma_ratio((n - k + 1) as f64, k as f64) - log_gamma(k as f64 + 1.0)
}

/// Numerically stable `ln Σ exp(t_i)`; `−∞` for an empty or all-`−∞` input.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}
