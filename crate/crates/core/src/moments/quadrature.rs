//! Adaptive Simpson quadrature on a mesh graded toward a peak.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (depth >= 8 && (b - a) <= f64::EPSILON * m.abs().max(1e-300)) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature(format!("adaptive Simpson did not converge on [{a:e}, {b:e}]")));
    }
    Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?)
}

/// `∫_a^b f` by adaptive Simpson with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, 0)
}

/// `∫_0^1 f` for a non-negative integrand peaked at `peak`, to relative
/// tolerance `rel_tol`. The interval is cut at `peak ± 2^{-j}` (j ≤ 60) and
/// at the extra `breaks`, so narrow peaks are resolved. Pieces are
/// integrated from the peak outward and each gets a tolerance relative to
/// the running total.
pub fn integrate_peaked<F: Fn(f64) -> f64>(f: &F, peak: f64, breaks: &[f64], rel_tol: f64) -> Result<f64> {
    let mut cuts: Vec<f64> = vec![0.0, 1.0, peak];
    for j in 0..=60 {
        let d = (0.5f64).powi(j);
        cuts.push(peak - d);
        cuts.push(peak + d);
    }
    cuts.extend_from_slice(breaks);
    cuts.retain(|c| (0.0..=1.0).contains(c));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut pieces: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    // nearest to the peak first
    pieces.sort_by(|x, y| {
        let dx = (0.5 * (x.0 + x.1) - peak).abs();
        let dy = (0.5 * (y.0 + y.1) - peak).abs();
        dx.total_cmp(&dy)
    });
    let mut total = 0.0f64;
    for (a, b) in pieces {
        let fm = f(0.5 * (a + b));
        let scale = total.max(fm * (b - a)).max(f64::MIN_POSITIVE);
        total += adaptive_simpson(f, a, b, rel_tol * scale * 1e-2)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_peak_at_boundary() {
        // ∫ (1-x)^999 = 1/1000
        let v = integrate_peaked(&|x: f64| (1.0 - x).powi(999), 0.0, &[], 1e-10).unwrap();
        assert!((v * 1000.0 - 1.0).abs() < 1e-9, "{v}");
        // ∫ exp(-1e6 x) ≈ 1e-6
        let v = integrate_peaked(&|x: f64| (-1e6 * x).exp(), 0.0, &[], 1e-10).unwrap();
        assert!((v * 1e6 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn interior_peak() {
        let s = 1e-3;
        let v = integrate_peaked(&|x: f64| (-(x - 0.4).powi(2) / (2.0 * s * s)).exp(), 0.4, &[], 1e-10).unwrap();
        let exact = s * (2.0 * std::f64::consts::PI).sqrt();
        assert!((v / exact - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kink_at_break() {
        let v = integrate_peaked(&|x: f64| (1.0 - 4.0 * x).max(0.0), 0.0, &[0.25], 1e-12).unwrap();
        assert!((v - 0.125).abs() < 1e-13);
    }
}
