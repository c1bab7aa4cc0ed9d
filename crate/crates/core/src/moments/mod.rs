//! Clique-count moments for rank-1 kernels `W(x, y) = f(x) f(y)`.
//!
//! With `X_k` the number of `k`-cliques, `E[X_k] = C(n,k) (∫ f^{k-1})^k`,
//! and for two `k`-sets sharing `i` vertices the joint clique probability
//! over the product of marginals is `(∫ f^{k-1})^{-2i} (∫ f^{2k-i-1})^i`.
//! Everything is carried in natural logs.

mod gamma;
mod quadrature;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{Family, GraphonSpec, Profile};

pub use gamma::{log_choose, log_gamma, log_gamma_ratio, log_sum_exp};
pub use quadrature::{adaptive_simpson, integrate_peaked};

/// Relative tolerance for profile-power quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Number of further values that must stay negative after the cutoff.
pub const CUTOFF_CONFIRMATION: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedFormSqrt,
    ClosedFormPoly,
    ClosedFormConstant,
    Quadrature,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub n: u64,
    pub k: u64,
    /// `ln E[X_k]`; `−∞` (serialized as null) when `E[X_k] = 0`.
    pub log_expected: f64,
    pub zero_expectation: bool,
    pub family_tag: String,
    pub method: MomentMethod,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateEntry {
    pub k: u64,
    pub log_expected: f64,
    pub negative: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutoffResult {
    pub n: u64,
    pub k_star: u64,
    /// Set when no sign change occurs for `k ≤ n`; then `k_star = n + 1`.
    pub degenerate: bool,
    /// `ln E[X_k]` at `k_star − 1` and at `k_star ..= k_star + 10` (capped at `n`).
    pub scan_certificate: Vec<CertificateEntry>,
    pub family_tag: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VarianceReport {
    pub n: u64,
    pub k: u64,
    /// `ln (E[X_k²] / E[X_k]²)`.
    pub log_ratio: f64,
    /// Log of the overlap-`i` contribution, `i = 0..=k`.
    pub per_i_terms: Vec<f64>,
    pub family_tag: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictedConstants {
    pub exponent: f64,
    pub upper_constant: f64,
    pub lower_constant: f64,
}

fn check_supported(spec: &GraphonSpec) -> Result<()> {
    match spec.family() {
        Family::Constant { .. } | Family::Sqrt { .. } | Family::Poly { .. } | Family::Holder { .. } | Family::Rank1(_) => {
            Ok(())
        }
        other => Err(Error::Unsupported(format!(
            "{} is not supported by the moment calculations (needs Constant, SqrtFamily, PolyFamily, HolderFamily or Rank1){}",
            spec.family_name(),
            if matches!(other, Family::Line) { "; the line kernel is not rank-1" } else { "" }
        ))),
    }
}

/// `ln ∫_0^1 f(u)^m du` for the spec's profile, with the method used.
pub fn log_profile_moment(spec: &GraphonSpec, m: u64) -> Result<(f64, MomentMethod)> {
    check_supported(spec)?;
    let mf = m as f64;
    match (spec.family(), spec.window()) {
        (Family::Constant { p }, _) => {
            let v = if m == 0 { 0.0 } else { 0.5 * mf * p.ln() };
            return Ok((v, MomentMethod::ClosedFormConstant));
        }
        (Family::Sqrt { r }, None) => return Ok((-(r * mf).ln_1p(), MomentMethod::ClosedFormSqrt)),
        (Family::Poly { r }, None) => {
            let v = log_gamma(1.0 + 1.0 / r) - log_gamma_ratio(mf + 1.0, 1.0 / r);
            return Ok((v, MomentMethod::ClosedFormPoly));
        }
        _ => {}
    }
    if m == 0 {
        return Ok((0.0, MomentMethod::Quadrature));
    }
    if let Family::Rank1(profile) = spec.family() {
        let (lo, hi) = spec.window().map_or((0.0, 1.0), |w| (w.lo(), w.hi()));
        return Ok((log_piecewise_linear_power(profile, lo, hi, m) - (hi - lo).ln(), MomentMethod::Quadrature));
    }
    // remaining families have non-increasing profiles, so the peak is at u = 0
    let fmax = spec.profile_at(0.0).expect("rank-1 profile");
    if fmax <= 0.0 {
        return Ok((f64::NEG_INFINITY, MomentMethod::Quadrature));
    }
    let mut breaks = Vec::new();
    if let (Family::Holder { alpha, c }, w) = (spec.family(), spec.window()) {
        let edge = c.powf(-1.0 / alpha);
        let (lo, len) = w.map_or((0.0, 1.0), |w| (w.lo(), w.length()));
        breaks.push((edge - lo) / len);
    }
    let g = |u: f64| (spec.profile_at(u).unwrap_or(0.0) / fmax).powf(mf);
    let integral = integrate_peaked(&g, 0.0, &breaks, QUADRATURE_TOL)?;
    Ok((mf * fmax.ln() + integral.ln(), MomentMethod::Quadrature))
}

/// `ln ∫_lo^hi f(x)^m dx` for a piecewise-linear profile, integrated
/// exactly segment by segment.
fn log_piecewise_linear_power(profile: &Profile, lo: f64, hi: f64, m: u64) -> f64 {
    let mut xs = vec![lo];
    xs.extend(profile.knots().iter().copied().filter(|&x| x > lo && x < hi));
    xs.push(hi);
    let mf = m as f64;
    let pieces: Vec<f64> = xs
        .windows(2)
        .filter_map(|w| {
            let (y0, y1) = (profile.eval(w[0]), profile.eval(w[1]));
            let top = y0.max(y1);
            let bottom = y0.min(y1);
            if top <= 0.0 {
                return None;
            }
            // ∫ over the segment = dx · top^m · (1 − ρ^{m+1}) / ((m+1)(1 − ρ)), ρ = bottom/top
            let gap = (top - bottom) / top;
            let shape = if gap == 0.0 {
                0.0
            } else {
                let rho_pow = (mf + 1.0) * (-gap).ln_1p();
                (-rho_pow.exp_m1()).ln() - ((mf + 1.0) * gap).ln()
            };
            Some((w[1] - w[0]).ln() + mf * top.ln() + shape)
        })
        .collect();
    log_sum_exp(&pieces)
}

/// `ln E[X_k]` for the number of `k`-cliques in an `n`-vertex sample.
pub fn log_expected_cliques(spec: &GraphonSpec, n: u64, k: u64) -> Result<MomentReport> {
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("clique size k={k} must satisfy 1 <= k <= n={n}")));
    }
    let (l, method) = log_profile_moment(spec, k - 1)?;
    let log_expected = if l == f64::NEG_INFINITY { l } else { log_choose(n, k) + k as f64 * l };
    Ok(MomentReport {
        n,
        k,
        log_expected,
        zero_expectation: log_expected == f64::NEG_INFINITY,
        family_tag: spec.to_string(),
        method,
    })
}

/// Smallest `k ≥ 2` with `E[X_k] < 1` whose next ten values also stay
/// below 1. By Markov's inequality this bounds ω with high probability.
pub fn first_moment_cutoff(spec: &GraphonSpec, n: u64) -> Result<CutoffResult> {
    check_supported(spec)?;
    if n < 2 {
        return Err(Error::InvalidParameter("cutoff needs n >= 2".into()));
    }
    let value = |k: u64| -> Result<f64> { Ok(log_expected_cliques(spec, n, k)?.log_expected) };
    let entry = |k: u64, v: f64| CertificateEntry { k, log_expected: v, negative: v < 0.0 };
    let mut k = 2;
    'scan: while k <= n {
        let v = value(k)?;
        if v < 0.0 {
            let mut cert = vec![entry(k - 1, value(k - 1)?), entry(k, v)];
            for j in k + 1..=(k + CUTOFF_CONFIRMATION as u64).min(n) {
                let vj = value(j)?;
                cert.push(entry(j, vj));
                if vj >= 0.0 {
                    k = j + 1;
                    continue 'scan;
                }
            }
            return Ok(CutoffResult {
                n,
                k_star: k,
                degenerate: false,
                scan_certificate: cert,
                family_tag: spec.to_string(),
            });
        }
        k += 1;
    }
    let last = value(n)?;
    Ok(CutoffResult {
        n,
        k_star: n + 1,
        degenerate: true,
        scan_certificate: vec![entry(n, last)],
        family_tag: spec.to_string(),
    })
}

/// `E[X_k²] / E[X_k]²` summed over the overlap size of two `k`-sets.
pub fn variance_ratio(spec: &GraphonSpec, n: u64, k: u64) -> Result<VarianceReport> {
    check_supported(spec)?;
    if k < 1 || 2 * k > n {
        return Err(Error::InvalidParameter(format!("variance ratio needs 1 <= k and 2k <= n (k={k}, n={n})")));
    }
    let (lk, _) = log_profile_moment(spec, k - 1)?;
    if lk == f64::NEG_INFINITY {
        return Err(Error::Domain(format!("E[X_{k}] = 0 for {spec}; the ratio is undefined")));
    }
    let base = log_choose(n, k);
    let per_i_terms = (0..=k)
        .map(|i| -> Result<f64> {
            let comb = log_choose(k, i) + log_choose(n - k, k - i) - base;
            if i == 0 {
                return Ok(comb);
            }
            let (l2, _) = log_profile_moment(spec, 2 * k - i - 1)?;
            Ok(comb + i as f64 * (l2 - 2.0 * lk))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VarianceReport {
        n,
        k,
        log_ratio: log_sum_exp(&per_i_terms),
        per_i_terms,
        family_tag: spec.to_string(),
    })
}

/// Growth exponent and the constants of the matching upper and lower bounds.
pub fn predicted_constants(spec: &GraphonSpec) -> Result<PredictedConstants> {
    let e = std::f64::consts::E;
    match (spec.family(), spec.window()) {
        (Family::Sqrt { r }, None) => Ok(PredictedConstants {
            exponent: 0.5,
            upper_constant: (e / r).sqrt(),
            lower_constant: (12.0 * e * r).powf(-0.5),
        }),
        (Family::Poly { r }, None) => Ok(PredictedConstants {
            exponent: r / (r + 1.0),
            upper_constant: (log_gamma(1.0 + 1.0 / r).exp() * e).powf(r / (r + 1.0)),
            lower_constant: 0.5 * (-2.0 / (1.0 + r)).exp(),
        }),
        _ => Err(Error::Unsupported(format!(
            "predicted constants are only known for unrestricted SqrtFamily and PolyFamily, not {spec}"
        ))),
    }
}
