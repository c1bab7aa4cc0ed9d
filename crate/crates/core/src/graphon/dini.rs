//! Finite-step Dini derivative estimates along rays from a diagonal point and
//! a heuristic classifier of the local steepness regime at points where the
//! kernel equals 1.
//!
//! Dini derivatives are limits; here they are approximated by difference
//! quotients on a descending step grid. All thresholds live in
//! [`DiniConfig`] and are echoed back in every [`RegimeReport`].

use serde::Serialize;

use super::GraphonSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct DiniConfig {
    /// Descending positive step sizes.
    pub h_grid: Vec<f64>,
    /// Number of smallest steps over which sup/inf are taken.
    pub tail: usize,
    /// `|quotient|` below this at the two smallest steps counts as zero.
    pub near_zero: f64,
    /// `|quotient|` above this at the smallest step (and still growing) counts as divergent.
    pub divergence_ceiling: f64,
    /// Bounded regime requires every tail quotient in `[-bounded_max, -bounded_min]`.
    pub bounded_min: f64,
    pub bounded_max: f64,
    /// Number of directions in the scanned fan.
    pub fan_size: usize,
    /// Tolerance for the `W(a, a) = 1` precondition.
    pub diagonal_tolerance: f64,
}

impl Default for DiniConfig {
    fn default() -> Self {
        Self {
            h_grid: (1..=7).map(|e| 10f64.powi(-e)).collect(),
            tail: 4,
            near_zero: 0.05,
            divergence_ceiling: 50.0,
            bounded_min: 0.05,
            bounded_max: 50.0,
            fan_size: 16,
            diagonal_tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiniEstimate {
    pub point: (f64, f64),
    pub direction: (f64, f64),
    pub h_grid: Vec<f64>,
    pub quotients: Vec<f64>,
    pub sup_estimate: f64,
    pub inf_estimate: f64,
    pub divergent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionClass {
    Bounded,
    Zero,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Quotients bounded away from 0 and −∞ in every direction.
    ThetaSqrt,
    /// Quotients vanish in every direction.
    OmegaSqrt,
    /// Quotients diverge to −∞ in every direction.
    OSqrt,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    pub a: f64,
    pub regime: Regime,
    pub estimates: Vec<DiniEstimate>,
    pub classes: Vec<DirectionClass>,
    pub config: DiniConfig,
}

/// Difference quotients `(W((a,a) + h d) − W(a,a)) / h` over `h_grid`.
pub fn estimate_dini(
    spec: &GraphonSpec,
    a: f64,
    direction: (f64, f64),
    h_grid: &[f64],
    config: &DiniConfig,
) -> Result<DiniEstimate> {
    let norm = direction.0.hypot(direction.1);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("direction must have unit norm, got {norm}")));
    }
    if h_grid.is_empty() || h_grid.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::InvalidParameter("step sizes must be positive".into()));
    }
    if h_grid.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::InvalidParameter("step sizes must be strictly decreasing".into()));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(format!("diagonal point a={a} outside [0, 1]")));
    }
    let base = spec.evaluate(a, a);
    let mut quotients = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        let x = a + h * direction.0;
        let y = a + h * direction.1;
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return Err(Error::Domain(format!(
                "step h={h} from ({a},{a}) along ({}, {}) leaves the unit square",
                direction.0, direction.1
            )));
        }
        quotients.push((spec.evaluate(x, y) - base) / h);
    }
    let k = config.tail.clamp(1, quotients.len());
    let tail = &quotients[quotients.len() - k..];
    let sup_estimate = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inf_estimate = tail.iter().copied().fold(f64::INFINITY, f64::min);

    let mags: Vec<f64> = quotients.iter().map(|q| q.abs()).collect();
    let last3 = &mags[mags.len().saturating_sub(3)..];
    let growing = last3.len() == 3 && last3.windows(2).all(|w| w[1] > w[0]);
    let divergent = growing && mags[mags.len() - 1] > config.divergence_ceiling;

    Ok(DiniEstimate {
        point: (a, a),
        direction,
        h_grid: h_grid.to_vec(),
        quotients,
        sup_estimate,
        inf_estimate,
        divergent,
    })
}

/// Unit directions pointing into the square from `(a, a)`: the feasible
/// quadrant at the corners, the full circle in the interior.
pub fn direction_fan(a: f64, size: usize) -> Vec<(f64, f64)> {
    let size = size.max(2);
    let quadrant = |sx: f64, sy: f64| -> Vec<(f64, f64)> {
        (0..size)
            .map(|j| {
                if j == 0 {
                    (sx, 0.0)
                } else if j == size - 1 {
                    (0.0, sy)
                } else {
                    let theta = j as f64 * std::f64::consts::FRAC_PI_2 / (size - 1) as f64;
                    (sx * theta.cos(), sy * theta.sin())
                }
            })
            .collect()
    };
    if a <= 0.0 {
        quadrant(1.0, 1.0)
    } else if a >= 1.0 {
        quadrant(-1.0, -1.0)
    } else {
        (0..size)
            .map(|j| {
                let theta = j as f64 * std::f64::consts::TAU / size as f64;
                (theta.cos(), theta.sin())
            })
            .collect()
    }
}

fn classify_direction(est: &DiniEstimate, config: &DiniConfig) -> DirectionClass {
    let q = &est.quotients;
    if est.divergent {
        return DirectionClass::Divergent;
    }
    let n = q.len();
    if n >= 2 && q[n - 1].abs() < config.near_zero && q[n - 2].abs() < config.near_zero {
        return DirectionClass::Zero;
    }
    if est.inf_estimate >= -config.bounded_max && est.sup_estimate <= -config.bounded_min {
        return DirectionClass::Bounded;
    }
    DirectionClass::Inconclusive
}

/// Classifies the steepness of `W` at `(a, a)` from directional quotients
/// over [`direction_fan`]. Requires `W(a, a) = 1`.
pub fn classify_regime(spec: &GraphonSpec, a: f64, config: &DiniConfig) -> Result<RegimeReport> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(format!("diagonal point a={a} outside [0, 1]")));
    }
    let peak = spec.evaluate(a, a);
    if (peak - 1.0).abs() > config.diagonal_tolerance {
        return Err(Error::Precondition(format!("W({a},{a}) = {peak}, expected 1")));
    }
    let interior = a > 0.0 && a < 1.0;
    let room = if interior { a.min(1.0 - a) } else { 1.0 };
    let grid: Vec<f64> = config.h_grid.iter().copied().filter(|&h| h <= room).collect();
    if grid.len() < 3 {
        return Err(Error::Domain(format!(
            "point a={a} is too close to the boundary for the configured step grid"
        )));
    }
    let mut estimates = Vec::new();
    let mut classes = Vec::new();
    for d in direction_fan(a, config.fan_size) {
        let est = estimate_dini(spec, a, d, &grid, config)?;
        classes.push(classify_direction(&est, config));
        estimates.push(est);
    }
    let all = |c: DirectionClass| classes.iter().all(|&x| x == c);
    let regime = if all(DirectionClass::Bounded) {
        Regime::ThetaSqrt
    } else if all(DirectionClass::Zero) {
        Regime::OmegaSqrt
    } else if all(DirectionClass::Divergent) {
        Regime::OSqrt
    } else {
        Regime::Unknown
    };
    Ok(RegimeReport { a, regime, estimates, classes, config: config.clone() })
}
