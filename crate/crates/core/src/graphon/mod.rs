//! Graphon descriptors and pointwise evaluation.
//!
//! A [`GraphonSpec`] is an immutable value: a kernel family with its
//! parameters plus an optional restriction window. Every built-in family
//! except [`Family::Line`] has product form `W(x, y) = f(x) f(y)`, and the
//! one-dimensional factor is exposed through [`GraphonSpec::profile_at`] so
//! that samplers and moment code can work with `f` directly.

mod dini;
mod profile;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dini::{
    classify_regime, estimate_dini, direction_fan, DiniConfig, DiniEstimate, DirectionClass, Regime,
    RegimeReport,
};
pub use profile::Profile;

/// A subinterval `[lo, hi]` of the unit interval with positive length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "interval [{lo}, {hi}] must lie inside [0, 1]"
            )));
        }
        if lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "interval [{lo}, {hi}] is degenerate (need lo < hi)"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    /// The window `[center - radius, center + radius]` clipped to `[0, 1]`.
    pub fn around(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "window radius must be positive, got {radius}"
            )));
        }
        let lo = (center - radius).max(0.0);
        let hi = (center + radius).min(1.0);
        if lo >= hi {
            return Err(Error::Domain(format!(
                "window [{}, {}] does not meet [0, 1]",
                center - radius,
                center + radius
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Maps `u` in `[0, 1]` affinely onto the window.
    pub fn map(&self, u: f64) -> f64 {
        (self.lo + u * self.length()).clamp(self.lo, self.hi)
    }

    /// The window of `inner` taken relative to `self`, as a window of `[0, 1]`.
    pub fn compose(&self, inner: &Interval) -> Interval {
        let lo = self.map(inner.lo);
        let hi = self.map(inner.hi);
        Interval { lo, hi }
    }

    fn is_unit(&self) -> bool {
        self.lo == 0.0 && self.hi == 1.0
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Kernel family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `W = p`, the Erdős–Rényi kernel.
    Constant { p: f64 },
    /// `W = (1-x)^r (1-y)^r`.
    Sqrt { r: f64 },
    /// `W = (1-x^r)(1-y^r)`.
    Poly { r: f64 },
    /// `W = (1-C x^α)(1-C y^α)` on `[0, C^{-1/α}]²`, zero elsewhere.
    Holder { alpha: f64, c: f64 },
    /// `W = 1 - |x-y|`.
    Line,
    /// `W = (1-f(x))(1-f(y))` with `f(x) = exp(-1/x²)`, `f(0) = 0`.
    FlatExp,
    /// `W = (1-x sin²(1/x))(1-y sin²(1/y))`, with value 1 at coordinate 0.
    Oscillating,
    /// `W = f(x) f(y)` for a tabulated profile `f`.
    Rank1(Profile),
}

/// Immutable kernel descriptor: family plus an optional restriction window.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphonSpec {
    family: Family,
    window: Option<Interval>,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl GraphonSpec {
    pub fn new(family: Family) -> Result<Self> {
        match &family {
            Family::Constant { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
                }
            }
            Family::Sqrt { r } | Family::Poly { r } => check_positive("r", *r)?,
            Family::Holder { alpha, c } => {
                check_positive("alpha", *alpha)?;
                if !(c.is_finite() && *c >= 1.0) {
                    return Err(Error::InvalidParameter(format!("C must be at least 1, got {c}")));
                }
            }
            Family::Line | Family::FlatExp | Family::Oscillating | Family::Rank1(_) => {}
        }
        Ok(Self { family, window: None })
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::new(Family::Constant { p })
    }

    pub fn sqrt_family(r: f64) -> Result<Self> {
        Self::new(Family::Sqrt { r })
    }

    pub fn poly_family(r: f64) -> Result<Self> {
        Self::new(Family::Poly { r })
    }

    pub fn holder(alpha: f64, c: f64) -> Result<Self> {
        Self::new(Family::Holder { alpha, c })
    }

    pub fn line() -> Self {
        Self { family: Family::Line, window: None }
    }

    pub fn flat_exp() -> Self {
        Self { family: Family::FlatExp, window: None }
    }

    pub fn oscillating() -> Self {
        Self { family: Family::Oscillating, window: None }
    }

    pub fn rank1(profile: Profile) -> Self {
        Self { family: Family::Rank1(profile), window: None }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn window(&self) -> Option<Interval> {
        self.window
    }

    /// Restricts the kernel to `window × window`, rescaled back onto `[0, 1]²`.
    /// An existing window is composed with the new one.
    pub fn restrict(&self, window: Interval) -> GraphonSpec {
        let composed = match self.window {
            Some(outer) => outer.compose(&window),
            None => window,
        };
        GraphonSpec {
            family: self.family.clone(),
            window: if composed.is_unit() { None } else { Some(composed) },
        }
    }

    /// `W(x, y)` for `x, y` in `[0, 1]`.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let (x, y) = match self.window {
            Some(w) => (w.map(x), w.map(y)),
            None => (x, y),
        };
        self.evaluate_base(x, y)
    }

    /// Evaluates the underlying family, ignoring any restriction window.
    pub fn evaluate_base(&self, x: f64, y: f64) -> f64 {
        match &self.family {
            Family::Constant { p } => *p,
            Family::Line => 1.0 - (x - y).abs(),
            _ => {
                let fx = self.family_profile(x).expect("product-form family");
                let fy = self.family_profile(y).expect("product-form family");
                fx * fy
            }
        }
    }

    /// True when the kernel factors as `f(x) f(y)`.
    pub fn is_rank_one(&self) -> bool {
        !matches!(self.family, Family::Line)
    }

    /// The one-dimensional factor `f` at `u` (window applied), for product-form
    /// kernels. `Constant(p)` reports `sqrt(p)`.
    pub fn profile_at(&self, u: f64) -> Option<f64> {
        let x = match self.window {
            Some(w) => w.map(u),
            None => u,
        };
        match &self.family {
            Family::Constant { p } => Some(p.sqrt()),
            _ => self.family_profile(x),
        }
    }

    /// Factor of the unrestricted family at `x`; `None` for kernels without one.
    pub(crate) fn family_profile(&self, x: f64) -> Option<f64> {
        let v = match &self.family {
            Family::Constant { p } => p.sqrt(),
            Family::Sqrt { r } => (1.0 - x).powf(*r),
            Family::Poly { r } => 1.0 - x.powf(*r),
            Family::Holder { alpha, c } => (1.0 - c * x.powf(*alpha)).max(0.0),
            Family::FlatExp => {
                if x == 0.0 {
                    1.0
                } else {
                    1.0 - (-1.0 / (x * x)).exp()
                }
            }
            Family::Oscillating => {
                if x == 0.0 {
                    1.0
                } else {
                    let s = (1.0 / x).sin();
                    1.0 - x * s * s
                }
            }
            Family::Rank1(profile) => profile.eval(x),
            Family::Line => return None,
        };
        Some(v.clamp(0.0, 1.0))
    }

    /// Short family name used in logs and error messages.
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Constant { .. } => "const",
            Family::Sqrt { .. } => "sqrt",
            Family::Poly { .. } => "poly",
            Family::Holder { .. } => "holder",
            Family::Line => "line",
            Family::FlatExp => "flatexp",
            Family::Oscillating => "osc",
            Family::Rank1(_) => "rank1",
        }
    }

    /// Scans a `(points × points)` grid of `[0, 1]²` and returns true when
    /// `self ≤ other` at every grid point.
    pub fn dominated_by_on_grid(&self, other: &GraphonSpec, points: usize) -> bool {
        let points = points.max(2);
        let step = 1.0 / (points - 1) as f64;
        let grid: Vec<f64> = (0..points).map(|i| (i as f64 * step).min(1.0)).collect();
        grid.iter()
            .all(|&x| grid.iter().all(|&y| self.evaluate(x, y) <= other.evaluate(x, y)))
    }

    /// Parses the single-line text form, loading Rank1 profiles from disk.
    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }
}

impl fmt::Display for GraphonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Constant { p } => write!(f, "const:p={p}")?,
            Family::Sqrt { r } => write!(f, "sqrt:r={r}")?,
            Family::Poly { r } => write!(f, "poly:r={r}")?,
            Family::Holder { alpha, c } => write!(f, "holder:alpha={alpha},C={c}")?,
            Family::Line => write!(f, "line")?,
            Family::FlatExp => write!(f, "flatexp")?,
            Family::Oscillating => write!(f, "osc")?,
            Family::Rank1(profile) => write!(f, "rank1:file={}", profile.source())?,
        }
        if let Some(w) = self.window {
            write!(f, "@{w}")?;
        }
        Ok(())
    }
}

fn parse_params(body: &str) -> Result<Vec<(String, String)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn take_param(params: &[(String, String)], key: &str) -> Result<f64> {
    let raw = params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .ok_or_else(|| Error::Parse(format!("missing parameter `{key}`")))?;
    raw.parse::<f64>()
        .map_err(|_| Error::Parse(format!("parameter `{key}` is not a number: `{raw}`")))
}

fn expect_keys(params: &[(String, String)], allowed: &[&str]) -> Result<()> {
    for (k, _) in params {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Parse(format!("unknown parameter `{k}`")));
        }
    }
    Ok(())
}

fn parse_window(text: &str) -> Result<Interval> {
    let inner = text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("window must look like [lo,hi], got `{text}`")))?;
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("window must look like [lo,hi], got `{text}`")))?;
    let lo: f64 = lo.trim().parse().map_err(|_| Error::Parse(format!("bad window bound `{lo}`")))?;
    let hi: f64 = hi.trim().parse().map_err(|_| Error::Parse(format!("bad window bound `{hi}`")))?;
    Interval::new(lo, hi)
}

impl FromStr for GraphonSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, window) = match s.rfind("@[") {
            Some(pos) => (&s[..pos], Some(parse_window(&s[pos + 1..])?)),
            None => (s, None),
        };
        let (name, rest) = match body.split_once(':') {
            Some((n, r)) => (n, r),
            None => (body, ""),
        };
        let spec = match name {
            "const" => {
                let params = parse_params(rest)?;
                expect_keys(&params, &["p"])?;
                GraphonSpec::constant(take_param(&params, "p")?)?
            }
            "sqrt" => {
                let params = parse_params(rest)?;
                expect_keys(&params, &["r"])?;
                GraphonSpec::sqrt_family(take_param(&params, "r")?)?
            }
            "poly" => {
                let params = parse_params(rest)?;
                expect_keys(&params, &["r"])?;
                GraphonSpec::poly_family(take_param(&params, "r")?)?
            }
            "holder" => {
                let params = parse_params(rest)?;
                expect_keys(&params, &["alpha", "C"])?;
                GraphonSpec::holder(take_param(&params, "alpha")?, take_param(&params, "C")?)?
            }
            "line" | "flatexp" | "osc" if !rest.is_empty() => {
                return Err(Error::Parse(format!("`{name}` takes no parameters")));
            }
            "line" => GraphonSpec::line(),
            "flatexp" => GraphonSpec::flat_exp(),
            "osc" => GraphonSpec::oscillating(),
            "rank1" => {
                let path = rest
                    .strip_prefix("file=")
                    .ok_or_else(|| Error::Parse("rank1 expects `rank1:file=<path>`".into()))?;
                GraphonSpec::rank1(Profile::from_file(Path::new(path))?)
            }
            other => return Err(Error::Parse(format!("unknown graphon family `{other}`"))),
        };
        Ok(match window {
            Some(w) => spec.restrict(w),
            None => spec,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_families() -> Vec<GraphonSpec> {
        vec![
            GraphonSpec::constant(0.5).unwrap(),
            GraphonSpec::sqrt_family(1.0).unwrap(),
            GraphonSpec::sqrt_family(0.5).unwrap(),
            GraphonSpec::poly_family(2.0).unwrap(),
            GraphonSpec::poly_family(0.5).unwrap(),
            GraphonSpec::holder(0.5, 2.0).unwrap(),
            GraphonSpec::line(),
            GraphonSpec::flat_exp(),
            GraphonSpec::oscillating(),
            GraphonSpec::rank1(Profile::new(vec![0.0, 0.4, 1.0], vec![1.0, 0.7, 0.1], "mem").unwrap()),
            GraphonSpec::line().restrict(Interval::new(0.2, 0.7).unwrap()),
        ]
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(GraphonSpec::constant(0.5).unwrap().evaluate(0.3, 0.9), 0.5);
        assert_eq!(GraphonSpec::sqrt_family(1.0).unwrap().evaluate(0.0, 0.0), 1.0);
        let w = GraphonSpec::poly_family(2.0).unwrap().evaluate(0.5, 0.5);
        assert!((w - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn parameter_domains_are_enforced() {
        assert!(GraphonSpec::constant(1.5).is_err());
        assert!(GraphonSpec::constant(-0.1).is_err());
        assert!(GraphonSpec::sqrt_family(0.0).is_err());
        assert!(GraphonSpec::poly_family(-1.0).is_err());
        assert!(GraphonSpec::holder(0.0, 2.0).is_err());
        assert!(GraphonSpec::holder(1.0, 0.5).is_err());
        assert!(Interval::new(0.3, 0.3).is_err());
        assert!(Interval::new(0.5, 0.2).is_err());
        assert!(Interval::new(-0.1, 0.2).is_err());
    }

    #[test]
    fn restriction_examples() {
        let c = GraphonSpec::constant(0.3).unwrap();
        let rc = c.restrict(Interval::new(0.1, 0.2).unwrap());
        assert_eq!(rc.evaluate(0.0, 1.0), 0.3);

        let line = GraphonSpec::line().restrict(Interval::new(0.0, 0.5).unwrap());
        assert!((line.evaluate(0.0, 1.0) - 0.5).abs() < 1e-15);

        let s = GraphonSpec::sqrt_family(1.0).unwrap();
        let same = s.restrict(Interval::unit());
        assert_eq!(same, s);
        assert_eq!(same.evaluate(0.25, 0.75), s.evaluate(0.25, 0.75));
    }

    #[test]
    fn windows_compose_into_one() {
        let base = GraphonSpec::line();
        let once = base.restrict(Interval::new(0.2, 0.6).unwrap());
        let twice = once.restrict(Interval::new(0.5, 1.0).unwrap());
        let w = twice.window().unwrap();
        assert!((w.lo() - 0.4).abs() < 1e-15);
        assert!((w.hi() - 0.6).abs() < 1e-15);
        for &(u, v) in &[(0.0, 1.0), (0.3, 0.9), (0.5, 0.5)] {
            let direct = base.evaluate(0.4 + 0.2 * u, 0.4 + 0.2 * v);
            assert!((twice.evaluate(u, v) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn holder_vanishes_outside_truncation_square() {
        let h = GraphonSpec::holder(1.0, 4.0).unwrap();
        assert_eq!(h.evaluate(0.3, 0.1), 0.0);
        assert_eq!(h.evaluate(0.0, 0.0), 1.0);
        assert!((h.evaluate(0.125, 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn singular_points_follow_their_limits() {
        assert_eq!(GraphonSpec::flat_exp().evaluate(0.0, 0.0), 1.0);
        assert_eq!(GraphonSpec::oscillating().evaluate(0.0, 0.0), 1.0);
        // W(a,a) = 1 at a = 1/π for the oscillating kernel.
        let a = 1.0 / std::f64::consts::PI;
        assert!((GraphonSpec::oscillating().evaluate(a, a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_form_round_trips() {
        for text in [
            "poly:r=2",
            "sqrt:r=1",
            "holder:alpha=0.5,C=2",
            "const:p=0.5",
            "line",
            "flatexp",
            "osc",
            "line@[0,0.5]",
            "poly:r=0.5@[0.25,0.75]",
        ] {
            let spec: GraphonSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn malformed_text_is_rejected() {
        for text in ["poly", "poly:s=2", "poly:r=x", "const:p=2", "line:r=1", "wave", "line@[0.5,0.5]", "sqrt:r=1@0,1"] {
            assert!(text.parse::<GraphonSpec>().is_err(), "{text} should not parse");
        }
    }

    #[test]
    fn dense_grid_dominance_facts() {
        let p1 = GraphonSpec::poly_family(1.0).unwrap();
        let p2 = GraphonSpec::poly_family(2.0).unwrap();
        let s1 = GraphonSpec::sqrt_family(1.0).unwrap();
        assert!(p1.dominated_by_on_grid(&p2, 1001));
        assert!(!p2.dominated_by_on_grid(&p1, 101));

        let step = 1.0 / 1000.0;
        for i in 0..=1000 {
            for j in 0..=1000 {
                let (x, y) = (i as f64 * step, j as f64 * step);
                assert!((s1.evaluate(x, y) - p1.evaluate(x, y)).abs() < 1e-15);
            }
        }

        // Hölder truncation sits below U_α on its support square.
        for &(alpha, c) in &[(0.5, 2.0), (1.0, 1.0), (2.0, 3.0)] {
            let h = GraphonSpec::holder(alpha, c).unwrap();
            let u = GraphonSpec::poly_family(alpha).unwrap();
            let side = c.powf(-1.0 / alpha);
            for i in 0..=1000 {
                for j in 0..=1000 {
                    let (x, y) = (i as f64 * step * side, j as f64 * step * side);
                    assert!(h.evaluate(x, y) <= u.evaluate(x, y) + 1e-15);
                }
            }
        }
    }

    #[test]
    fn symmetry_and_range_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_pcg::Pcg64Mcg::seed_from_u64(11);
        for spec in all_families() {
            for _ in 0..100_000 {
                let x: f64 = rng.random();
                let y: f64 = rng.random();
                let a = spec.evaluate(x, y);
                let b = spec.evaluate(y, x);
                assert_eq!(a, b, "{spec} asymmetric at ({x},{y})");
                assert!((0.0..=1.0).contains(&a), "{spec} out of range at ({x},{y})");
            }
        }
    }

    proptest! {
        #[test]
        fn restrict_matches_affine_substitution(
            lo in 0.0f64..0.9, len in 0.01f64..1.0, u in 0.0f64..=1.0, v in 0.0f64..=1.0, r in 0.2f64..4.0
        ) {
            let hi = (lo + len).min(1.0);
            prop_assume!(hi > lo);
            let w = Interval::new(lo, hi).unwrap();
            for base in [GraphonSpec::poly_family(r).unwrap(), GraphonSpec::line(), GraphonSpec::sqrt_family(r).unwrap()] {
                let restricted = base.restrict(w);
                let direct = base.evaluate(w.map(u), w.map(v));
                prop_assert_eq!(restricted.evaluate(u, v), direct);
            }
        }
    }
}
