use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Tabulated one-dimensional profile `f: [0, 1] → [0, 1]`, evaluated by
/// piecewise-linear interpolation between knots. Linear pieces never
/// overshoot the knot values, so monotone runs in the table stay monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    xs: Vec<f64>,
    ys: Vec<f64>,
    source: String,
}

impl Profile {
    /// Builds a profile from knots. `xs` must be strictly increasing from
    /// exactly 0 to exactly 1 and every value must lie in `[0, 1]`.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter("profile columns differ in length".into()));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidParameter("profile needs at least two knots".into()));
        }
        if xs[0] != 0.0 || xs[xs.len() - 1] != 1.0 {
            return Err(Error::InvalidParameter("profile knots must start at x=0 and end at x=1".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("profile knots must be strictly increasing".into()));
        }
        if let Some(bad) = ys.iter().find(|y| !(0.0..=1.0).contains(*y)) {
            return Err(Error::InvalidParameter(format!("profile value {bad} outside [0, 1]")));
        }
        Ok(Self { xs, ys, source: source.into() })
    }

    /// Reads a two-column `x f(x)` table. Blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(x), Some(y), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::Parse(format!(
                    "{}:{}: expected two columns",
                    path.display(),
                    lineno + 1
                )));
            };
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("{}:{}: `{s}` is not a number", path.display(), lineno + 1))
                })
            };
            xs.push(parse(x)?);
            ys.push(parse(y)?);
        }
        Self::new(xs, ys, path.display().to_string())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        // index of the first knot strictly greater than x
        let hi = self.xs.partition_point(|&k| k <= x);
        if hi == 0 {
            return self.ys[0];
        }
        if hi >= self.xs.len() {
            return self.ys[self.ys.len() - 1];
        }
        let lo = hi - 1;
        let t = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        self.ys[lo] + t * (self.ys[hi] - self.ys[lo])
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn interpolates_between_knots() {
        let p = Profile::new(vec![0.0, 0.5, 1.0], vec![1.0, 0.5, 0.0], "t").unwrap();
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(1.0), 0.0);
        assert!((p.eval(0.25) - 0.75).abs() < 1e-15);
        assert!((p.eval(0.75) - 0.25).abs() < 1e-15);
        assert_eq!(p.eval(0.5), 0.5);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Profile::new(vec![0.0, 1.0], vec![1.0], "t").is_err());
        assert!(Profile::new(vec![0.1, 1.0], vec![1.0, 0.0], "t").is_err());
        assert!(Profile::new(vec![0.0, 0.9], vec![1.0, 0.0], "t").is_err());
        assert!(Profile::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 0.5, 0.5, 0.0], "t").is_err());
        assert!(Profile::new(vec![0.0, 1.0], vec![1.2, 0.0], "t").is_err());
    }

    #[test]
    fn reads_two_column_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# x f(x)\n0 1\n0.5 0.8\n\n1 0.2").unwrap();
        let p = Profile::from_file(f.path()).unwrap();
        assert_eq!(p.knots(), &[0.0, 0.5, 1.0]);
        assert!((p.eval(0.75) - 0.5).abs() < 1e-15);

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "0 1 2\n1 0").unwrap();
        assert!(Profile::from_file(bad.path()).is_err());
    }
}
