//! Monte Carlo studies: clique-size scaling fits, concentration, and
//! property suites on coupled, partitioned and restricted samples.

mod fit;
mod output;
mod seeds;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::clique::{
    default_threshold, degree_greedy_clique, exact_max_clique, threshold_greedy_clique, SolveBudget, Status,
};
use crate::error::{Error, Result};
use crate::graphon::GraphonSpec;
use crate::moments::{first_moment_cutoff, predicted_constants, PredictedConstants};
use crate::sampler::{sample, sample_below_threshold, SampleConfig, DEFAULT_MAX_VERTICES};

pub use fit::{fit_power_law, PowerFit};
pub use output::{
    run_directory, scaling_summary, write_scaling_run, write_trials_csv, SCHEMA_VERSION, TRIALS_CSV_HEADER,
};
pub use seeds::{mix64, splitmix64, trial_seed};
pub use suites::{
    count_k_cliques, dominance_suite, interval_suite, moment_mc_check, partition_suite, union_bound_upper_check,
    DominanceReport, IntervalConfig, MOMENT_MC_MAX_N, IntervalReport, MomentCheck, PartitionReport, PartitionTrial, UnionBoundPerN,
    UnionBoundReport,
};

/// Largest vertex count the exact method accepts unless overridden.
pub const DEFAULT_EXACT_MAX_N: usize = 1024;

/// Share of conclusive trials needed at every n before a fit is formed.
pub const MIN_CONCLUSIVE_SHARE: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMethod {
    Exact,
    ThresholdGreedy,
    DegreeGreedy,
    BestOf,
}

impl ScalingMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScalingMethod::Exact => "exact",
            ScalingMethod::ThresholdGreedy => "threshold_greedy",
            ScalingMethod::DegreeGreedy => "degree_greedy",
            ScalingMethod::BestOf => "best_of",
        }
    }
}

impl fmt::Display for ScalingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScalingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "exact" => Ok(ScalingMethod::Exact),
            "threshold_greedy" => Ok(ScalingMethod::ThresholdGreedy),
            "degree_greedy" => Ok(ScalingMethod::DegreeGreedy),
            "best_of" => Ok(ScalingMethod::BestOf),
            _ => Err(Error::Parse(format!(
                "unknown method `{s}` (expected exact, threshold_greedy, degree_greedy or best_of)"
            ))),
        }
    }
}

/// Where the threshold-greedy window sits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ThresholdRule {
    /// The family's default for each n.
    Default,
    Fixed { center: f64, t: f64 },
}

impl ThresholdRule {
    pub fn resolve(&self, spec: &GraphonSpec, n: usize) -> Result<(f64, f64)> {
        match *self {
            ThresholdRule::Default => default_threshold(spec, n),
            ThresholdRule::Fixed { center, t } => {
                if !(t > 0.0 && t <= 1.0) {
                    return Err(Error::InvalidParameter(format!("threshold t={t} must lie in (0, 1]")));
                }
                Ok((center, t))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StudyOptions {
    pub method: ScalingMethod,
    pub budget: SolveBudget,
    pub exact_max_n: usize,
    pub max_vertices: usize,
    pub threshold: ThresholdRule,
    /// Compare the best heuristic clique with the first-moment cutoff on full samples.
    pub markov_check: bool,
}

impl StudyOptions {
    pub fn new(method: ScalingMethod) -> Self {
        Self {
            method,
            budget: SolveBudget::default(),
            exact_max_n: DEFAULT_EXACT_MAX_N,
            max_vertices: DEFAULT_MAX_VERTICES,
            threshold: ThresholdRule::Default,
            markov_check: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    /// Estimator that produced `clique_size`.
    pub method: ScalingMethod,
    pub clique_size: usize,
    pub status: Status,
    pub conclusive: bool,
    /// max(threshold-greedy, degree-greedy) on the full sample, when one was drawn.
    pub best_of: Option<usize>,
    /// Proven upper bound from the exact solver, when available.
    pub upper_bound: Option<usize>,
    /// Vertices actually simulated (fewer than `n` for below-threshold samples).
    pub simulated_vertices: usize,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerNStats {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub min: usize,
    pub max: usize,
    pub trials: usize,
    pub conclusive: usize,
    pub inconclusive: usize,
    pub method: ScalingMethod,
    pub first_moment_cutoff: Option<u64>,
    pub markov_checked: usize,
    pub markov_violations: usize,
}

/// Raw outcome of a scaling run before fitting.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingTrials {
    pub spec_tag: String,
    pub method: ScalingMethod,
    pub seed: u64,
    pub trials: usize,
    pub n_grid: Vec<usize>,
    pub per_n: Vec<PerNStats>,
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub spec_tag: String,
    pub method: ScalingMethod,
    pub seed: u64,
    pub trials: usize,
    pub n_grid: Vec<usize>,
    pub per_n: Vec<PerNStats>,
    pub fitted_exponent: f64,
    pub exponent_stderr: f64,
    /// Mean clique size at the largest n divided by `n^fitted_exponent`.
    pub empirical_constant: f64,
    pub predicted: Option<PredictedConstants>,
    pub markov_violations: usize,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// One trial: draw the sample its method needs and measure the clique.
pub fn run_trial(spec: &GraphonSpec, n: usize, trial: usize, seed: u64, opts: &StudyOptions) -> Result<TrialRecord> {
    let start = Instant::now();
    let threshold = match opts.method {
        ScalingMethod::ThresholdGreedy | ScalingMethod::BestOf => Some(opts.threshold.resolve(spec, n)?),
        _ => opts.threshold.resolve(spec, n).ok(),
    };
    let full = !(opts.method == ScalingMethod::ThresholdGreedy && n > opts.max_vertices);
    let mut record = TrialRecord {
        n,
        trial,
        seed,
        method: opts.method,
        clique_size: 0,
        status: Status::LowerBound,
        conclusive: true,
        best_of: None,
        upper_bound: None,
        simulated_vertices: n,
        elapsed_ms: 0.0,
    };
    if !full {
        let (center, t) = threshold.expect("threshold resolved above");
        let config = SampleConfig::below_threshold(spec.clone(), n, seed, t, center).with_max_vertices(opts.max_vertices);
        let g = sample_below_threshold(&config)?;
        record.simulated_vertices = g.n();
        record.clique_size = threshold_greedy_clique(&g, center, t)?.size;
    } else {
        let g = sample(&SampleConfig::full(spec.clone(), n, seed).with_max_vertices(opts.max_vertices))?;
        let dg = degree_greedy_clique(&g).size;
        let tg = match threshold {
            Some((c, t)) => Some(threshold_greedy_clique(&g, c, t)?.size),
            None => None,
        };
        record.best_of = Some(tg.unwrap_or(0).max(dg));
        match opts.method {
            ScalingMethod::Exact => {
                let r = exact_max_clique(&g, &opts.budget);
                record.clique_size = r.size;
                record.status = r.status;
                record.conclusive = r.status == Status::Optimal;
                record.upper_bound = r.upper_bound;
            }
            ScalingMethod::ThresholdGreedy => record.clique_size = tg.expect("threshold resolved above"),
            ScalingMethod::DegreeGreedy => record.clique_size = dg,
            ScalingMethod::BestOf => record.clique_size = record.best_of.unwrap(),
        }
    }
    record.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(record)
}

fn validate_grid(n_grid: &[usize], trials: usize) -> Result<()> {
    if n_grid.len() < 3 {
        return Err(Error::InvalidParameter("n grid needs at least three values".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n grid must be strictly increasing".into()));
    }
    if n_grid[0] < 2 {
        return Err(Error::InvalidParameter("n grid values must be at least 2".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    Ok(())
}

fn check_method(spec: &GraphonSpec, n_grid: &[usize], opts: &StudyOptions) -> Result<()> {
    match opts.method {
        ScalingMethod::Exact => {
            if let Some(&n) = n_grid.iter().find(|&&n| n > opts.exact_max_n) {
                return Err(Error::Unsupported(format!(
                    "exact method limited to n <= {} (got {n}); raise the limit explicitly or choose a heuristic",
                    opts.exact_max_n
                )));
            }
        }
        ScalingMethod::ThresholdGreedy | ScalingMethod::BestOf => {
            for &n in n_grid {
                opts.threshold.resolve(spec, n)?;
            }
        }
        ScalingMethod::DegreeGreedy => {}
    }
    Ok(())
}

/// Runs `trials` independent samples at each n without fitting.
pub fn run_scaling_trials(
    spec: &GraphonSpec,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    opts: &StudyOptions,
) -> Result<ScalingTrials> {
    validate_grid(n_grid, trials)?;
    check_method(spec, n_grid, opts)?;
    let jobs: Vec<(usize, usize)> = n_grid.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let records = jobs
        .par_iter()
        .map(|&(n, t)| run_trial(spec, n, t, trial_seed(seed, n as u64, t as u64), opts))
        .collect::<Result<Vec<_>>>()?;
    let per_n = n_grid
        .iter()
        .map(|&n| {
            let rs: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
            let values: Vec<f64> = rs.iter().filter(|r| r.conclusive).map(|r| r.clique_size as f64).collect();
            let (mean, std) = mean_std(&values);
            let cutoff = if opts.markov_check {
                first_moment_cutoff(spec, n as u64).ok().map(|c| c.k_star)
            } else {
                None
            };
            let checked: Vec<usize> = rs.iter().filter_map(|r| r.best_of).collect();
            let violations = cutoff.map_or(0, |k| checked.iter().filter(|&&b| b as u64 > k).count());
            let conclusive: Vec<usize> = rs.iter().filter(|r| r.conclusive).map(|r| r.clique_size).collect();
            PerNStats {
                n,
                mean,
                std,
                min: conclusive.iter().copied().min().unwrap_or(0),
                max: conclusive.iter().copied().max().unwrap_or(0),
                trials: rs.len(),
                conclusive: conclusive.len(),
                inconclusive: rs.len() - conclusive.len(),
                method: opts.method,
                first_moment_cutoff: cutoff,
                markov_checked: if cutoff.is_some() { checked.len() } else { 0 },
                markov_violations: violations,
            }
        })
        .collect();
    Ok(ScalingTrials {
        spec_tag: spec.to_string(),
        method: opts.method,
        seed,
        trials,
        n_grid: n_grid.to_vec(),
        per_n,
        records,
    })
}

impl ScalingTrials {
    /// Log-log least-squares fit on the per-n means. Fails when some n has
    /// fewer than 80% conclusive trials or a zero mean.
    pub fn fit(self, spec: &GraphonSpec) -> Result<ScalingReport> {
        for s in &self.per_n {
            if (s.conclusive as f64) < MIN_CONCLUSIVE_SHARE * s.trials as f64 {
                return Err(Error::InsufficientData(format!(
                    "only {}/{} conclusive trials at n={} (budget exceeded); at least {:.0}% are required for a fit",
                    s.conclusive,
                    s.trials,
                    s.n,
                    MIN_CONCLUSIVE_SHARE * 100.0
                )));
            }
        }
        let ns: Vec<f64> = self.per_n.iter().map(|s| s.n as f64).collect();
        let means: Vec<f64> = self.per_n.iter().map(|s| s.mean).collect();
        let fit = fit_power_law(&ns, &means)?;
        let last = self.per_n.last().expect("grid has at least three values");
        Ok(ScalingReport {
            empirical_constant: last.mean / (last.n as f64).powf(fit.exponent),
            fitted_exponent: fit.exponent,
            exponent_stderr: fit.stderr,
            predicted: predicted_constants(spec).ok(),
            markov_violations: self.per_n.iter().map(|s| s.markov_violations).sum(),
            spec_tag: self.spec_tag,
            method: self.method,
            seed: self.seed,
            trials: self.trials,
            n_grid: self.n_grid,
            per_n: self.per_n,
            records: self.records,
        })
    }
}

/// Scaling study: per-n clique statistics and a power-law fit of the means.
pub fn scaling_study(
    spec: &GraphonSpec,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    opts: &StudyOptions,
) -> Result<ScalingReport> {
    run_scaling_trials(spec, n_grid, trials, seed, opts)?.fit(spec)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub spec_tag: String,
    pub method: ScalingMethod,
    pub seed: u64,
    pub n: usize,
    pub trials: usize,
    pub conclusive: usize,
    pub mean: f64,
    pub std: f64,
    pub coefficient_of_variation: f64,
    pub min: usize,
    pub max: usize,
    /// `max / min`; infinite (serialized as null) when some trial found no clique.
    pub max_over_min: f64,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

/// Spread of the clique size over independent samples at one n.
pub fn concentration_check(
    spec: &GraphonSpec,
    n: usize,
    trials: usize,
    seed: u64,
    opts: &StudyOptions,
) -> Result<ConcentrationReport> {
    if trials < 10 {
        return Err(Error::InvalidParameter(format!("concentration check needs at least 10 trials, got {trials}")));
    }
    check_method(spec, &[n], opts)?;
    let records = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(spec, n, t, trial_seed(seed, n as u64, t as u64), opts))
        .collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = records.iter().filter(|r| r.conclusive).map(|r| r.clique_size).collect();
    if (sizes.len() as f64) < MIN_CONCLUSIVE_SHARE * trials as f64 || sizes.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "only {}/{trials} conclusive trials at n={n}",
            sizes.len()
        )));
    }
    let values: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
    let (mean, std) = mean_std(&values);
    let min = *sizes.iter().min().unwrap();
    let max = *sizes.iter().max().unwrap();
    Ok(ConcentrationReport {
        spec_tag: spec.to_string(),
        method: opts.method,
        seed,
        n,
        trials,
        conclusive: sizes.len(),
        mean,
        std,
        coefficient_of_variation: if mean > 0.0 { std / mean } else { 0.0 },
        min,
        max,
        max_over_min: if min > 0 { max as f64 / min as f64 } else { f64::INFINITY },
        records,
    })
}
