//! Property suites: coupling dominance, partition inequalities, interval
//! counts, Monte Carlo clique-count moments and the union-bound ceiling.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use rayon::prelude::*;
use serde::Serialize;

use super::seeds::{mix64, trial_seed};
use crate::clique::{exact_max_clique, greedy_colouring_bound, SolveBudget, Status};
use crate::error::{Error, Result};
use crate::graphon::{GraphonSpec, Interval};
use crate::moments::log_expected_cliques;
use crate::sampler::{
    count_in_interval, min_window_length, sample, uniform_sorted_coords, BitMatrix, Coupling, SampleConfig,
    SampledGraph,
};

/// Largest vertex count for which `moment_mc_check` enumerates k-subsets.
pub const MOMENT_MC_MAX_N: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub lower: String,
    pub upper: String,
    pub n: usize,
    pub trials: usize,
    pub passed: bool,
    pub subgraph_violations: usize,
    pub omega_violations: usize,
    /// Trials where neither solve settled the comparison within budget.
    pub inconclusive: usize,
    pub equal_omega: usize,
    pub omega_pairs: Vec<(usize, usize)>,
}

/// Samples coupled pairs and checks `lower ⊆ upper` bitwise and
/// `ω(lower) ≤ ω(upper)` on every trial.
pub fn dominance_suite(
    lower: &GraphonSpec,
    upper: &GraphonSpec,
    n: usize,
    trials: usize,
    seed: u64,
    budget: &SolveBudget,
) -> Result<DominanceReport> {
    let coupling = Coupling::new(lower.clone(), upper.clone());
    if !coupling.is_certified() {
        return Err(Error::Precondition(format!(
            "{lower} is not dominated by {upper} on the certification grid"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let pair = coupling.sample(n, trial_seed(seed, n as u64, t as u64))?;
            let subgraph = pair.lower.adjacency().is_subgraph_of(pair.upper.adjacency());
            let lo = exact_max_clique(&pair.lower, budget);
            let hi = exact_max_clique(&pair.upper, budget);
            let lo_ub = lo.upper_bound.unwrap_or(lo.size);
            // Some(true) settled and fine, Some(false) violation, None unsettled.
            let verdict = if lo.status == Status::Optimal && hi.status == Status::Optimal {
                Some(lo.size <= hi.size)
            } else if lo_ub <= hi.size {
                Some(true)
            } else if lo.size > hi.upper_bound.unwrap_or(hi.size) {
                Some(false)
            } else {
                None
            };
            Ok((subgraph, verdict, lo.size, hi.size))
        })
        .collect::<Result<Vec<_>>>()?;
    let subgraph_violations = outcomes.iter().filter(|o| !o.0).count();
    let omega_violations = outcomes.iter().filter(|o| o.1 == Some(false)).count();
    let inconclusive = outcomes.iter().filter(|o| o.1.is_none()).count();
    Ok(DominanceReport {
        lower: lower.to_string(),
        upper: upper.to_string(),
        n,
        trials,
        passed: subgraph_violations == 0 && omega_violations == 0,
        subgraph_violations,
        omega_violations,
        inconclusive,
        equal_omega: outcomes.iter().filter(|o| o.2 == o.3).count(),
        omega_pairs: outcomes.iter().map(|o| (o.2, o.3)).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionTrial {
    pub trial: usize,
    pub seed: u64,
    pub omega: usize,
    pub part_sizes: Vec<usize>,
    pub part_omegas: Vec<usize>,
    pub conclusive: bool,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub spec: String,
    pub n: usize,
    pub cut_points: Vec<f64>,
    pub passed: bool,
    pub violations: usize,
    pub inconclusive: usize,
    pub trials: Vec<PartitionTrial>,
}

/// Splits each sample by coordinate at `cut_points` and checks
/// `max ω(part) ≤ ω(G) ≤ Σ ω(part)` with exact solves.
pub fn partition_suite(
    spec: &GraphonSpec,
    n: usize,
    cut_points: &[f64],
    trials: usize,
    seed: u64,
    budget: &SolveBudget,
) -> Result<PartitionReport> {
    if cut_points.iter().any(|c| !(*c > 0.0 && *c < 1.0)) || cut_points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "cut points must be strictly increasing and lie strictly inside (0, 1)".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, n as u64, t as u64);
            let g = sample(&SampleConfig::full(spec.clone(), n, s))?;
            let mut bounds = vec![0usize];
            bounds.extend(cut_points.iter().map(|&c| g.coords().partition_point(|&x| x < c)));
            bounds.push(n);
            let whole = exact_max_clique(&g, budget);
            let mut conclusive = whole.status == Status::Optimal;
            let mut part_sizes = Vec::new();
            let mut part_omegas = Vec::new();
            for w in bounds.windows(2) {
                part_sizes.push(w[1] - w[0]);
                if w[1] == w[0] {
                    part_omegas.push(0);
                    continue;
                }
                let r = exact_max_clique(&g.induced_range(w[0], w[1]), budget);
                conclusive &= r.status == Status::Optimal;
                part_omegas.push(r.size);
            }
            let max_part = part_omegas.iter().copied().max().unwrap_or(0);
            let sum_parts: usize = part_omegas.iter().sum();
            Ok(PartitionTrial {
                trial: t,
                seed: s,
                omega: whole.size,
                lower_holds: max_part <= whole.size,
                upper_holds: whole.size <= sum_parts,
                part_sizes,
                part_omegas,
                conclusive,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = results.iter().filter(|r| r.conclusive && !(r.lower_holds && r.upper_holds)).count();
    Ok(PartitionReport {
        spec: spec.to_string(),
        n,
        cut_points: cut_points.to_vec(),
        passed: violations == 0,
        violations,
        inconclusive: results.iter().filter(|r| !r.conclusive).count(),
        trials: results,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalConfig {
    /// Sample size for the count check.
    pub count_n: usize,
    /// Window length for the count check.
    pub lambda: f64,
    /// Allowed relative deviation of the count from `n·λ`.
    pub count_tolerance: f64,
    /// Sample size for the shortest-window check.
    pub window_n: usize,
    /// The window must hold `⌈δ·n⌉` points.
    pub delta: f64,
    /// The shortest window must be at least `window_factor · δ / 2` long.
    pub window_factor: f64,
    pub required_rate: f64,
}

impl Default for IntervalConfig {
    fn default() -> Self {
        Self {
            count_n: 100_000,
            lambda: 0.01,
            count_tolerance: 0.1,
            window_n: 10_000,
            delta: 0.05,
            window_factor: 0.9,
            required_rate: 0.99,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub config: IntervalConfig,
    pub trials: usize,
    pub count_pass_rate: f64,
    pub window_pass_rate: f64,
    pub count_ratio_min: f64,
    pub count_ratio_max: f64,
    pub shortest_window_min: f64,
    pub passed: bool,
}

/// Draws uniform coordinate sets and checks interval counts and the
/// shortest window holding a fixed share of the points.
pub fn interval_suite(config: &IntervalConfig, trials: usize, seed: u64) -> Result<IntervalReport> {
    if trials < 100 {
        return Err(Error::InvalidParameter(format!("interval suite needs at least 100 trials, got {trials}")));
    }
    if !(config.lambda > 0.0 && config.lambda <= 1.0) || !(config.delta > 0.0 && config.delta <= 1.0) {
        return Err(Error::InvalidParameter("lambda and delta must lie in (0, 1]".into()));
    }
    let m = ((config.delta * config.window_n as f64).ceil() as usize).clamp(2, config.window_n.max(2));
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, config.count_n as u64, t as u64);
            let coords = uniform_sorted_coords(config.count_n, s);
            let mut rng = Pcg64Mcg::seed_from_u64(mix64(s, 1));
            let lo = rng.random::<f64>() * (1.0 - config.lambda);
            let window = Interval::new(lo, (lo + config.lambda).min(1.0))?;
            let ratio = count_in_interval(&coords, &window) as f64 / (config.count_n as f64 * config.lambda);
            let coords = uniform_sorted_coords(config.window_n, mix64(s, 2));
            let shortest = min_window_length(&coords, m)?;
            Ok((ratio, shortest))
        })
        .collect::<Result<Vec<_>>>()?;
    let count_ok = outcomes.iter().filter(|o| (o.0 - 1.0).abs() <= config.count_tolerance).count();
    let floor = config.window_factor * config.delta / 2.0;
    let window_ok = outcomes.iter().filter(|o| o.1 >= floor).count();
    let count_pass_rate = count_ok as f64 / trials as f64;
    let window_pass_rate = window_ok as f64 / trials as f64;
    Ok(IntervalReport {
        config: config.clone(),
        trials,
        count_pass_rate,
        window_pass_rate,
        count_ratio_min: outcomes.iter().map(|o| o.0).fold(f64::INFINITY, f64::min),
        count_ratio_max: outcomes.iter().map(|o| o.0).fold(f64::NEG_INFINITY, f64::max),
        shortest_window_min: outcomes.iter().map(|o| o.1).fold(f64::INFINITY, f64::min),
        passed: count_pass_rate >= config.required_rate && window_pass_rate >= config.required_rate,
    })
}

/// Number of `k`-cliques in `adj`, by extending cliques in increasing vertex order.
pub fn count_k_cliques(adj: &BitMatrix, k: usize) -> u64 {
    fn extend(adj: &BitMatrix, cand: &[u64], left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        for (w, &word) in cand.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if left == 1 {
                    total += 1;
                    continue;
                }
                // later candidates adjacent to v
                let next: Vec<u64> = cand
                    .iter()
                    .zip(adj.row(v))
                    .enumerate()
                    .map(|(i, (&c, &r))| {
                        let keep = match i.cmp(&w) {
                            std::cmp::Ordering::Less => 0,
                            std::cmp::Ordering::Equal => bits,
                            std::cmp::Ordering::Greater => !0,
                        };
                        c & r & keep
                    })
                    .collect();
                total += extend(adj, &next, left - 1);
            }
        }
        total
    }
    let n = adj.n();
    if k == 0 {
        return 1;
    }
    if k > n {
        return 0;
    }
    let mut all = vec![!0u64; n.div_ceil(64)];
    if !n.is_multiple_of(64) {
        *all.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
    }
    extend(adj, &all, k)
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    pub spec: String,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub empirical_mean: f64,
    pub empirical_std: f64,
    pub analytic: f64,
    /// `(mean − analytic) / (std / √trials)`; 0 when both agree and the sample has no spread.
    pub z_score: f64,
}

/// Compares the average number of k-cliques over sampled graphs with the
/// analytic expectation.
pub fn moment_mc_check(spec: &GraphonSpec, n: usize, k: usize, trials: usize, seed: u64) -> Result<MomentCheck> {
    if n > MOMENT_MC_MAX_N {
        return Err(Error::Capacity(format!(
            "exact k-clique enumeration is limited to n <= {MOMENT_MC_MAX_N}, got {n}"
        )));
    }
    if trials < 2 {
        return Err(Error::InvalidParameter("moment check needs at least two trials".into()));
    }
    let analytic = log_expected_cliques(spec, n as u64, k as u64)?.log_expected.exp();
    let counts = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g: SampledGraph = sample(&SampleConfig::full(spec.clone(), n, trial_seed(seed, n as u64, t as u64)))?;
            Ok(count_k_cliques(g.adjacency(), k))
        })
        .collect::<Result<Vec<u64>>>()?;
    let m = trials as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / m;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt();
    let diff = mean - analytic;
    let z_score = if se > 0.0 {
        diff / se
    } else if diff.abs() <= 1e-9 * analytic.abs().max(1.0) {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(MomentCheck {
        spec: spec.to_string(),
        n,
        k,
        trials,
        empirical_mean: mean,
        empirical_std: var.sqrt(),
        analytic,
        z_score,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UnionBoundPerN {
    pub n: usize,
    pub delta: f64,
    /// `3·δ·n` with `δ = ln n / √n`.
    pub ceiling: f64,
    pub trials: usize,
    /// Largest proven upper bound on ω across trials.
    pub max_upper_bound: usize,
    /// Trials settled by the colouring bound alone.
    pub settled_by_colouring: usize,
    pub violations: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnionBoundReport {
    pub spec: String,
    pub passed: bool,
    pub per_n: Vec<UnionBoundPerN>,
}

/// Checks that sampled clique numbers stay below `3·ln n·√n`. The greedy
/// colouring bound settles most trials; the exact solver handles the rest.
pub fn union_bound_upper_check(
    spec: &GraphonSpec,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    budget: &SolveBudget,
) -> Result<UnionBoundReport> {
    if trials == 0 || n_grid.is_empty() {
        return Err(Error::InvalidParameter("need at least one n and one trial".into()));
    }
    let mut per_n = Vec::new();
    for &n in n_grid {
        if n < 2 {
            return Err(Error::InvalidParameter("n must be at least 2".into()));
        }
        let delta = (n as f64).ln() / (n as f64).sqrt();
        let ceiling = 3.0 * delta * n as f64;
        // (upper bound, settled by colouring, verdict) per trial
        let outcomes = (0..trials)
            .into_par_iter()
            .map(|t| {
                let g = sample(&SampleConfig::full(spec.clone(), n, trial_seed(seed, n as u64, t as u64)))?;
                let bound = greedy_colouring_bound(&g);
                if (bound as f64) < ceiling {
                    return Ok((bound, true, Some(true)));
                }
                let r = exact_max_clique(&g, budget);
                let ub = r.upper_bound.unwrap_or(r.size);
                let verdict = if (ub as f64) < ceiling {
                    Some(true)
                } else if r.size as f64 >= ceiling {
                    Some(false)
                } else {
                    None
                };
                Ok((ub, false, verdict))
            })
            .collect::<Result<Vec<_>>>()?;
        per_n.push(UnionBoundPerN {
            n,
            delta,
            ceiling,
            trials,
            max_upper_bound: outcomes.iter().map(|o| o.0).max().unwrap_or(0),
            settled_by_colouring: outcomes.iter().filter(|o| o.1).count(),
            violations: outcomes.iter().filter(|o| o.2 == Some(false)).count(),
            inconclusive: outcomes.iter().filter(|o| o.2.is_none()).count(),
        });
    }
    Ok(UnionBoundReport {
        spec: spec.to_string(),
        passed: per_n.iter().all(|p| p.violations == 0 && p.inconclusive == 0),
        per_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GraphonSpec {
        s.parse().unwrap()
    }

    #[test]
    fn clique_counts_on_small_graphs() {
        let k5 = BitMatrix::complete(5);
        assert_eq!(count_k_cliques(&k5, 3), 10);
        assert_eq!(count_k_cliques(&k5, 5), 1);
        assert_eq!(count_k_cliques(&k5, 6), 0);
        let k70 = BitMatrix::complete(70);
        assert_eq!(count_k_cliques(&k70, 2), 70 * 69 / 2);
        assert_eq!(count_k_cliques(&k70, 3), 70 * 69 * 68 / 6);
        let mut path = BitMatrix::new(4);
        path.add_edge(0, 1);
        path.add_edge(1, 2);
        path.add_edge(2, 3);
        assert_eq!(count_k_cliques(&path, 2), 3);
        assert_eq!(count_k_cliques(&path, 3), 0);
    }

    #[test]
    fn moment_check_trivial_cases() {
        let r = moment_mc_check(&spec("const:p=1"), 5, 3, 20, 0).unwrap();
        assert_eq!(r.empirical_mean, 10.0);
        assert_eq!(r.z_score, 0.0);
        let r = moment_mc_check(&spec("const:p=0"), 5, 2, 20, 0).unwrap();
        assert_eq!(r.empirical_mean, 0.0);
        assert_eq!(r.analytic, 0.0);
        assert!(moment_mc_check(&spec("sqrt:r=1"), 17, 3, 20, 0).is_err());
        assert!(matches!(moment_mc_check(&spec("line"), 10, 3, 20, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn dominance_with_itself_gives_equal_omega() {
        let b = SolveBudget::default();
        let r = dominance_suite(&spec("sqrt:r=1"), &spec("sqrt:r=1"), 150, 10, 4, &b).unwrap();
        assert!(r.passed);
        assert_eq!(r.equal_omega, 10);
        assert!(matches!(
            dominance_suite(&spec("const:p=0.7"), &spec("const:p=0.3"), 50, 2, 0, &b),
            Err(Error::Precondition(_))
        ));
        let r = dominance_suite(&spec("const:p=0.3"), &spec("const:p=0.7"), 200, 10, 1, &b).unwrap();
        assert!(r.passed && r.subgraph_violations == 0);
    }

    #[test]
    fn partition_edge_cases() {
        let b = SolveBudget::default();
        let r = partition_suite(&spec("const:p=1"), 40, &[0.3, 0.6], 3, 2, &b).unwrap();
        for t in &r.trials {
            assert_eq!(t.omega, 40);
            assert_eq!(t.part_omegas.iter().sum::<usize>(), 40);
            assert!(t.part_omegas.iter().all(|&w| w < 40));
        }
        let r = partition_suite(&spec("sqrt:r=1"), 120, &[], 3, 2, &b).unwrap();
        assert!(r.trials.iter().all(|t| t.part_omegas == vec![t.omega]));
        assert!(partition_suite(&spec("sqrt:r=1"), 50, &[0.5, 0.4], 1, 0, &b).is_err());
        assert!(partition_suite(&spec("sqrt:r=1"), 50, &[1.0], 1, 0, &b).is_err());
    }

    #[test]
    fn interval_suite_full_window() {
        let config = IntervalConfig { count_n: 2000, lambda: 1.0, window_n: 500, delta: 1.0, ..Default::default() };
        let r = interval_suite(&config, 100, 9).unwrap();
        assert_eq!(r.count_ratio_min, 1.0);
        assert_eq!(r.count_ratio_max, 1.0);
        assert!(r.shortest_window_min >= 0.9);
        assert!(r.passed);
        assert!(interval_suite(&config, 99, 9).is_err());
    }

    #[test]
    fn empty_graph_is_far_below_the_ceiling() {
        let r = union_bound_upper_check(&spec("const:p=0"), &[1024], 3, 0, &SolveBudget::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.per_n[0].max_upper_bound, 1);
    }
}
