//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! The process exits 0 regardless of outcome unless `ACCEPTANCE_STRICT=1`
//! is set. `ACCEPTANCE_ONLY=2,5` runs a subset.

use std::time::Instant;

use graphon_lab::clique::{exact_max_clique, verify_clique, SolveBudget, Status};
use graphon_lab::experiments::{
    dominance_suite, interval_suite, moment_mc_check, partition_suite, run_scaling_trials, trial_seed,
    union_bound_upper_check, IntervalConfig, ScalingMethod, ScalingReport, StudyOptions,
};
use graphon_lab::graphon::{classify_regime, DiniConfig, Regime};
use graphon_lab::moments::{log_choose, log_profile_moment, variance_ratio};
use graphon_lab::sampler::{sample, SampleConfig};
use graphon_lab::{GraphonSpec, SampledGraph};

/// `E[X_k²] / E[X_k]²` for SqrtFamily(1) at n = 6400, k = 80, frozen from the first run.
const FROZEN_VARIANCE_RATIO_6400: f64 = 82_455_906_856_467.98;

type Outcome = (bool, String);

fn spec(s: &str) -> GraphonSpec {
    s.parse().unwrap()
}

fn pow2_grid() -> Vec<usize> {
    (10..=14).map(|e| 1usize << e).collect()
}

fn fmt_per_n(r: &ScalingReport) -> String {
    r.per_n.iter().map(|s| format!("{}:{:.1}", s.n, s.mean)).collect::<Vec<_>>().join(" ")
}

fn er_baseline() -> Outcome {
    let start = Instant::now();
    let g = spec("const:p=0.5");
    let sizes: Vec<usize> = (0..20u64)
        .map(|s| {
            let graph = sample(&SampleConfig::full(g.clone(), 512, trial_seed(0, 512, s))).unwrap();
            let r = exact_max_clique(&graph, &SolveBudget::default());
            assert_eq!(r.status, Status::Optimal);
            r.size
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = sizes.iter().all(|&w| (15..=21).contains(&w)) && secs < 120.0;
    (ok, format!("omega over 20 seeds {sizes:?}, band [15, 21], {secs:.1}s"))
}

fn scaling(text: &str, trials: usize) -> (ScalingReport, f64) {
    let start = Instant::now();
    let opts = StudyOptions::new(ScalingMethod::ThresholdGreedy);
    let s = spec(text);
    let report = run_scaling_trials(&s, &pow2_grid(), trials, 0, &opts).unwrap().fit(&s).unwrap();
    (report, start.elapsed().as_secs_f64())
}

fn sqrt_scaling(r: &ScalingReport, secs: f64) -> Outcome {
    let ok = (0.45..=0.55).contains(&r.fitted_exponent) && (0.17..=1.65).contains(&r.empirical_constant) && secs < 300.0;
    (
        ok,
        format!(
            "exponent {:.4} ± {:.4}, constant {:.4}, {secs:.1}s; means {}",
            r.fitted_exponent,
            r.exponent_stderr,
            r.empirical_constant,
            fmt_per_n(r)
        ),
    )
}

fn poly_scaling(two: &ScalingReport, half: &ScalingReport) -> Outcome {
    let ok = (0.60..=0.73).contains(&two.fitted_exponent) && (0.26..=0.41).contains(&half.fitted_exponent);
    (
        ok,
        format!(
            "r=2 exponent {:.4} ± {:.4} in [0.60, 0.73]; r=1/2 exponent {:.4} ± {:.4} in [0.26, 0.41]",
            two.fitted_exponent, two.exponent_stderr, half.fitted_exponent, half.exponent_stderr
        ),
    )
}

fn markov(reports: &[&ScalingReport]) -> Outcome {
    let mut checked = 0;
    let mut violations = 0;
    let mut total = 0;
    let mut tightest = f64::INFINITY;
    for r in reports {
        for s in &r.per_n {
            total += s.trials;
            checked += s.markov_checked;
            violations += s.markov_violations;
        }
        for rec in &r.records {
            let cutoff = r.per_n.iter().find(|s| s.n == rec.n).and_then(|s| s.first_moment_cutoff);
            if let (Some(b), Some(k)) = (rec.best_of, cutoff) {
                tightest = tightest.min(k as f64 - b as f64);
            }
        }
    }
    (
        violations == 0 && checked == total,
        format!("{checked}/{total} trials checked, {violations} above the cutoff, smallest gap {tightest}"),
    )
}

fn first_moment() -> Outcome {
    let mc = moment_mc_check(&spec("sqrt:r=1"), 12, 3, 100_000, 0).unwrap();
    let (a, b) = (spec("sqrt:r=1"), spec("poly:r=1"));
    let top = 10_000u64;
    let la: Vec<f64> = (0..top).map(|m| log_profile_moment(&a, m).unwrap().0).collect();
    let lb: Vec<f64> = (0..top).map(|m| log_profile_moment(&b, m).unwrap().0).collect();
    let mut worst = 0.0f64;
    for n in 1..=top {
        for k in 1..=n {
            let c = log_choose(n, k);
            let x = c + k as f64 * la[(k - 1) as usize];
            let y = c + k as f64 * lb[(k - 1) as usize];
            worst = worst.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    let ok = mc.z_score.abs() <= 3.0 && (mc.analytic - 8.148).abs() < 5e-4 && worst <= 1e-9;
    (
        ok,
        format!(
            "empirical {:.4} vs analytic {:.4}, z = {:.3}; worst r=1 gap {worst:.2e}",
            mc.empirical_mean, mc.analytic, mc.z_score
        ),
    )
}

fn variance_blow_up() -> Outcome {
    let s = spec("sqrt:r=1");
    let ratios: Vec<f64> = [100u64, 400, 1600, 6400]
        .iter()
        .map(|&n| variance_ratio(&s, n, (n as f64).sqrt().ceil() as u64).unwrap().log_ratio.exp())
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let last = ratios[3];
    let frozen = (last / FROZEN_VARIANCE_RATIO_6400 - 1.0).abs() <= 1e-9;
    (increasing && last > 10.0 && frozen, format!("ratios {ratios:?}, frozen {FROZEN_VARIANCE_RATIO_6400}"))
}

fn coupling_and_partition() -> Outcome {
    let b = SolveBudget::default();
    let d = dominance_suite(&spec("poly:r=1"), &spec("poly:r=2"), 500, 50, 0, &b).unwrap();
    let p = partition_suite(&spec("sqrt:r=1"), 300, &[0.5], 20, 0, &b).unwrap();
    let ok = d.passed && d.inconclusive == 0 && p.passed && p.inconclusive == 0;
    (
        ok,
        format!(
            "dominance: {} subgraph and {} omega violations, {} inconclusive; partition: {} violations, {} inconclusive",
            d.subgraph_violations, d.omega_violations, d.inconclusive, p.violations, p.inconclusive
        ),
    )
}

fn intervals() -> Outcome {
    let r = interval_suite(&IntervalConfig::default(), 200, 0).unwrap();
    (
        r.passed,
        format!(
            "count pass rate {:.3} (ratios {:.3}..{:.3}), window pass rate {:.3} (shortest {:.4} vs floor {:.4})",
            r.count_pass_rate,
            r.count_ratio_min,
            r.count_ratio_max,
            r.window_pass_rate,
            r.shortest_window_min,
            0.9 * 0.05 / 2.0
        ),
    )
}

fn line_graphon() -> Outcome {
    let s = spec("line");
    let mut opts = StudyOptions::new(ScalingMethod::Exact);
    opts.exact_max_n = 2048;
    opts.markov_check = false;
    let start = Instant::now();
    let trials = run_scaling_trials(&s, &[256, 512, 1024, 2048], 3, 0, &opts).unwrap();
    let conclusive: Vec<String> =
        trials.per_n.iter().map(|p| format!("{}:{}/{}", p.n, p.conclusive, p.trials)).collect();
    let fit = trials.fit(&s);
    let secs = start.elapsed().as_secs_f64();
    let ub = union_bound_upper_check(&s, &[256, 512, 1024, 2048, 4096], 20, 0, &SolveBudget::default()).unwrap();
    let ub_text = ub
        .per_n
        .iter()
        .map(|p| format!("{}: bound {} < {:.0}", p.n, p.max_upper_bound, p.ceiling))
        .collect::<Vec<_>>()
        .join(", ");
    match fit {
        Ok(r) => (
            (0.45..=0.70).contains(&r.fitted_exponent) && ub.passed,
            format!("exponent {:.4}; union bound {}: {ub_text}", r.fitted_exponent, ub.passed),
        ),
        Err(e) => (
            false,
            format!(
                "no fit ({e}); conclusive {} after {secs:.0}s; union bound passed={}: {ub_text}",
                conclusive.join(" "),
                ub.passed
            ),
        ),
    }
}

fn flat_graphon() -> Outcome {
    let opts = StudyOptions::new(ScalingMethod::ThresholdGreedy);
    let floor = 4096f64.powf(0.7);
    let sizes: Vec<usize> = (0..20u64)
        .map(|t| {
            graphon_lab::experiments::run_trial(&GraphonSpec::flat_exp(), 4096, t as usize, trial_seed(0, 4096, t), &opts)
                .unwrap()
                .clique_size
        })
        .collect();
    let hits = sizes.iter().filter(|&&s| s as f64 >= floor).count();
    (hits >= 18, format!("{hits}/20 seeds reach {floor:.1}; sizes {sizes:?}"))
}

fn regimes() -> Outcome {
    let cases = [
        ("sqrt:r=0.5", Regime::ThetaSqrt),
        ("sqrt:r=1", Regime::ThetaSqrt),
        ("sqrt:r=2", Regime::ThetaSqrt),
        ("poly:r=2", Regime::OmegaSqrt),
        ("poly:r=3", Regime::OmegaSqrt),
        ("poly:r=0.3333333333333333", Regime::OSqrt),
        ("poly:r=0.5", Regime::OSqrt),
    ];
    let config = DiniConfig::default();
    let mut wrong = Vec::new();
    for (text, want) in cases {
        let got = classify_regime(&spec(text), 0.0, &config).unwrap().regime;
        if got != want {
            wrong.push(format!("{text}: {got:?}"));
        }
    }
    (wrong.is_empty(), format!("{}/7 correct {}", 7 - wrong.len(), wrong.join(", ")))
}

fn brute_force_omega(g: &SampledGraph) -> usize {
    let n = g.n();
    let nbr: Vec<u32> = (0..n)
        .map(|v| (0..n).filter(|&u| g.has_edge(u, v)).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let mut is_clique = vec![false; 1 << n];
    is_clique[0] = true;
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if is_clique[rest as usize] && rest & !nbr[v] == 0 {
            is_clique[mask as usize] = true;
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

fn exact_oracle() -> Outcome {
    let specs = ["const:p=0.3", "const:p=0.5", "const:p=0.8", "sqrt:r=1", "poly:r=2"];
    let mut mismatches = 0;
    let mut count = 0;
    for (s, text) in specs.iter().enumerate() {
        for i in 0..10u64 {
            let n = 11 + i as usize;
            let g = sample(&SampleConfig::full(spec(text), n, trial_seed(s as u64, n as u64, i))).unwrap();
            let r = exact_max_clique(&g, &SolveBudget::default());
            if r.status != Status::Optimal || !verify_clique(&g, &r.vertices).unwrap() || r.size != brute_force_omega(&g) {
                mismatches += 1;
            }
            count += 1;
        }
    }
    (mismatches == 0, format!("{mismatches} mismatches on {count} instances, n 11..20"))
}

fn main() {
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let wanted = |i: usize| only.as_ref().is_none_or(|o| o.contains(&i));
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");

    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |i: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        if !wanted(i) {
            return;
        }
        let start = Instant::now();
        let (ok, detail) = f();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {i:>2} {verdict} {name} ({:.1}s): {detail}", start.elapsed().as_secs_f64());
        results.push((i, name, (ok, detail)));
    };

    report(1, "ER clique number at n=512", &mut er_baseline);
    let need_scaling = wanted(2) || wanted(3) || wanted(4);
    let sqrt = need_scaling.then(|| scaling("sqrt:r=1", 10));
    let two = (wanted(3) || wanted(4)).then(|| scaling("poly:r=2", 10).0);
    let half = (wanted(3) || wanted(4)).then(|| scaling("poly:r=0.5", 100).0);
    if let Some((r, secs)) = &sqrt {
        report(2, "square-root family scaling", &mut || sqrt_scaling(r, *secs));
    }
    if let (Some(a), Some(b)) = (&two, &half) {
        report(3, "polynomial family scaling", &mut || poly_scaling(a, b));
        if let Some((s, _)) = &sqrt {
            report(4, "Markov upper bound", &mut || markov(&[s, a, b]));
        }
    }
    report(5, "first-moment oracle", &mut first_moment);
    report(6, "variance blow-up", &mut variance_blow_up);
    report(7, "coupling and partition suites", &mut coupling_and_partition);
    report(8, "interval suite", &mut intervals);
    report(9, "line graphon", &mut line_graphon);
    report(10, "flat graphon", &mut flat_graphon);
    report(11, "regime classifier", &mut regimes);
    report(12, "exact solver oracle", &mut exact_oracle);

    let failed: Vec<usize> = results.iter().filter(|r| !r.2 .0).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" (criteria {failed:?})") }
    );
    if strict && !failed.is_empty() {
        std::process::exit(1);
    }
}
