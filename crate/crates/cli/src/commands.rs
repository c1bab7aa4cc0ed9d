use std::io::Write;

use graphon_lab::clique::{
    default_threshold, degree_greedy_clique, exact_max_clique, threshold_greedy_clique, CliqueResult, SolveBudget,
};
use graphon_lab::experiments::{
    concentration_check, dominance_suite, interval_suite, moment_mc_check, partition_suite, scaling_study,
    scaling_summary, union_bound_upper_check, write_scaling_run, IntervalConfig, ScalingMethod, StudyOptions,
    ThresholdRule, SCHEMA_VERSION,
};
use graphon_lab::graphon::{classify_regime, DiniConfig, Regime};
use graphon_lab::moments::{first_moment_cutoff, log_expected_cliques, variance_ratio};
use graphon_lab::sampler::{read_edge_list, sample, sample_below_threshold, write_edge_list, SampleConfig};
use graphon_lab::{Error, GraphonSpec, SampledGraph};
use serde_json::{json, Value};

use crate::args::*;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or inputs; exit status 2.
    Usage(String),
    /// A suite ran and reported a violation; exit status 1.
    Suite,
    /// Anything else that went wrong while running; exit status 1.
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::Capacity(_)
            | Error::Unsupported(_)
            | Error::Precondition(_)
            | Error::Parse(_)
            | Error::VertexOutOfRange { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Adds the provenance fields to a JSON object.
fn envelope(command: &str, spec: Option<String>, seed: Option<u64>, body: Value) -> Value {
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "spec": spec,
        "seed": seed,
        "version": VERSION,
    });
    if let (Some(o), Value::Object(b)) = (out.as_object_mut(), body) {
        o.extend(b);
    }
    out
}

fn emit(out: &mut dyn Write, v: &Value) -> Outcome {
    writeln!(out, "{v}")?;
    Ok(())
}

fn budget(b: &Budget) -> Result<SolveBudget, Failure> {
    SolveBudget::new(b.budget_nodes, b.budget_ms).map_err(|_| usage("--budget-nodes and --budget-ms must be positive"))
}

/// Explicit window from `--threshold`/`--center`, the center defaulting to
/// the family's maximizer.
fn explicit_window(w: &Window, spec: Option<&GraphonSpec>) -> Result<Option<(f64, f64)>, Failure> {
    let Some(t) = w.threshold else { return Ok(None) };
    if !(t > 0.0 && t <= 1.0) {
        return Err(usage(format!("--threshold {t} must lie in (0, 1]")));
    }
    let center = match (w.center, spec) {
        (Some(c), _) => c,
        (None, Some(s)) => {
            default_threshold(s, 2).map_err(|_| usage(format!("--threshold needs --center for {s}")))?.0
        }
        (None, None) => return Err(usage("--threshold needs --center for a graph read from a file")),
    };
    Ok(Some((center, t)))
}

pub fn sample_cmd(a: &SampleArgs, out: &mut dyn Write) -> Outcome {
    let g = match explicit_window(&a.window, Some(&a.graphon))? {
        Some((center, t)) => sample_below_threshold(
            &SampleConfig::below_threshold(a.graphon.clone(), a.n, a.seed, t, center).with_max_vertices(a.max_vertices),
        )?,
        None => sample(&SampleConfig::full(a.graphon.clone(), a.n, a.seed).with_max_vertices(a.max_vertices))?,
    };
    write_edge_list(&g, &a.out)?;
    emit(
        out,
        &envelope(
            "sample",
            Some(a.graphon.to_string()),
            Some(a.seed),
            json!({
                "n": a.n,
                "vertices": g.n(),
                "edges": g.edge_count(),
                "window": g.sampling_window().map(|w| [w.lo(), w.hi()]),
                "path": a.out.display().to_string(),
            }),
        ),
    )
}

fn clique_json(r: &CliqueResult, labels: Option<&[usize]>) -> (Value, f64) {
    let mut v = r.to_json();
    let elapsed = r.stats.elapsed_ms;
    if let Some(stats) = v.get_mut("stats").and_then(Value::as_object_mut) {
        stats.remove("elapsed_ms");
    }
    if let Some(labels) = labels {
        let mut ids: Vec<usize> = r.vertices.iter().map(|&i| labels[i]).collect();
        ids.sort_unstable();
        v["vertices"] = json!(ids);
    }
    (v, elapsed)
}

pub fn clique_cmd(a: &CliqueArgs, out: &mut dyn Write) -> Outcome {
    let (g, spec, seed): (SampledGraph, Option<&GraphonSpec>, Option<u64>) = match (&a.input, &a.graphon) {
        (Some(path), None) => (read_edge_list(path)?, None, None),
        (None, Some(spec)) => {
            let n = a.n.ok_or_else(|| usage("--n is required with --graphon"))?;
            let g = sample(&SampleConfig::full(spec.clone(), n, a.seed).with_max_vertices(a.max_vertices))?;
            (g, Some(spec), Some(a.seed))
        }
        _ => return Err(usage("give exactly one of --graphon or --in")),
    };
    let r = match a.method {
        CliqueMethod::Exact => exact_max_clique(&g, &budget(&a.budget)?),
        CliqueMethod::DegreeGreedy => degree_greedy_clique(&g),
        CliqueMethod::ThresholdGreedy => {
            let (center, t) = match (explicit_window(&a.window, spec)?, spec) {
                (Some(w), _) => w,
                (None, Some(s)) => default_threshold(s, g.n())?,
                (None, None) => return Err(usage("threshold_greedy on a file needs --threshold and --center")),
            };
            threshold_greedy_clique(&g, center, t)?
        }
    };
    let labels = a.input.as_ref().map(|_| g.perm());
    let (result, elapsed) = clique_json(&r, labels);
    let mut body = json!({ "n": g.n(), "result": result, "meta": { "elapsed_ms": elapsed } });
    if let Some(path) = &a.input {
        body["input"] = json!(path.display().to_string());
    }
    emit(out, &envelope("clique", spec.map(|s| s.to_string()), seed, body))
}

pub fn moments_cmd(a: &MomentsArgs, out: &mut dyn Write) -> Outcome {
    if a.table {
        writeln!(out, "n,k,log_expected")?;
    }
    for k in a.k.iter() {
        let r = log_expected_cliques(&a.graphon, a.n, k)?;
        if a.table {
            writeln!(out, "{},{},{}", r.n, r.k, r.log_expected)?;
        } else {
            let body = serde_json::to_value(&r).map_err(|e| Failure::Runtime(e.to_string()))?;
            emit(out, &envelope("moments", Some(a.graphon.to_string()), None, body))?;
        }
    }
    Ok(())
}

pub fn cutoff_cmd(a: &CutoffArgs, out: &mut dyn Write) -> Outcome {
    let r = first_moment_cutoff(&a.graphon, a.n)?;
    let body = serde_json::to_value(&r).map_err(|e| Failure::Runtime(e.to_string()))?;
    emit(out, &envelope("cutoff", Some(a.graphon.to_string()), None, body))
}

pub fn variance_cmd(a: &VarianceArgs, out: &mut dyn Write) -> Outcome {
    if a.table {
        writeln!(out, "n,k,log_expected,log_ratio")?;
    }
    for k in a.k.iter() {
        let r = variance_ratio(&a.graphon, a.n, k)?;
        if a.table {
            let e = log_expected_cliques(&a.graphon, a.n, k)?;
            writeln!(out, "{},{},{},{}", r.n, r.k, e.log_expected, r.log_ratio)?;
        } else {
            let body = serde_json::to_value(&r).map_err(|e| Failure::Runtime(e.to_string()))?;
            emit(out, &envelope("variance", Some(a.graphon.to_string()), None, body))?;
        }
    }
    Ok(())
}

fn study_options(s: &StudyFlags, spec: &GraphonSpec) -> Result<StudyOptions, Failure> {
    let method = match s.method {
        StudyMethod::Exact => ScalingMethod::Exact,
        StudyMethod::ThresholdGreedy => ScalingMethod::ThresholdGreedy,
        StudyMethod::DegreeGreedy => ScalingMethod::DegreeGreedy,
        StudyMethod::BestOf => ScalingMethod::BestOf,
    };
    let mut opts = StudyOptions::new(method);
    opts.budget = budget(&s.budget)?;
    opts.exact_max_n = s.exact_max_n;
    opts.max_vertices = s.max_vertices;
    if let Some((center, t)) = explicit_window(&s.window, Some(spec))? {
        opts.threshold = ThresholdRule::Fixed { center, t };
    }
    Ok(opts)
}

pub fn scaling_cmd(a: &ScalingArgs, out: &mut dyn Write) -> Outcome {
    let opts = study_options(&a.study, &a.graphon)?;
    let report = scaling_study(&a.graphon, &a.n_grid.0, a.trials, a.study.seed, &opts)?;
    if let Some(root) = &a.out {
        let dir = write_scaling_run(root, &report)?;
        eprintln!("wrote {}", dir.display());
    }
    let mut summary = scaling_summary(&report);
    summary["command"] = json!("scaling");
    emit(out, &summary)
}

pub fn concentration_cmd(a: &ConcentrationArgs, out: &mut dyn Write) -> Outcome {
    let opts = study_options(&a.study, &a.graphon)?;
    let r = concentration_check(&a.graphon, a.n, a.trials, a.study.seed, &opts)?;
    let body = serde_json::to_value(&r).map_err(|e| Failure::Runtime(e.to_string()))?;
    emit(out, &envelope("concentration", Some(a.graphon.to_string()), Some(a.study.seed), body))
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, suite: &str) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| usage(format!("--{flag} is required for --suite {suite}")))
}

pub fn check_cmd(a: &CheckArgs, out: &mut dyn Write) -> Outcome {
    let b = budget(&a.budget)?;
    let (name, spec, passed, body): (&str, Option<String>, bool, Value) = match a.suite {
        Suite::Dominance => {
            let (lo, hi) = (need(&a.lower, "lower", "dominance")?, need(&a.upper, "upper", "dominance")?);
            let n = *need(&a.n, "n", "dominance")?;
            let r = dominance_suite(lo, hi, n, a.trials.unwrap_or(50), a.seed, &b)?;
            (
                "dominance",
                Some(format!("{lo} <= {hi}")),
                r.passed,
                serde_json::to_value(&r).map_err(|e| Failure::Runtime(e.to_string()))?,
            )
        }
        Suite::Partition => {
            let spec = need(&a.graphon, "graphon", "partition")?;
            let n = *need(&a.n, "n", "partition")?;
            let cuts = a.cuts.as_ref().map_or_else(|| vec![0.5], |c| c.0.clone());
            let r = partition_suite(spec, n, &cuts, a.trials.unwrap_or(20), a.seed, &b)?;
            ("partition", Some(spec.to_string()), r.passed, serde_json::to_value(&r).unwrap())
        }
        Suite::Interval => {
            let r = interval_suite(&IntervalConfig::default(), a.trials.unwrap_or(100), a.seed)?;
            ("interval", None, r.passed, serde_json::to_value(&r).unwrap())
        }
        Suite::MomentMc => {
            let spec = need(&a.graphon, "graphon", "moment-mc")?;
            let n = *need(&a.n, "n", "moment-mc")?;
            let k = *need(&a.k, "k", "moment-mc")?;
            let r = moment_mc_check(spec, n, k, a.trials.unwrap_or(100_000), a.seed)?;
            let passed = r.z_score.abs() <= 3.0;
            ("moment-mc", Some(spec.to_string()), passed, serde_json::to_value(&r).unwrap())
        }
        Suite::UnionBound => {
            let spec = a.graphon.clone().unwrap_or_else(GraphonSpec::line);
            let grid = need(&a.n_grid, "n-grid", "union-bound")?;
            let r = union_bound_upper_check(&spec, &grid.0, a.trials.unwrap_or(20), a.seed, &b)?;
            ("union-bound", Some(spec.to_string()), r.passed, serde_json::to_value(&r).unwrap())
        }
        Suite::Regime => {
            let spec = need(&a.graphon, "graphon", "regime")?;
            let r = classify_regime(spec, a.at, &DiniConfig::default())?;
            let passed = r.regime != Regime::Unknown;
            ("regime", Some(spec.to_string()), passed, serde_json::to_value(&r).unwrap())
        }
    };
    let mut v = envelope("check", spec, Some(a.seed), json!({ "suite": name, "passed": passed }));
    v["report"] = body;
    emit(out, &v)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Suite)
    }
}
