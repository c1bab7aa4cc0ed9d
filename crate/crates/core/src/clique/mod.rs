//! Clique-number computation: exact branch-and-bound, the threshold-greedy
//! construction around a kernel maximizer, and a degree-greedy baseline.

mod exact;
mod greedy;

use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{Family, GraphonSpec};
use crate::sampler::SampledGraph;

pub use exact::{exact_max_clique, exact_max_clique_from, greedy_colouring_bound};
pub use greedy::{degree_greedy_clique, threshold_greedy_clique, threshold_greedy_in};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    ThresholdGreedy,
    DegreeGreedy,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ThresholdGreedy => "threshold_greedy",
            Method::DegreeGreedy => "degree_greedy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    LowerBound,
    BudgetExceeded,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveStats {
    /// Branch-and-bound nodes (exact) or candidate vertices scanned (heuristics).
    pub nodes: u64,
    /// Missing edges found among the threshold-greedy candidates.
    pub missing_edges: u64,
    /// Vertices deleted by the threshold-greedy repair.
    pub deletions: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CliqueResult {
    pub method: Method,
    pub size: usize,
    pub status: Status,
    pub vertices: Vec<usize>,
    pub stats: SolveStats,
    /// Proven upper bound on ω when one is available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl CliqueResult {
    pub(crate) fn new(method: Method, status: Status, mut vertices: Vec<usize>, stats: SolveStats) -> Self {
        vertices.sort_unstable();
        Self {
            method,
            size: vertices.len(),
            status,
            vertices,
            stats,
            upper_bound: None,
            warning: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("clique result serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
}

impl Default for SolveBudget {
    fn default() -> Self {
        Self { max_nodes: 10_000_000, max_millis: 60_000 }
    }
}

impl SolveBudget {
    pub fn new(max_nodes: u64, max_millis: u64) -> Result<Self> {
        if max_nodes == 0 || max_millis == 0 {
            return Err(Error::InvalidParameter("solve budget limits must be positive".into()));
        }
        Ok(Self { max_nodes, max_millis })
    }

    pub fn max_duration(&self) -> Duration {
        Duration::from_millis(self.max_millis)
    }
}

/// True iff every pair of `vertices` is adjacent.
pub fn verify_clique(graph: &SampledGraph, vertices: &[usize]) -> Result<bool> {
    let n = graph.n();
    if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let adj = graph.adjacency();
    Ok(vertices
        .iter()
        .enumerate()
        .all(|(a, &u)| vertices[a + 1..].iter().all(|&v| u != v && adj.has_edge(u, v))))
}

/// Center and half-width of the threshold-greedy window for the built-in
/// families, at the scale used by their lower-bound constructions.
pub fn default_threshold(spec: &GraphonSpec, n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidParameter("default threshold needs n >= 2".into()));
    }
    if spec.window().is_some() {
        return Err(Error::Unsupported(
            "no default threshold for a restricted spec; pass --threshold and --center explicitly".into(),
        ));
    }
    let nf = n as f64;
    let e = std::f64::consts::E;
    let poly = |r: f64, n: f64| (-2.0 / (1.0 + r)).exp() * n.powf(-1.0 / (r + 1.0));
    let sqrt = |r: f64| (3.0 * e * r).powf(-0.5) * nf.powf(-0.5);
    let (center, t) = match spec.family() {
        Family::Sqrt { r } => (0.0, sqrt(*r)),
        Family::Poly { r } => (0.0, poly(*r, nf)),
        Family::Holder { alpha, c } => {
            // support [0, λ] with λ = C^{-1/α}; on it the kernel is U_α rescaled to λn points
            let lambda = c.powf(-1.0 / alpha);
            (0.0, lambda * poly(*alpha, lambda * nf))
        }
        Family::Line => (0.5, nf.ln() / nf.sqrt()),
        Family::FlatExp => (0.0, 1.0 / nf.ln().sqrt()),
        Family::Oscillating => (0.0, sqrt(1.0)),
        Family::Constant { .. } | Family::Rank1(_) => {
            return Err(Error::Unsupported(format!(
                "no known maximizer for {}; pass --threshold and --center explicitly",
                spec.family_name()
            )))
        }
    };
    Ok((center, t.min(1.0)))
}
