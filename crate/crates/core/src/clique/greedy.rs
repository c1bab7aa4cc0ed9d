use std::time::Instant;

use super::{CliqueResult, Method, SolveStats, Status};
use crate::error::{Error, Result};
use crate::graphon::Interval;
use crate::sampler::{iter_bits, words_for, SampledGraph};

/// Takes every vertex with `|x - center| ≤ threshold`, then repeatedly
/// deletes the vertex incident to the most missing edges (lowest id on
/// ties) until the survivors form a clique.
pub fn threshold_greedy_clique(graph: &SampledGraph, center: f64, threshold: f64) -> Result<CliqueResult> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidParameter(format!("threshold must be positive, got {threshold}")));
    }
    let start = Instant::now();
    let coords = graph.coords();
    let a = coords.partition_point(|&x| x < center - threshold);
    let b = coords.partition_point(|&x| x <= center + threshold);
    let m = b.saturating_sub(a);
    if m == 0 {
        let mut r = CliqueResult::new(Method::ThresholdGreedy, Status::LowerBound, Vec::new(), SolveStats::default());
        r.warning = Some(format!("no vertices within {threshold} of {center}"));
        r.stats.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        return Ok(r);
    }
    let sub = graph.adjacency().induced_range(a, b);
    let words = words_for(m);
    let tail_mask = if m % 64 == 0 { u64::MAX } else { (1u64 << (m % 64)) - 1 };
    // missing[v] = S \ (N(v) ∪ {v})
    let mut missing = vec![0u64; m * words];
    let mut mdeg = vec![0usize; m];
    let mut total = 0u64;
    for v in 0..m {
        let row = sub.row(v);
        let out = &mut missing[v * words..(v + 1) * words];
        for (w, (o, r)) in out.iter_mut().zip(row).enumerate() {
            *o = !r;
            if w == words - 1 {
                *o &= tail_mask;
            }
        }
        out[v / 64] &= !(1u64 << (v % 64));
        mdeg[v] = out.iter().map(|w| w.count_ones() as usize).sum();
        total += mdeg[v] as u64;
    }
    total /= 2;
    let mut alive = vec![true; m];
    let mut remaining = total;
    let mut deletions = 0u64;
    while remaining > 0 {
        let mut pick = usize::MAX;
        let mut most = 0;
        for v in 0..m {
            if alive[v] && mdeg[v] > most {
                most = mdeg[v];
                pick = v;
            }
        }
        alive[pick] = false;
        deletions += 1;
        remaining -= most as u64;
        for u in iter_bits(&missing[pick * words..(pick + 1) * words]).collect::<Vec<_>>() {
            if alive[u] {
                mdeg[u] -= 1;
                missing[u * words + pick / 64] &= !(1u64 << (pick % 64));
            }
        }
        mdeg[pick] = 0;
    }
    let vertices: Vec<usize> = (0..m).filter(|&v| alive[v]).map(|v| a + v).collect();
    let stats = SolveStats {
        nodes: m as u64,
        missing_edges: total,
        deletions,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let r = CliqueResult::new(Method::ThresholdGreedy, Status::LowerBound, vertices, stats);
    debug_assert!(super::verify_clique(graph, &r.vertices).unwrap());
    Ok(r)
}

/// Like [`threshold_greedy_clique`] but with the window given as an interval.
pub fn threshold_greedy_in(graph: &SampledGraph, window: &Interval) -> Result<CliqueResult> {
    let c = 0.5 * (window.lo() + window.hi());
    threshold_greedy_clique(graph, c, 0.5 * window.length())
}

/// Scans vertices by descending degree (lowest id on ties) and keeps each
/// one adjacent to everything kept so far.
pub fn degree_greedy_clique(graph: &SampledGraph) -> CliqueResult {
    let start = Instant::now();
    let adj = graph.adjacency();
    let n = adj.n();
    let deg: Vec<usize> = (0..n).map(|v| adj.degree(v)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    let mut clique: Vec<usize> = Vec::new();
    for &v in &order {
        if clique.iter().all(|&u| adj.has_edge(u, v)) {
            clique.push(v);
        }
    }
    let stats = SolveStats { nodes: n as u64, elapsed_ms: start.elapsed().as_secs_f64() * 1e3, ..Default::default() };
    let r = CliqueResult::new(Method::DegreeGreedy, Status::LowerBound, clique, stats);
    debug_assert!(super::verify_clique(graph, &r.vertices).unwrap());
    r
}
