//! Bitset branch-and-bound maximum clique with greedy-colouring bounds.
//!
//! Vertices are renumbered by a degeneracy ordering (densest core first).
//! At each node the candidate set is greedily coloured in index order; a
//! vertex of colour `k` can extend the current clique by at most `k`, so
//! branching walks the colour list from the top and stops as soon as
//! `|C| + k` cannot beat the incumbent.

use std::time::Instant;

use super::{CliqueResult, Method, SolveBudget, SolveStats, Status};
use crate::sampler::{iter_bits, BitMatrix, SampledGraph};

/// Vertex order that repeatedly removes a minimum-degree vertex and places
/// it last; ties go to the lowest id.
fn degeneracy_order(adj: &BitMatrix) -> Vec<usize> {
    let n = adj.n();
    let mut deg: Vec<usize> = (0..n).map(|v| adj.degree(v)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in (0..n).rev() {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while order.len() < n {
        d = d.min(maxd);
        while buckets[d].is_empty() {
            d += 1;
        }
        let v = buckets[d].pop().unwrap();
        if removed[v] || deg[v] != d {
            continue;
        }
        removed[v] = true;
        order.push(v);
        for u in adj.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
                buckets[deg[u]].push(u);
                d = d.min(deg[u]);
            }
        }
    }
    order.reverse();
    order
}

struct Frame {
    p: Vec<u64>,
    u: Vec<u64>,
    q: Vec<u64>,
    verts: Vec<u32>,
    colours: Vec<u32>,
}

struct Search {
    rows: Vec<u64>,
    words: usize,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: SolveBudget,
    start: Instant,
    aborted: bool,
    frames: Vec<Frame>,
}

impl Search {
    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    fn frame(&mut self, depth: usize) -> Frame {
        if depth >= self.frames.len() {
            let w = self.words;
            self.frames.resize_with(depth + 1, || Frame {
                p: vec![0; w],
                u: vec![0; w],
                q: vec![0; w],
                verts: Vec::new(),
                colours: Vec::new(),
            });
        }
        std::mem::replace(
            &mut self.frames[depth],
            Frame { p: Vec::new(), u: Vec::new(), q: Vec::new(), verts: Vec::new(), colours: Vec::new() },
        )
    }

    /// Greedy sequential colouring of `f.p`; records vertices with colour ≥ `kmin`.
    fn colour(&self, f: &mut Frame, kmin: usize) -> usize {
        let words = self.words;
        f.verts.clear();
        f.colours.clear();
        f.u.copy_from_slice(&f.p);
        let mut lo = f.u.iter().position(|&w| w != 0).unwrap_or(words);
        let mut k = 0usize;
        while lo < words {
            k += 1;
            f.q[lo..].copy_from_slice(&f.u[lo..]);
            for w in lo..words {
                while f.q[w] != 0 {
                    let b = f.q[w].trailing_zeros() as usize;
                    let bit = 1u64 << b;
                    f.q[w] &= !bit;
                    f.u[w] &= !bit;
                    let v = w * 64 + b;
                    let row = self.row(v);
                    for (qw, rw) in f.q[w..].iter_mut().zip(&row[w..]) {
                        *qw &= !rw;
                    }
                    if k >= kmin {
                        f.verts.push(v as u32);
                        f.colours.push(k as u32);
                    }
                }
            }
            while lo < words && f.u[lo] == 0 {
                lo += 1;
            }
        }
        k
    }

    fn expand(&mut self, depth: usize) {
        self.nodes += 1;
        if self.nodes >= self.budget.max_nodes
            || (self.nodes & 1023 == 0 && self.start.elapsed() >= self.budget.max_duration())
        {
            self.aborted = true;
            return;
        }
        let mut f = self.frame(depth);
        let kmin = (self.best.len() + 1).saturating_sub(self.current.len());
        self.colour(&mut f, kmin);
        let mut child = self.frame(depth + 1);
        for idx in (0..f.verts.len()).rev() {
            if self.current.len() + f.colours[idx] as usize <= self.best.len() {
                break;
            }
            let v = f.verts[idx] as usize;
            self.current.push(v);
            let mut any = false;
            let row = self.row(v);
            for ((c, p), r) in child.p.iter_mut().zip(&f.p).zip(row) {
                *c = p & r;
                any |= *c != 0;
            }
            if any {
                self.frames[depth + 1] = child;
                self.expand(depth + 1);
                child = self.frame(depth + 1);
            } else if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            self.current.pop();
            f.p[v / 64] &= !(1u64 << (v % 64));
            if self.aborted {
                break;
            }
        }
        self.frames[depth + 1] = child;
        self.frames[depth] = f;
    }
}

/// Number of colours used by a greedy sequential colouring in degeneracy
/// order; an upper bound on ω.
pub fn greedy_colouring_bound(graph: &SampledGraph) -> usize {
    let adj = graph.adjacency();
    let order = degeneracy_order(adj);
    let re = adj.induced(&order);
    let words = re.words_per_row();
    let mut search = Search {
        rows: (0..re.n()).flat_map(|v| re.row(v).to_vec()).collect(),
        words,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget: SolveBudget::default(),
        start: Instant::now(),
        aborted: false,
        frames: Vec::new(),
    };
    let mut f = search.frame(0);
    for v in 0..re.n() {
        f.p[v / 64] |= 1u64 << (v % 64);
    }
    search.colour(&mut f, usize::MAX)
}

/// Greedy clique from the vertex order: keep each vertex adjacent to all kept so far.
fn initial_clique(rows: &[u64], words: usize, n: usize) -> Vec<usize> {
    let mut cand: Vec<u64> = vec![0; words];
    for v in 0..n {
        cand[v / 64] |= 1u64 << (v % 64);
    }
    let mut clique = Vec::new();
    while let Some(v) = { let next = iter_bits(&cand).next(); next } {
        clique.push(v);
        let row = &rows[v * words..(v + 1) * words];
        for (c, r) in cand.iter_mut().zip(row) {
            *c &= r;
        }
    }
    clique
}

/// Maximum clique by colour-bounded branch and bound. When the budget runs
/// out the best clique found so far is returned with `BudgetExceeded`.
pub fn exact_max_clique(graph: &SampledGraph, budget: &SolveBudget) -> CliqueResult {
    exact_max_clique_from(graph, budget, &[])
}

/// As [`exact_max_clique`], seeded with a known clique as the incumbent.
/// An invalid seed is ignored.
pub fn exact_max_clique_from(graph: &SampledGraph, budget: &SolveBudget, seed_clique: &[usize]) -> CliqueResult {
    let start = Instant::now();
    let adj = graph.adjacency();
    let n = adj.n();
    if n == 0 {
        let mut r = CliqueResult::new(Method::Exact, Status::Optimal, Vec::new(), SolveStats::default());
        r.upper_bound = Some(0);
        return r;
    }
    let order = degeneracy_order(adj);
    let re = adj.induced(&order);
    let words = re.words_per_row();
    let rows: Vec<u64> = (0..n).flat_map(|v| re.row(v).to_vec()).collect();
    let mut best = initial_clique(&rows, words, n);
    if seed_clique.len() > best.len() && super::verify_clique(graph, seed_clique).unwrap_or(false) {
        let mut rank = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        best = seed_clique.iter().map(|&v| rank[v]).collect();
    }
    let mut search = Search {
        rows,
        words,
        best,
        current: Vec::new(),
        nodes: 0,
        budget: *budget,
        start,
        aborted: false,
        frames: Vec::new(),
    };
    let mut root = search.frame(0);
    for v in 0..n {
        root.p[v / 64] |= 1u64 << (v % 64);
    }
    let colours = search.colour(&mut root, usize::MAX);
    search.frames[0] = root;
    if search.best.len() < colours {
        search.expand(0);
    }
    let status = if search.aborted { Status::BudgetExceeded } else { Status::Optimal };
    let vertices: Vec<usize> = search.best.iter().map(|&v| order[v]).collect();
    let stats = SolveStats {
        nodes: search.nodes,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        ..SolveStats::default()
    };
    let mut r = CliqueResult::new(Method::Exact, status, vertices, stats);
    r.upper_bound = Some(if search.aborted { colours } else { r.size });
    debug_assert!(super::verify_clique(graph, &r.vertices).unwrap());
    r
}
