//! Text edge-list export and import.
//!
//! Format: first line `n m`, then `m` lines `i j` (0-indexed, `i < j`).
//! Coordinates live in a companion file `<path>.coords`, one per line in
//! vertex order.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{BitMatrix, SampledGraph};
use crate::error::{Error, Result};

fn coords_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".coords");
    PathBuf::from(s)
}

/// Writes the edge list and its `.coords` companion.
pub fn write_edge_list(graph: &SampledGraph, path: &Path) -> Result<()> {
    let adj = graph.adjacency();
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{} {}", graph.n(), graph.edge_count())?;
    for i in 0..graph.n() {
        for j in adj.neighbors(i).filter(|&j| j > i) {
            writeln!(out, "{i} {j}")?;
        }
    }
    out.flush()?;
    let mut c = BufWriter::new(fs::File::create(coords_path(path))?);
    for x in graph.coords() {
        writeln!(c, "{x:?}")?;
    }
    c.flush()?;
    Ok(())
}

/// Reads an edge list. When a `.coords` companion exists, vertices are
/// relabelled in increasing coordinate order (ties by original id) and the
/// permutation records the file's ids; otherwise file order is kept and
/// placeholder coordinates are used.
pub fn read_edge_list(path: &Path) -> Result<SampledGraph> {
    let text = fs::read_to_string(path)?;
    let bad = |line: usize, msg: &str| Error::Parse(format!("{}:{}: {msg}", path.display(), line));
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| bad(1, "missing `n m` header"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(hl, "header must be two integers")))
        .collect::<Result<_>>()?;
    let [n, m] = nums[..] else {
        return Err(bad(hl, "header must be two integers"));
    };
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut it = line.split_whitespace().map(|t| t.parse::<usize>());
        let (Some(Ok(i)), Some(Ok(j)), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad(ln, "expected `i j`"));
        };
        if i >= n || j >= n {
            return Err(Error::VertexOutOfRange { vertex: i.max(j), n });
        }
        if i == j {
            return Err(bad(ln, "self-loop"));
        }
        edges.push((i, j));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "{}: header announces {m} edges, found {}",
            path.display(),
            edges.len()
        )));
    }

    let cpath = coords_path(path);
    let (coords, perm) = if cpath.exists() {
        let raw: Vec<f64> = fs::read_to_string(&cpath)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.parse::<f64>().map_err(|_| Error::Parse(format!("{}: bad coordinate `{l}`", cpath.display()))))
            .collect::<Result<_>>()?;
        if raw.len() != n {
            return Err(Error::Parse(format!("{}: {} coordinates for {n} vertices", cpath.display(), raw.len())));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
        let coords = perm.iter().map(|&i| raw[i]).collect::<Vec<_>>();
        (Some(coords), perm)
    } else {
        (None, (0..n).collect())
    };
    let mut rank = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        rank[old] = new;
    }
    let mut adj = BitMatrix::new(n);
    for (i, j) in edges {
        adj.add_edge(rank[i], rank[j]);
    }
    let mut g = SampledGraph::from_adjacency(adj, coords, path.display().to_string())?;
    g.perm = perm;
    Ok(g)
}
