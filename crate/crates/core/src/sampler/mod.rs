//! W-random graph generation.
//!
//! A sample draws `n` latent coordinates uniformly, sorts them, and then
//! visits the pairs `i < j` in row-major order, drawing one uniform `u_ij`
//! per pair; the edge is present iff `u_ij < W(x_i, x_j)`. Coupled samples
//! reuse the same coordinates and the same `u_ij` for both kernels, so a
//! pointwise-dominated kernel always yields a subgraph.

mod bits;
mod io;

use rand::{RngCore, SeedableRng};
use rand_distr::{Binomial, Distribution};
use rand_pcg::Pcg64Mcg;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{Family, GraphonSpec, Interval};

pub use bits::{iter_bits, words_for, BitMatrix};
pub use io::{read_edge_list, write_edge_list};

/// Default upper limit on the number of simulated vertices (~128 MiB of adjacency).
pub const DEFAULT_MAX_VERTICES: usize = 32_768;

/// Grid resolution used to certify pointwise kernel dominance.
pub const DOMINANCE_GRID: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SampleMode {
    Full,
    /// Only simulate vertices whose coordinate falls in `[center - t, center + t] ∩ [0, 1]`.
    BelowThreshold { t: f64, center: f64 },
}

#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub spec: GraphonSpec,
    pub n: usize,
    pub seed: u64,
    pub mode: SampleMode,
    pub max_vertices: usize,
}

impl SampleConfig {
    pub fn full(spec: GraphonSpec, n: usize, seed: u64) -> Self {
        Self { spec, n, seed, mode: SampleMode::Full, max_vertices: DEFAULT_MAX_VERTICES }
    }

    pub fn below_threshold(spec: GraphonSpec, n: usize, seed: u64, t: f64, center: f64) -> Self {
        Self {
            spec,
            n,
            seed,
            mode: SampleMode::BelowThreshold { t, center },
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }

    pub fn with_max_vertices(mut self, cap: usize) -> Self {
        self.max_vertices = cap;
        self
    }

    /// Draws a sample in whichever mode the config names.
    pub fn draw(&self) -> Result<SampledGraph> {
        match self.mode {
            SampleMode::Full => sample(self),
            SampleMode::BelowThreshold { .. } => sample_below_threshold(self),
        }
    }
}

/// A sampled graph. Vertices are indexed in increasing coordinate order;
/// `perm[v]` is the draw index the vertex had before sorting.
#[derive(Debug, Clone)]
pub struct SampledGraph {
    n: usize,
    coords: Vec<f64>,
    perm: Vec<usize>,
    adjacency: BitMatrix,
    seed: u64,
    spec_tag: String,
    /// Population size and sampling window for below-threshold samples.
    population: Option<(usize, Interval)>,
}

impl SampledGraph {
    /// Wraps an explicit adjacency matrix. Coordinates must be sorted; when
    /// absent, evenly spaced placeholders `(i + 0.5) / n` are used.
    pub fn from_adjacency(adjacency: BitMatrix, coords: Option<Vec<f64>>, spec_tag: impl Into<String>) -> Result<Self> {
        let n = adjacency.n();
        let coords = match coords {
            Some(c) => {
                if c.len() != n {
                    return Err(Error::InvalidParameter(format!(
                        "{} coordinates for {n} vertices",
                        c.len()
                    )));
                }
                if c.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::InvalidParameter("coordinates must be sorted".into()));
                }
                c
            }
            None => (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect(),
        };
        Ok(Self {
            n,
            coords,
            perm: (0..n).collect(),
            adjacency,
            seed: 0,
            spec_tag: spec_tag.into(),
            population: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adjacency
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spec_tag(&self) -> &str {
        &self.spec_tag
    }

    /// For below-threshold samples: the population size `n` the window was thinned from.
    pub fn population(&self) -> Option<usize> {
        self.population.map(|(n, _)| n)
    }

    pub fn sampling_window(&self) -> Option<Interval> {
        self.population.map(|(_, w)| w)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.edge_count()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.has_edge(i, j)
    }

    /// Number of coordinates in `[lo, hi)`; the right end is closed when `hi = 1`.
    pub fn count_in_interval(&self, window: &Interval) -> usize {
        count_in_interval(&self.coords, window)
    }

    /// Length of the shortest interval containing `m` sample points.
    pub fn min_window_length(&self, m: usize) -> Result<f64> {
        min_window_length(&self.coords, m)
    }

    /// Vertex index range `[start, end)` whose coordinates lie in the window.
    pub fn index_range(&self, window: &Interval) -> (usize, usize) {
        index_range(&self.coords, window)
    }

    /// Induced subgraph on a contiguous index range, keeping coordinates.
    pub fn induced_range(&self, start: usize, end: usize) -> SampledGraph {
        SampledGraph {
            n: end - start,
            coords: self.coords[start..end].to_vec(),
            perm: self.perm[start..end].to_vec(),
            adjacency: self.adjacency.induced_range(start, end),
            seed: self.seed,
            spec_tag: self.spec_tag.clone(),
            population: None,
        }
    }
}

fn index_range(coords: &[f64], window: &Interval) -> (usize, usize) {
    let start = coords.partition_point(|&x| x < window.lo());
    let end = if window.hi() >= 1.0 {
        coords.len()
    } else {
        coords.partition_point(|&x| x < window.hi())
    };
    (start, end.max(start))
}

/// Counts sorted coordinates in `[lo, hi)` (closed at `hi = 1`) by binary search.
pub fn count_in_interval(sorted_coords: &[f64], window: &Interval) -> usize {
    let (a, b) = index_range(sorted_coords, window);
    b - a
}

/// `min_i coords[i + m - 1] - coords[i]` over sorted coordinates.
pub fn min_window_length(sorted_coords: &[f64], m: usize) -> Result<f64> {
    let n = sorted_coords.len();
    if m < 2 || m > n {
        return Err(Error::InvalidParameter(format!("window size m={m} must satisfy 2 <= m <= n={n}")));
    }
    Ok(sorted_coords
        .windows(m)
        .map(|w| w[m - 1] - w[0])
        .fold(f64::INFINITY, f64::min))
}

#[inline]
fn uniform(rng: &mut Pcg64Mcg) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Per-vertex evaluation form of a kernel on fixed coordinates.
enum Prepared<'a> {
    Constant(f64),
    Product(Vec<f64>),
    General(&'a GraphonSpec, &'a [f64]),
}

impl<'a> Prepared<'a> {
    fn new(spec: &'a GraphonSpec, coords: &'a [f64]) -> Self {
        match spec.family() {
            Family::Constant { p } => Prepared::Constant(*p),
            Family::Line => Prepared::General(spec, coords),
            _ => Prepared::Product(
                coords.iter().map(|&x| spec.profile_at(x).expect("product-form kernel")).collect(),
            ),
        }
    }

    #[inline]
    fn prob(&self, i: usize, j: usize) -> f64 {
        match self {
            Prepared::Constant(p) => *p,
            Prepared::Product(f) => f[i] * f[j],
            Prepared::General(spec, x) => spec.evaluate(x[i], x[j]),
        }
    }
}

/// Fills the strict upper triangle of each matrix, one shared uniform per pair.
fn fill_upper<const K: usize>(mats: &mut [BitMatrix; K], kernels: [&Prepared; K], rng: &mut Pcg64Mcg) {
    let n = mats[0].n();
    for i in 0..n {
        let mut j = i + 1;
        while j < n {
            let w = j / 64;
            let end = ((w + 1) * 64).min(n);
            let mut acc = [0u64; K];
            for jj in j..end {
                let u = uniform(rng);
                for k in 0..K {
                    if u < kernels[k].prob(i, jj) {
                        acc[k] |= 1u64 << (jj % 64);
                    }
                }
            }
            for k in 0..K {
                mats[k].row_mut(i)[w] = acc[k];
            }
            j = end;
        }
    }
    for m in mats.iter_mut() {
        m.symmetrize_from_upper();
    }
}

fn check_capacity(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::Capacity(format!(
            "{m} vertices exceed the memory cap of {cap}; use below-threshold sampling or raise the cap"
        )));
    }
    Ok(())
}

/// Draws sorted uniform coordinates on `window`, returning `(coords, perm)`.
fn draw_coords(m: usize, window: &Interval, rng: &mut Pcg64Mcg) -> (Vec<f64>, Vec<usize>) {
    let raw: Vec<f64> = (0..m).map(|_| window.lo() + window.length() * uniform(rng)).collect();
    let mut perm: Vec<usize> = (0..m).collect();
    perm.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
    let coords = perm.iter().map(|&i| raw[i]).collect();
    (coords, perm)
}

/// `m` iid uniform coordinates on `[0, 1]`, sorted.
pub fn uniform_sorted_coords(m: usize, seed: u64) -> Vec<f64> {
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    draw_coords(m, &Interval::unit(), &mut rng).0
}

/// Full W-random graph on `config.n` vertices.
pub fn sample(config: &SampleConfig) -> Result<SampledGraph> {
    if config.mode != SampleMode::Full {
        return Err(Error::InvalidParameter("sample() expects full mode".into()));
    }
    check_capacity(config.n, config.max_vertices)?;
    let mut rng = Pcg64Mcg::seed_from_u64(config.seed);
    let (coords, perm) = draw_coords(config.n, &Interval::unit(), &mut rng);
    let kernel = Prepared::new(&config.spec, &coords);
    let mut mats = [BitMatrix::new(config.n)];
    fill_upper(&mut mats, [&kernel], &mut rng);
    let [adjacency] = mats;
    Ok(SampledGraph {
        n: config.n,
        coords,
        perm,
        adjacency,
        seed: config.seed,
        spec_tag: config.spec.to_string(),
        population: None,
    })
}

/// Simulates only the vertices of an `n`-vertex sample that fall in the
/// window `[center - t, center + t] ∩ [0, 1]`: the window count is drawn
/// as Binomial(n, L), coordinates uniformly on the window, and edges from
/// the unrestricted kernel at the true coordinates.
pub fn sample_below_threshold(config: &SampleConfig) -> Result<SampledGraph> {
    let SampleMode::BelowThreshold { t, center } = config.mode else {
        return Err(Error::InvalidParameter("sample_below_threshold() expects below-threshold mode".into()));
    };
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidParameter(format!("threshold t={t} must lie in (0, 1]")));
    }
    let window = Interval::around(center, t)?;
    let mut rng = Pcg64Mcg::seed_from_u64(config.seed);
    let m = if window.length() >= 1.0 {
        config.n
    } else {
        Binomial::new(config.n as u64, window.length())
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .sample(&mut rng) as usize
    };
    check_capacity(m, config.max_vertices)?;
    let (coords, perm) = draw_coords(m, &window, &mut rng);
    let kernel = Prepared::new(&config.spec, &coords);
    let mut mats = [BitMatrix::new(m)];
    fill_upper(&mut mats, [&kernel], &mut rng);
    let [adjacency] = mats;
    Ok(SampledGraph {
        n: m,
        coords,
        perm,
        adjacency,
        seed: config.seed,
        spec_tag: config.spec.to_string(),
        population: Some((config.n, window)),
    })
}

#[derive(Debug, Clone)]
pub struct CoupledPair {
    pub lower: SampledGraph,
    pub upper: SampledGraph,
    pub shared_coords: bool,
    pub dominance_certified: bool,
}

/// Two kernels sampled on shared coordinates and shared edge uniforms.
#[derive(Debug, Clone)]
pub struct Coupling {
    lower: GraphonSpec,
    upper: GraphonSpec,
    certified: bool,
    max_vertices: usize,
}

impl Coupling {
    /// Builds the coupling and certifies `lower ≤ upper` on a dense grid.
    pub fn new(lower: GraphonSpec, upper: GraphonSpec) -> Self {
        let certified = lower.dominated_by_on_grid(&upper, DOMINANCE_GRID);
        Self { lower, upper, certified, max_vertices: DEFAULT_MAX_VERTICES }
    }

    pub fn with_max_vertices(mut self, cap: usize) -> Self {
        self.max_vertices = cap;
        self
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<CoupledPair> {
        check_capacity(n, self.max_vertices)?;
        let mut rng = Pcg64Mcg::seed_from_u64(seed);
        let (coords, perm) = draw_coords(n, &Interval::unit(), &mut rng);
        let lo = Prepared::new(&self.lower, &coords);
        let hi = Prepared::new(&self.upper, &coords);
        let mut mats = [BitMatrix::new(n), BitMatrix::new(n)];
        fill_upper(&mut mats, [&lo, &hi], &mut rng);
        let [lower_adj, upper_adj] = mats;
        let make = |adjacency, spec: &GraphonSpec| SampledGraph {
            n,
            coords: coords.clone(),
            perm: perm.clone(),
            adjacency,
            seed,
            spec_tag: spec.to_string(),
            population: None,
        };
        Ok(CoupledPair {
            lower: make(lower_adj, &self.lower),
            upper: make(upper_adj, &self.upper),
            shared_coords: true,
            dominance_certified: self.certified,
        })
    }
}

pub fn sample_coupled(lower: &GraphonSpec, upper: &GraphonSpec, n: usize, seed: u64) -> Result<CoupledPair> {
    Coupling::new(lower.clone(), upper.clone()).sample(n, seed)
}
