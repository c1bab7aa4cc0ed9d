//! Packed symmetric adjacency stored as `n` rows of `u64` words.

/// Number of `u64` words needed for `n` bits.
#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitMatrix {{ n: {}, edges: {} }}", self.n, self.edge_count())
    }
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = words_for(n);
        Self { n, words, data: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            let row = m.row_mut(i);
            for (w, word) in row.iter_mut().enumerate() {
                let lo = w * 64;
                let hi = (lo + 64).min(n);
                *word = if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
            }
            row[i / 64] &= !(1u64 << (i % 64));
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Adds the undirected edge `{i, j}`; self-loops are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.data[i * self.words + j / 64] |= 1u64 << (j % 64);
        self.data[j * self.words + i / 64] |= 1u64 << (i % 64);
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// Iterates the neighbours of `i` in increasing order.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(i))
    }

    /// Mirrors the strict upper triangle into the lower triangle. Rows must
    /// only hold bits `j > i` when this is called.
    pub(crate) fn symmetrize_from_upper(&mut self) {
        let words = self.words;
        let blocks = words;
        let mut block = [0u64; 64];
        for bi in 0..blocks {
            for bj in bi..blocks {
                // gather the 64x64 block at rows 64*bi.., word bj
                let r0 = bi * 64;
                for (t, slot) in block.iter_mut().enumerate() {
                    let r = r0 + t;
                    *slot = if r < self.n { self.data[r * words + bj] } else { 0 };
                }
                transpose64(&mut block);
                let c0 = bj * 64;
                for (t, &bits) in block.iter().enumerate() {
                    let r = c0 + t;
                    if r < self.n && bits != 0 {
                        self.data[r * words + bi] |= bits;
                    }
                }
            }
        }
    }

    /// Induced subgraph on the contiguous vertex range `[start, end)`.
    pub fn induced_range(&self, start: usize, end: usize) -> BitMatrix {
        let m = end - start;
        let mut out = BitMatrix::new(m);
        for i in 0..m {
            let src = self.row(start + i);
            let dst = out.row_mut(i);
            for (w, word) in dst.iter_mut().enumerate() {
                *word = extract_bits(src, start + 64 * w, (m - 64 * w).min(64));
            }
        }
        out
    }

    /// Induced subgraph on an arbitrary increasing vertex list.
    pub fn induced(&self, vertices: &[usize]) -> BitMatrix {
        let m = vertices.len();
        let mut out = BitMatrix::new(m);
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    out.add_edge(a, b);
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.neighbors(i).all(|j| self.has_edge(j, i)))
    }

    pub fn diagonal_is_zero(&self) -> bool {
        (0..self.n).all(|i| !self.has_edge(i, i))
    }

    /// True when every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &BitMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a & !b == 0)
    }
}

/// Reads `len ≤ 64` bits of `row` starting at bit `start`.
#[inline]
fn extract_bits(row: &[u64], start: usize, len: usize) -> u64 {
    let w = start / 64;
    let off = start % 64;
    let mut v = row[w] >> off;
    if off != 0 && w + 1 < row.len() {
        v |= row[w + 1] << (64 - off);
    }
    if len < 64 {
        v &= (1u64 << len) - 1;
    }
    v
}

/// Iterates set bits of a word slice in increasing order.
pub fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            }
        })
    })
}

/// In-place transpose of a 64×64 bit block where `a[r]` bit `c` is entry (r, c).
fn transpose64(a: &mut [u64; 64]) {
    let mut j = 32;
    let mut m: u64 = 0x0000_0000_FFFF_FFFF;
    while j != 0 {
        let mut k = 0;
        while k < 64 {
            let t = ((a[k] >> j) ^ a[k + j]) & m;
            a[k + j] ^= t;
            a[k] ^= t << j;
            k = (k + j + 1) & !j;
        }
        j >>= 1;
        m ^= m << j;
    }
}
