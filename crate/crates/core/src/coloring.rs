//! Graph coloring instances and exhaustive oracles.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Default cap on `c^n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// A simple undirected graph with a palette of `colors` colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringProblem {
    n: usize,
    edges: Vec<(usize, usize)>,
    colors: usize,
}

impl ColoringProblem {
    /// Edges are stored with `u < v` in the order given. Self-loops, duplicate
    /// edges and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, colors: usize) -> Result<Self> {
        if colors == 0 {
            return Err(Error::InvalidGraph("palette must be non-empty".into()));
        }
        let mut seen = BTreeSet::new();
        let mut stored = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            stored.push(e);
        }
        Ok(Self {
            n,
            edges: stored,
            colors,
        })
    }

    /// The four corners map: Utah = 0, then clockwise (Colorado, New Mexico,
    /// Arizona). Diagonal regions are not adjacent, so the graph is `C4`.
    pub fn four_corners() -> Self {
        Self::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 4).expect("static instance")
    }

    /// Cycle `C_m` with `colors` colors.
    pub fn cycle(m: usize, colors: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {m}")));
        }
        Self::new(m, (0..m).map(|i| (i, (i + 1) % m)), colors)
    }

    pub fn path(m: usize, colors: usize) -> Result<Self> {
        Self::new(m, (1..m).map(|i| (i - 1, i)), colors)
    }

    pub fn complete(m: usize, colors: usize) -> Result<Self> {
        Self::new(m, (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))), colors)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.contains(&e)
    }

    pub fn is_proper(&self, coloring: &Coloring) -> Result<bool> {
        self.check(coloring)?;
        let c = coloring.colors();
        Ok(self.edges.iter().all(|&(u, v)| c[u] != c[v]))
    }

    fn check(&self, coloring: &Coloring) -> Result<()> {
        if coloring.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: coloring.len(),
            });
        }
        if let Some(&bad) = coloring.colors().iter().find(|&&k| k >= self.colors) {
            return Err(Error::ColorOutOfRange {
                color: bad,
                colors: self.colors,
            });
        }
        Ok(())
    }

    fn search_space(&self, cap: u64) -> Result<u64> {
        let mut size: u64 = 1;
        for _ in 0..self.n {
            size = size.saturating_mul(self.colors as u64);
        }
        if size > cap {
            return Err(Error::CapExceeded {
                what: "coloring search space",
                size,
                cap,
            });
        }
        Ok(size)
    }

    /// Every coloring in mixed-radix order (vertex 0 varies fastest).
    pub fn all_colorings(&self, cap: u64) -> Result<impl Iterator<Item = Coloring> + '_> {
        let size = self.search_space(cap)?;
        let (n, c) = (self.n, self.colors);
        Ok((0..size).map(move |mut idx| {
            let mut colors = vec![0; n];
            for slot in colors.iter_mut() {
                *slot = (idx % c as u64) as usize;
                idx /= c as u64;
            }
            Coloring(colors)
        }))
    }

    pub fn count_proper(&self) -> Result<u64> {
        self.count_proper_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn count_proper_capped(&self, cap: u64) -> Result<u64> {
        Ok(self
            .all_colorings(cap)?
            .filter(|col| self.edges.iter().all(|&(u, v)| col.0[u] != col.0[v]))
            .count() as u64)
    }
}

/// A color index per vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring(Vec<usize>);

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Self(colors)
    }

    pub fn colors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for Coloring {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}
