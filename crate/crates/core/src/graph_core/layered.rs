use alloc::vec::Vec;
use core::fmt;

use super::VertexSet;

/// Which edges a query looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layer {
    /// The dense deterministic layer Γ.
    Gamma,
    /// The random layer, kept disjoint from Γ.
    Random,
    /// Γ ∪ random.
    Union,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::Gamma => "gamma",
            Layer::Random => "random",
            Layer::Union => "union",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    SelfLoop(usize),
    VertexOutOfRange {
        v: usize,
        n: usize,
    },
    /// Density asked for two sets that share vertices.
    DisjointnessViolation,
    /// Density asked for an empty side.
    EmptySet,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::VertexOutOfRange { v, n } => write!(f, "vertex {v} out of range for n = {n}"),
            GraphError::DisjointnessViolation => f.write_str("density needs disjoint vertex sets"),
            GraphError::EmptySet => f.write_str("density needs nonempty vertex sets"),
        }
    }
}

impl core::error::Error for GraphError {}

/// An exact edge density e(X, Y) / (|X||Y|).
#[derive(Clone, Copy, Debug, Eq)]
pub struct Density {
    pub edges: u64,
    pub pairs: u64,
}

impl Density {
    pub fn as_f64(self) -> f64 {
        self.edges as f64 / self.pairs as f64
    }

    pub fn is_zero(self) -> bool {
        self.edges == 0
    }

    pub fn is_one(self) -> bool {
        self.edges == self.pairs
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.edges as u128 * other.pairs as u128 == other.edges as u128 * self.pairs as u128
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.edges, self.pairs)
    }
}

/// A graph on `0..n` with two disjoint edge layers.
///
/// An edge offered to both layers lives in Γ only. Adjacency rows are
/// bitsets, one per layer plus a precomputed union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredGraph {
    n: usize,
    gamma: Vec<VertexSet>,
    random: Vec<VertexSet>,
    union: Vec<VertexSet>,
}

impl LayeredGraph {
    pub fn empty(n: usize) -> Self {
        let rows = || (0..n).map(|_| VertexSet::new(n)).collect::<Vec<_>>();
        LayeredGraph { n, gamma: rows(), random: rows(), union: rows() }
    }

    /// Builds a graph from two edge lists. Repeated pairs are merged and a
    /// pair present in both lists is kept in Γ only.
    pub fn from_edges(n: usize, gamma: &[(usize, usize)], random: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in gamma {
            g.add_gamma_edge(u, v)?;
        }
        for &(u, v) in random {
            g.add_random_edge(u, v)?;
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { v: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    /// Adds `{u, v}` to Γ, moving it out of the random layer if it was there.
    pub fn add_gamma_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        self.random[u].remove(v);
        self.random[v].remove(u);
        self.gamma[u].insert(v);
        self.gamma[v].insert(u);
        self.union[u].insert(v);
        self.union[v].insert(u);
        Ok(())
    }

    /// Adds `{u, v}` to the random layer unless Γ already has it.
    /// Returns whether the random layer changed.
    pub fn add_random_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_pair(u, v)?;
        if self.gamma[u].contains(v) {
            return Ok(false);
        }
        let fresh = self.random[u].insert(v);
        self.random[v].insert(u);
        self.union[u].insert(v);
        self.union[v].insert(u);
        Ok(fresh)
    }

    /// Replaces the random layer with `edges`, minus pairs already in Γ.
    pub fn with_random_layer(&self, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = self.clone();
        for v in 0..self.n {
            g.random[v].clear();
            g.union[v] = g.gamma[v].clone();
        }
        for &(u, v) in edges {
            g.add_random_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn neighbors(&self, layer: Layer, v: usize) -> &VertexSet {
        match layer {
            Layer::Gamma => &self.gamma[v],
            Layer::Random => &self.random[v],
            Layer::Union => &self.union[v],
        }
    }

    #[inline]
    pub fn has_edge(&self, layer: Layer, u: usize, v: usize) -> bool {
        u < self.n && self.neighbors(layer, u).contains(v)
    }

    pub fn degree(&self, layer: Layer, v: usize) -> usize {
        self.neighbors(layer, v).len()
    }

    pub fn edge_count(&self, layer: Layer) -> usize {
        (0..self.n).map(|v| self.degree(layer, v)).sum::<usize>() / 2
    }

    /// Edges of a layer as sorted pairs `(u, v)` with `u < v`.
    pub fn edges(&self, layer: Layer) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(layer, u).iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    /// ⋂_{x ∈ X} N(x) ∩ Y. For empty `X` this is `Y`.
    pub fn common_neighborhood(&self, layer: Layer, x: &VertexSet, y: &VertexSet) -> VertexSet {
        let mut out = y.clone();
        for v in x {
            out.intersect_with(self.neighbors(layer, v));
        }
        out
    }

    /// Same as [`common_neighborhood`](Self::common_neighborhood) for a vertex list.
    pub fn common_neighborhood_of(&self, layer: Layer, x: &[usize], y: &VertexSet) -> VertexSet {
        let mut out = y.clone();
        for &v in x {
            out.intersect_with(self.neighbors(layer, v));
        }
        out
    }

    /// |N(v) ∩ X|.
    pub fn degree_into(&self, layer: Layer, v: usize, x: &VertexSet) -> usize {
        self.neighbors(layer, v).intersection_len(x)
    }

    /// Number of edges with one end in `x` and the other in `y`.
    pub fn edges_between(&self, layer: Layer, x: &VertexSet, y: &VertexSet) -> u64 {
        x.iter().map(|v| self.degree_into(layer, v, y) as u64).sum()
    }

    pub fn density(&self, layer: Layer, x: &VertexSet, y: &VertexSet) -> Result<Density, GraphError> {
        if x.is_empty() || y.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if !x.is_disjoint(y) {
            return Err(GraphError::DisjointnessViolation);
        }
        Ok(Density { edges: self.edges_between(layer, x, y), pairs: (x.len() * y.len()) as u64 })
    }

    /// Minimum degree; 0 for the empty vertex set.
    pub fn min_degree(&self, layer: Layer) -> usize {
        (0..self.n).map(|v| self.degree(layer, v)).min().unwrap_or(0)
    }

    /// Whether the listed vertices are pairwise adjacent.
    pub fn is_clique(&self, layer: Layer, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(layer, u, v)))
    }

    /// Number of edges of a layer inside `x`.
    pub fn edges_within(&self, layer: Layer, x: &VertexSet) -> u64 {
        x.iter().map(|v| self.degree_into(layer, v, x) as u64).sum::<u64>() / 2
    }
}
