//! r-th powers of paths and cycles.
//!
//! A sequence v_1..v_ℓ is an r-path when all pairs at index distance at most
//! r are adjacent. With ℓ ≥ r+1 its first and last r+1 vertices are cliques,
//! the endpoints `s` and `t`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::graph_core::{Layer, LayeredGraph, SetTuple, VertexSet, VertexTuple};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathError {
    ZeroPower,
    RepeatedVertex(usize),
    MissingEdge(usize, usize),
    /// Fewer than r+1 vertices, so the endpoints are not full cliques.
    TooShort {
        len: usize,
        needed: usize,
    },
    EndpointMismatch,
    OverlapViolation,
    PowerMismatch,
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    NotPermutation,
    Parse(String),
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::ZeroPower => f.write_str("power must be positive"),
            PathError::RepeatedVertex(v) => write!(f, "vertex {v} repeated"),
            PathError::MissingEdge(u, v) => write!(f, "required pair {{{u}, {v}}} is not an edge"),
            PathError::TooShort { len, needed } => {
                write!(f, "path has {len} vertices, endpoints need {needed}")
            }
            PathError::EndpointMismatch => f.write_str("end of the first path is not the start of the second"),
            PathError::OverlapViolation => f.write_str("paths share vertices outside the joining clique"),
            PathError::PowerMismatch => f.write_str("paths have different powers"),
            PathError::LengthMismatch { expected, found } => {
                write!(f, "expected length {expected}, found {found}")
            }
            PathError::NotPermutation => f.write_str("order is not a permutation of the vertex set"),
            PathError::Parse(msg) => write!(f, "bad path: {msg}"),
        }
    }
}

impl core::error::Error for PathError {}

fn first_violation(g: &LayeredGraph, seq: &[usize], r: usize) -> Option<PathError> {
    let mut seen = VertexSet::new(g.n());
    for (j, &v) in seq.iter().enumerate() {
        if v >= g.n() || !seen.insert(v) {
            return Some(PathError::RepeatedVertex(v));
        }
        for &u in &seq[j.saturating_sub(r)..j] {
            if !g.has_edge(Layer::Union, u, v) {
                return Some(PathError::MissingEdge(u, v));
            }
        }
    }
    None
}

/// Whether `seq` is an r-path in the union graph.
pub fn is_power_path(g: &LayeredGraph, seq: &[usize], r: usize) -> bool {
    r > 0 && first_violation(g, seq, r).is_none()
}

/// Whether `order` lists the vertices of an r-th power of a Hamilton cycle:
/// every pair at cyclic distance at most r must be an edge.
pub fn is_power_hamilton_cycle(g: &LayeredGraph, order: &[usize], r: usize) -> Result<bool, PathError> {
    let n = g.n();
    if order.len() != n || VertexSet::from_slice(n, order).len() != n || order.iter().any(|&v| v >= n) {
        return Err(PathError::NotPermutation);
    }
    for i in 0..n {
        for d in 1..=r.min(n / 2) {
            if !g.has_edge(Layer::Union, order[i], order[(i + d) % n]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Index pairs `(i, j)`, `i < j ≤ i + r`, of a sequence of length `len`.
pub fn required_pairs(len: usize, r: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..len).flat_map(move |j| (j.saturating_sub(r)..j).map(move |i| (i, j)))
}

/// An r-path. The graph it was validated against is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerPath {
    vertices: Vec<usize>,
    r: usize,
}

impl PowerPath {
    /// Validates `vertices` as an r-path in the union graph of `g`.
    pub fn new(g: &LayeredGraph, vertices: Vec<usize>, r: usize) -> Result<Self, PathError> {
        if r == 0 {
            return Err(PathError::ZeroPower);
        }
        match first_violation(g, &vertices, r) {
            Some(e) => Err(e),
            None => Ok(PowerPath { vertices, r }),
        }
    }

    /// Wraps a sequence without checking adjacency. Vertices must still be
    /// distinct for the other methods to make sense.
    pub fn unchecked(vertices: Vec<usize>, r: usize) -> Self {
        PowerPath { vertices, r }
    }

    /// Re-checks the path against `g`.
    pub fn validate(&self, g: &LayeredGraph) -> Result<(), PathError> {
        match first_violation(g, &self.vertices, self.r) {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_set(&self, cap: usize) -> VertexSet {
        VertexSet::from_slice(cap, &self.vertices)
    }

    pub fn rev(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        PowerPath { vertices: v, r: self.r }
    }

    /// The first and last r+1 vertices.
    pub fn endpoints(&self) -> Result<(VertexTuple, VertexTuple), PathError> {
        let m = self.r + 1;
        if self.len() < m {
            return Err(PathError::TooShort { len: self.len(), needed: m });
        }
        let s = self.vertices[..m].to_vec();
        let t = self.vertices[self.len() - m..].to_vec();
        Ok((VertexTuple(s), VertexTuple(t)))
    }

    pub fn s(&self) -> Result<VertexTuple, PathError> {
        self.endpoints().map(|(s, _)| s)
    }

    pub fn t(&self) -> Result<VertexTuple, PathError> {
        self.endpoints().map(|(_, t)| t)
    }

    /// Joins `self` and `other` along t(self) = s(other).
    pub fn concat(&self, other: &PowerPath) -> Result<PowerPath, PathError> {
        if self.r != other.r {
            return Err(PathError::PowerMismatch);
        }
        let (_, t) = self.endpoints()?;
        let (s, _) = other.endpoints()?;
        if t != s {
            return Err(PathError::EndpointMismatch);
        }
        let m = self.r + 1;
        let cap = self.vertices.iter().chain(&other.vertices).max().map_or(0, |&v| v + 1);
        let head = VertexSet::from_slice(cap, &self.vertices[..self.len() - m]);
        if other.vertices[m..].iter().any(|&v| head.contains(v) || t.0.contains(&v)) {
            return Err(PathError::OverlapViolation);
        }
        if head.intersection_len(&VertexSet::from_slice(cap, &t.0)) != 0 {
            return Err(PathError::OverlapViolation);
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[m..]);
        Ok(PowerPath { vertices: v, r: self.r })
    }

    /// Consecutive pairs of the underlying ordinary path.
    pub fn skeleton(&self) -> Vec<(usize, usize)> {
        self.vertices.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Whether v_{2i−1}, v_{2i} ∈ V_i for every i.
    pub fn is_bicanonical(&self, sets: &SetTuple) -> Result<bool, PathError> {
        is_bicanonical(&self.vertices, sets)
    }
}

/// Whether consecutive pairs of `seq` land in successive entries of `sets`.
pub fn is_bicanonical(seq: &[usize], sets: &SetTuple) -> Result<bool, PathError> {
    if seq.len() != 2 * sets.len() {
        return Err(PathError::LengthMismatch { expected: 2 * sets.len(), found: seq.len() });
    }
    Ok(seq.chunks(2).zip(sets.iter()).all(|(pair, set)| pair.iter().all(|&v| set.contains(v))))
}

impl fmt::Display for PowerPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}", self.r)?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl FromStr for PowerPath {
    type Err = PathError;

    /// Parses `r=<r> v v v ...`. Adjacency is not checked.
    fn from_str(s: &str) -> Result<Self, PathError> {
        let mut tokens = s.split_whitespace();
        let head = tokens.next().ok_or_else(|| PathError::Parse("empty input".into()))?;
        let r = head
            .strip_prefix("r=")
            .and_then(|x| x.parse::<usize>().ok())
            .ok_or_else(|| PathError::Parse(alloc::format!("expected r=<power>, found {head:?}")))?;
        if r == 0 {
            return Err(PathError::ZeroPower);
        }
        let mut vertices = Vec::new();
        let mut seen = VertexSet::new(0);
        for tok in tokens {
            let v: usize = tok.parse().map_err(|_| PathError::Parse(alloc::format!("bad vertex {tok:?}")))?;
            if !seen.insert(v) {
                return Err(PathError::RepeatedVertex(v));
            }
            vertices.push(v);
        }
        Ok(PowerPath { vertices, r })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    /// The r-th power of the n-cycle on 0..n.
    fn cycle_power(n: usize, r: usize) -> LayeredGraph {
        let mut g = LayeredGraph::empty(n);
        for i in 0..n {
            for d in 1..=r {
                let j = (i + d) % n;
                if i != j {
                    g.add_gamma_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    fn complete(n: usize) -> LayeredGraph {
        cycle_power(n, n / 2)
    }

    #[test]
    fn power_path_examples() {
        assert!(is_power_path(&complete(4), &[0, 1, 2, 3], 3));
        assert!(!is_power_path(&cycle_power(5, 1), &[0, 1, 2], 2));
        let g = cycle_power(9, 2);
        assert!(is_power_path(&g, &(0..9).collect::<Vec<_>>(), 2));
        assert!(!is_power_path(&g, &[0, 1, 1], 2));
    }

    #[test]
    fn cycle_predicate() {
        let g = cycle_power(9, 2);
        let order: Vec<usize> = (0..9).collect();
        assert_eq!(is_power_hamilton_cycle(&g, &order, 2), Ok(true));
        assert_eq!(is_power_hamilton_cycle(&g, &order, 3), Ok(false));
        assert_eq!(is_power_hamilton_cycle(&complete(5), &[4, 2, 0, 1, 3], 2), Ok(true));
        assert_eq!(is_power_hamilton_cycle(&g, &order[..8], 2), Err(PathError::NotPermutation));
    }

    #[test]
    fn endpoints_and_short_paths() {
        let g = complete(8);
        let p = PowerPath::new(&g, vec![0, 1, 2, 3], 3).unwrap();
        let (s, t) = p.endpoints().unwrap();
        assert_eq!(s, t);
        let q = PowerPath::new(&g, vec![0, 1, 2, 3, 4], 3).unwrap();
        let (s, t) = q.endpoints().unwrap();
        assert_eq!(s.to_set(8).intersection_len(&t.to_set(8)), 3);
        let short = PowerPath::new(&g, vec![0, 1], 3).unwrap();
        assert_eq!(short.endpoints(), Err(PathError::TooShort { len: 2, needed: 4 }));
    }

    #[test]
    fn concat_cases() {
        let g = complete(12);
        let p = PowerPath::new(&g, (0..8).collect(), 3).unwrap();
        let trivial = PowerPath::new(&g, (4..8).collect(), 3).unwrap();
        assert_eq!(p.concat(&trivial).unwrap(), p);
        let q = PowerPath::new(&g, (4..12).collect(), 3).unwrap();
        let pq = p.concat(&q).unwrap();
        assert_eq!(pq.len(), 12);
        assert!(pq.validate(&g).is_ok());
        let other = PowerPath::new(&g, vec![8, 9, 10, 11], 3).unwrap();
        assert_eq!(p.concat(&other), Err(PathError::EndpointMismatch));
        let looping = PowerPath::new(&g, vec![4, 5, 6, 7, 0], 3).unwrap();
        assert_eq!(p.concat(&looping), Err(PathError::OverlapViolation));
    }

    #[test]
    fn skeleton_and_bicanonical() {
        let g = complete(6);
        let p = PowerPath::new(&g, vec![0, 1, 2, 3], 3).unwrap();
        assert_eq!(p.skeleton(), [(0, 1), (1, 2), (2, 3)]);
        let all = SetTuple::repeat(&VertexSet::full(6), 2);
        assert_eq!(p.is_bicanonical(&all), Ok(true));
        let mut sets = all.clone();
        sets.0[0] = VertexSet::new(6);
        assert_eq!(p.is_bicanonical(&sets), Ok(false));
        assert!(p.is_bicanonical(&SetTuple::repeat(&VertexSet::full(6), 3)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let p = PowerPath::unchecked(vec![3, 1, 4, 5], 3);
        assert_eq!(p.to_string(), "r=3 3 1 4 5");
        assert_eq!("r=3 3 1 4 5".parse::<PowerPath>().unwrap(), p);
        assert!("3 1 4".parse::<PowerPath>().is_err());
        assert_eq!("r=2 1 1".parse::<PowerPath>(), Err(PathError::RepeatedVertex(1)));
    }
}
