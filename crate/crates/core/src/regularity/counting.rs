use alloc::vec::Vec;

use super::RegularityError;
use crate::graph_core::{Layer, LayeredGraph, VertexSet};

/// Pattern graph for embedding counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl SmallGraph {
    pub const MAX_VERTICES: usize = 8;

    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        SmallGraph { n, edges }
    }

    pub fn edge() -> Self {
        SmallGraph::new(2, alloc::vec![(0, 1)])
    }

    pub fn triangle() -> Self {
        SmallGraph::new(3, alloc::vec![(0, 1), (1, 2), (0, 2)])
    }

    /// Path on `m` vertices.
    pub fn path(m: usize) -> Self {
        SmallGraph::new(m, (1..m).map(|i| (i - 1, i)).collect())
    }

    fn earlier_neighbours(&self) -> Vec<Vec<usize>> {
        let mut out = alloc::vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            out[hi].push(lo);
        }
        out
    }
}

fn check(h: &SmallGraph, sigma: &[VertexSet]) -> Result<(), RegularityError> {
    if h.n > SmallGraph::MAX_VERTICES {
        return Err(RegularityError::TooLarge { size: h.n, cap: SmallGraph::MAX_VERTICES });
    }
    if sigma.len() != h.n {
        return Err(RegularityError::LengthMismatch { expected: h.n, found: sigma.len() });
    }
    for (i, a) in sigma.iter().enumerate() {
        if sigma[i + 1..].iter().any(|b| !a.is_disjoint(b)) {
            return Err(RegularityError::NotDisjoint);
        }
    }
    Ok(())
}

/// Number of maps φ with φ(v) ∈ σ(v) for every v that send edges of `h` to
/// edges of the chosen layer.
pub fn count_embeddings(
    h: &SmallGraph,
    g: &LayeredGraph,
    layer: Layer,
    sigma: &[VertexSet],
) -> Result<u64, RegularityError> {
    check(h, sigma)?;
    let back = h.earlier_neighbours();
    let mut image = alloc::vec![0usize; h.n];
    fn go(
        i: usize,
        h: &SmallGraph,
        g: &LayeredGraph,
        layer: Layer,
        sigma: &[VertexSet],
        back: &[Vec<usize>],
        image: &mut [usize],
    ) -> u64 {
        if i == h.n {
            return 1;
        }
        let mut cand = sigma[i].clone();
        for &j in &back[i] {
            cand.intersect_with(g.neighbors(layer, image[j]));
        }
        if i + 1 == h.n {
            return cand.len() as u64;
        }
        let mut total = 0;
        for v in &cand {
            image[i] = v;
            total += go(i + 1, h, g, layer, sigma, back, image);
        }
        total
    }
    Ok(go(0, h, g, layer, sigma, &back, &mut image))
}

/// The interval (∏|σ(v)|)·(∏ d(σ(u), σ(v)) ∓ γ) over edges uv of `h`.
pub fn counting_band(
    h: &SmallGraph,
    g: &LayeredGraph,
    layer: Layer,
    sigma: &[VertexSet],
    gamma: f64,
) -> Result<(f64, f64), RegularityError> {
    check(h, sigma)?;
    let size: f64 = sigma.iter().map(|s| s.len() as f64).product();
    let mut dens = 1.0;
    for &(a, b) in &h.edges {
        dens *= g.density(layer, &sigma[a], &sigma[b]).map_err(|_| RegularityError::EmptySet)?.as_f64();
    }
    Ok((size * (dens - gamma), size * (dens + gamma)))
}
