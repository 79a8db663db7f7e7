#![allow(dead_code)]

use perturbed_core::generators::{gen_gnp, rng_from_seed};
use perturbed_core::{LayeredGraph, VertexSet};
use rand::Rng;

pub fn complete(n: usize) -> LayeredGraph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    LayeredGraph::from_edges(n, &edges, &[]).unwrap()
}

/// The r-th power of the n-cycle 0, 1, ..., n−1.
pub fn cycle_power(n: usize, r: usize) -> LayeredGraph {
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

pub fn gnp_graph(n: usize, p: f64, seed: u64) -> LayeredGraph {
    LayeredGraph::from_edges(n, &gen_gnp(n, p, seed).unwrap(), &[]).unwrap()
}

/// Random relabelling of a graph, layers preserved.
pub fn shuffled(g: &LayeredGraph, seed: u64) -> LayeredGraph {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = rng_from_seed(seed);
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let map = |es: Vec<(usize, usize)>| es.into_iter().map(|(u, v)| (perm[u], perm[v])).collect::<Vec<_>>();
    LayeredGraph::from_edges(
        n,
        &map(g.edges(perturbed_core::Layer::Gamma)),
        &map(g.edges(perturbed_core::Layer::Random)),
    )
    .unwrap()
}

pub fn set(n: usize, members: &[usize]) -> VertexSet {
    VertexSet::from_slice(n, members)
}
