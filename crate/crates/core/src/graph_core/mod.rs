//! Vertex sets, layered graphs and tuple algebra.
//!
//! Vertices are dense ids `0..n`. Tuple slicing uses the one-based
//! conventions `T^{≤i}` ([`SetTuple::upto`]) and `T^{≥i}` ([`SetTuple::from`]).

mod layered;
mod set;
mod tuple;

pub use layered::{Density, GraphError, Layer, LayeredGraph};
pub use set::{Iter, VertexSet};
pub use tuple::{SetTuple, VertexTuple};

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn cycle(n: usize) -> LayeredGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        LayeredGraph::from_edges(n, &edges, &[]).unwrap()
    }

    fn complete(n: usize, layer: Layer) -> LayeredGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        match layer {
            Layer::Random => LayeredGraph::from_edges(n, &[], &edges).unwrap(),
            _ => LayeredGraph::from_edges(n, &edges, &[]).unwrap(),
        }
    }

    #[test]
    fn common_neighborhood_conventions() {
        let g = complete(4, Layer::Gamma);
        let y = VertexSet::from_slice(4, &[1, 2, 3]);
        assert_eq!(g.common_neighborhood(Layer::Gamma, &VertexSet::new(4), &y), y);
        let x = VertexSet::from_slice(4, &[0]);
        assert_eq!(g.common_neighborhood(Layer::Union, &x, &y), y);
    }

    #[test]
    fn five_cycle_common_neighborhood() {
        // N(0) = {1, 4}, N(2) = {1, 3}.
        let g = cycle(5);
        let x = VertexSet::from_slice(5, &[0, 2]);
        let out = g.common_neighborhood(Layer::Gamma, &x, &VertexSet::full(5));
        assert_eq!(out.to_vec(), [1]);
    }

    #[test]
    fn degrees() {
        let g = complete(5, Layer::Gamma);
        let rest = VertexSet::from_slice(5, &[1, 2, 3, 4]);
        assert_eq!(g.degree_into(Layer::Gamma, 0, &rest), 4);
        assert_eq!(LayeredGraph::empty(5).degree_into(Layer::Union, 0, &rest), 0);
        // Vertex 0 of C_5 is adjacent to 1 and 4; of {1, 2, 3} only 1.
        let c = cycle(5);
        assert_eq!(c.degree_into(Layer::Gamma, 0, &VertexSet::from_slice(5, &[1, 2, 3])), 1);
        assert_eq!(c.degree_into(Layer::Gamma, 0, &VertexSet::from_slice(5, &[1, 4, 3])), 2);
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(complete(6, Layer::Gamma).min_degree(Layer::Gamma), 5);
        assert_eq!(LayeredGraph::empty(6).min_degree(Layer::Union), 0);
    }

    #[test]
    fn density_errors_and_values() {
        let g = complete(4, Layer::Gamma);
        let a = VertexSet::from_slice(4, &[0, 1]);
        let b = VertexSet::from_slice(4, &[2, 3]);
        assert!(g.density(Layer::Gamma, &a, &b).unwrap().is_one());
        assert!(LayeredGraph::empty(4).density(Layer::Gamma, &a, &b).unwrap().is_zero());
        assert_eq!(g.density(Layer::Gamma, &a, &a), Err(GraphError::DisjointnessViolation));
        assert_eq!(g.density(Layer::Gamma, &a, &VertexSet::new(4)), Err(GraphError::EmptySet));
    }

    #[test]
    fn layers_stay_disjoint() {
        let g = LayeredGraph::from_edges(3, &[(0, 1)], &[(1, 0), (1, 2)]).unwrap();
        assert!(g.has_edge(Layer::Gamma, 0, 1));
        assert!(!g.has_edge(Layer::Random, 0, 1));
        assert!(g.has_edge(Layer::Random, 1, 2));
        assert_eq!(g.edge_count(Layer::Union), 2);
        let mut h = g.clone();
        h.add_gamma_edge(1, 2).unwrap();
        assert_eq!(h.edge_count(Layer::Random), 0);
        assert_eq!(LayeredGraph::from_edges(3, &[(1, 1)], &[]), Err(GraphError::SelfLoop(1)));
        assert!(LayeredGraph::from_edges(3, &[(1, 3)], &[]).is_err());
    }

    #[test]
    fn tuple_algebra() {
        let t = VertexTuple::new(alloc::vec![5, 6, 7, 8]);
        assert_eq!(t.rev().rev(), t);
        assert_eq!(t.upto(2).concat(&t.from(3)), t);
        assert_eq!(t.from(2).0, [6, 7, 8]);
        let s = SetTuple::repeat(&VertexSet::from_slice(4, &[1, 2]), 2);
        let m = s.minus(&VertexSet::from_slice(4, &[2]));
        assert!(m.iter().all(|x| x.to_vec() == [1]));
    }
}
