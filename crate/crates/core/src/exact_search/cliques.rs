use alloc::vec::Vec;

use crate::graph_core::{Layer, LayeredGraph, VertexSet};

fn walk(
    g: &LayeredGraph,
    layer: Layer,
    q: usize,
    stack: &mut Vec<usize>,
    cand: VertexSet,
    f: &mut dyn FnMut(&[usize]),
) {
    if stack.len() == q {
        f(stack);
        return;
    }
    let missing = q - stack.len();
    if cand.len() < missing {
        return;
    }
    for v in &cand {
        let mut next = cand.intersection(g.neighbors(layer, v));
        // Only extend upward so each clique is produced once, in sorted order.
        for u in cand.iter().take_while(|&u| u <= v) {
            next.remove(u);
        }
        stack.push(v);
        walk(g, layer, q, stack, next, f);
        stack.pop();
    }
}

/// Calls `f` on every q-clique inside `within`, as a sorted vertex list.
pub(crate) fn for_each_clique(
    g: &LayeredGraph,
    layer: Layer,
    q: usize,
    within: &VertexSet,
    f: &mut dyn FnMut(&[usize]),
) {
    if q == 0 {
        f(&[]);
        return;
    }
    walk(g, layer, q, &mut Vec::with_capacity(q), within.clone(), f);
}

/// All q-cliques inside `within`, each sorted, in lexicographic order.
pub fn list_cliques(g: &LayeredGraph, layer: Layer, q: usize, within: &VertexSet) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_clique(g, layer, q, within, &mut |c| out.push(c.to_vec()));
    out
}

/// Number of q-cliques of one layer.
pub fn count_cliques_in_layer(g: &LayeredGraph, layer: Layer, q: usize) -> u64 {
    let mut count = 0u64;
    for_each_clique(g, layer, q, &g.vertices(), &mut |_| count += 1);
    count
}
