use alloc::vec::Vec;

use hashbrown::HashMap;

use super::cliques::list_cliques;
use super::SearchError;
use crate::budget::{Exhausted, Meter};
use crate::graph_core::{Layer, LayeredGraph, VertexSet};

/// A family of vertex-disjoint q-cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingResult {
    pub q: usize,
    pub cliques: Vec<Vec<usize>>,
    pub uncovered: VertexSet,
}

struct Packer<'a> {
    g: &'a LayeredGraph,
    q: usize,
    cliques: Vec<VertexSet>,
    containing: Vec<Vec<usize>>,
    best: Vec<usize>,
    current: Vec<usize>,
    /// Upper bounds on the packing number of a remaining vertex set.
    bounds: HashMap<VertexSet, usize>,
}

impl Packer<'_> {
    /// Colour `avail` greedily. A packing of m cliques takes at most m
    /// vertices from each colour class and q distinct colours per clique, so
    /// m·q ≤ Σ min(|class|, m).
    fn colour_bound(&self, avail: &VertexSet) -> usize {
        let mut classes: Vec<VertexSet> = Vec::new();
        for v in avail {
            let nb = self.g.neighbors(Layer::Union, v);
            match classes.iter_mut().find(|c| c.is_disjoint(nb)) {
                Some(c) => {
                    c.insert(v);
                }
                None => classes.push(VertexSet::from_slice(self.g.n(), &[v])),
            }
        }
        let sizes: Vec<usize> = classes.iter().map(VertexSet::len).collect();
        let mut m = avail.len() / self.q;
        while m > 0 && m * self.q > sizes.iter().map(|&s| s.min(m)).sum::<usize>() {
            m -= 1;
        }
        m
    }

    /// Explores packings of `avail`; returns the largest size found below
    /// this node.
    fn explore(&mut self, avail: VertexSet, meter: &mut Meter) -> Result<usize, Exhausted> {
        meter.tick()?;
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        let depth = self.current.len();
        let mut ub = self.colour_bound(&avail);
        if let Some(&b) = self.bounds.get(&avail) {
            ub = ub.min(b);
        }
        if depth + ub <= self.best.len() {
            return Ok(0);
        }
        let Some(v) = avail.first() else { return Ok(0) };
        let mut found = 0;
        let options: Vec<usize> =
            self.containing[v].iter().copied().filter(|&c| self.cliques[c].is_subset(&avail)).collect();
        for c in options {
            self.current.push(c);
            let below = self.explore(avail.difference(&self.cliques[c]), meter)?;
            self.current.pop();
            found = found.max(below + 1);
        }
        let mut rest = avail.clone();
        rest.remove(v);
        found = found.max(self.explore(rest, meter)?);
        // Anything better than `found` here would have beaten the incumbent.
        let bound = found.max(self.best.len().saturating_sub(depth));
        self.bounds.insert(avail, bound);
        Ok(found)
    }
}

/// A maximum family of vertex-disjoint q-cliques in the union graph, by
/// branch and bound on the smallest uncovered vertex.
pub fn max_clique_packing(g: &LayeredGraph, q: usize, meter: &mut Meter) -> Result<PackingResult, SearchError> {
    if q < 2 {
        return Err(SearchError::InvalidInput("clique size must be at least 2"));
    }
    let all = g.vertices();
    let lists = list_cliques(g, Layer::Union, q, &all);
    let mut containing = alloc::vec![Vec::new(); g.n()];
    let mut live = VertexSet::new(g.n());
    for (i, c) in lists.iter().enumerate() {
        for &v in c {
            containing[v].push(i);
            live.insert(v);
        }
    }
    let cliques = lists.iter().map(|c| VertexSet::from_slice(g.n(), c)).collect();
    let mut packer =
        Packer { g, q, cliques, containing, best: Vec::new(), current: Vec::new(), bounds: HashMap::new() };
    packer.explore(live, meter).map_err(|_| SearchError::BudgetExceeded)?;
    let chosen: Vec<Vec<usize>> = packer.best.iter().map(|&c| lists[c].clone()).collect();
    let mut uncovered = all;
    for c in &chosen {
        for &v in c {
            uncovered.remove(v);
        }
    }
    Ok(PackingResult { q, cliques: chosen, uncovered })
}
