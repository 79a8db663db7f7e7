use alloc::vec::Vec;

use super::{SearchError, SearchOutcome};
use crate::budget::{Exhausted, Meter};
use crate::graph_core::{Layer, LayeredGraph, VertexSet};

struct CycleSearch<'a> {
    g: &'a LayeredGraph,
    r: usize,
    n: usize,
    need: usize,
    order: Vec<usize>,
    free: VertexSet,
}

impl CycleSearch<'_> {
    fn candidates(&self) -> VertexSet {
        let i = self.order.len();
        let mut cand = self.free.clone();
        for &v in &self.order[i.saturating_sub(self.r)..] {
            cand.intersect_with(self.g.neighbors(Layer::Union, v));
        }
        // Positions that wrap around to the start of the cycle.
        if i + self.r >= self.n {
            for &v in &self.order[..=(i + self.r - self.n).min(i - 1)] {
                cand.intersect_with(self.g.neighbors(Layer::Union, v));
            }
        }
        cand
    }

    /// Every unplaced vertex needs `need` neighbours among the vertices that
    /// can still end up within distance r of it.
    fn feasible(&self) -> bool {
        let i = self.order.len();
        let mut reach = self.free.clone();
        for &v in self.order[i.saturating_sub(self.r)..].iter().chain(&self.order[..self.r.min(i)]) {
            reach.insert(v);
        }
        self.free.iter().all(|u| self.g.degree_into(Layer::Union, u, &reach) >= self.need)
    }

    fn extend(&mut self, meter: &mut Meter) -> Result<bool, Exhausted> {
        if self.order.len() == self.n {
            return Ok(true);
        }
        let last = self.order.len() == self.n - 1;
        for v in &self.candidates() {
            // Reflection symmetry: v_1 < v_{n−1}.
            if last && self.n >= 3 && v < self.order[1] {
                continue;
            }
            meter.tick()?;
            self.order.push(v);
            self.free.remove(v);
            if self.feasible() && self.extend(meter)? {
                return Ok(true);
            }
            self.free.insert(v);
            self.order.pop();
        }
        Ok(false)
    }
}

/// Looks for an ordering of all vertices whose r-th power lies in the union
/// graph.
///
/// Vertex 0 is fixed first and v_1 < v_{n−1} is required, so each cycle is
/// visited once. Candidates are tried in increasing id order.
pub fn find_power_ham_cycle(
    g: &LayeredGraph,
    r: usize,
    meter: &mut Meter,
) -> Result<SearchOutcome<Vec<usize>>, SearchError> {
    let n = g.n();
    if r == 0 || n < r + 1 {
        return Err(SearchError::InvalidInput("need r ≥ 1 and n ≥ r + 1"));
    }
    let need = (2 * r).min(n - 1);
    if g.min_degree(Layer::Union) < need {
        return Ok(SearchOutcome::NotFound);
    }
    let mut free = VertexSet::full(n);
    free.remove(0);
    let mut search = CycleSearch { g, r, n, need, order: alloc::vec![0], free };
    Ok(match search.extend(meter) {
        Ok(true) => SearchOutcome::Found(search.order),
        Ok(false) => SearchOutcome::NotFound,
        Err(Exhausted) => SearchOutcome::BudgetExceeded,
    })
}
