use alloc::vec::Vec;

use hashbrown::HashSet;

use super::{SearchError, SearchOutcome};
use crate::budget::{Exhausted, Meter};
use crate::graph_core::{Layer, LayeredGraph, VertexSet, VertexTuple};
use crate::power_structs::{is_power_path, PowerPath};

/// How much of the allowed set a connecting path must use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathSpan {
    /// Any path inside the allowed set. Shorter paths are tried first.
    Any,
    /// The path must use every allowed vertex.
    Spanning,
}

/// Failed states are remembered up to this many entries.
const MEMO_CAP: usize = 1 << 21;

struct PathSearch<'a> {
    g: &'a LayeredGraph,
    r: usize,
    t: &'a [usize],
    inner: usize,
    seq: Vec<usize>,
    free: VertexSet,
    spanning: bool,
    failed: HashSet<(VertexSet, Vec<usize>)>,
}

impl PathSearch<'_> {
    fn candidates(&self) -> VertexSet {
        let r = self.r;
        let mut cand = self.free.clone();
        for &v in &self.seq[self.seq.len() - r..] {
            cand.intersect_with(self.g.neighbors(Layer::Union, v));
        }
        // Inner slot i sits m − i positions before t_0.
        let i = self.seq.len() - (r + 1);
        let gap = self.inner - i;
        if gap <= r {
            for &v in &self.t[..=r - gap] {
                cand.intersect_with(self.g.neighbors(Layer::Union, v));
            }
        }
        cand
    }

    /// In a spanning path every unplaced vertex has r neighbours on each side,
    /// all drawn from unplaced vertices, the current window and t.
    fn feasible(&self) -> bool {
        if !self.spanning {
            return true;
        }
        let mut reach = self.free.clone();
        for &v in self.seq[self.seq.len() - self.r..].iter().chain(self.t) {
            reach.insert(v);
        }
        self.free.iter().all(|u| self.g.degree_into(Layer::Union, u, &reach) >= 2 * self.r)
    }

    fn order(&self, cand: &VertexSet) -> Vec<usize> {
        let mut list = cand.to_vec();
        if self.spanning {
            // Most constrained first; ties by id.
            list.sort_by_key(|&v| (self.g.degree_into(Layer::Union, v, &self.free), v));
        }
        list
    }

    fn extend(&mut self, meter: &mut Meter) -> Result<bool, Exhausted> {
        if self.seq.len() == self.r + 1 + self.inner {
            return Ok(true);
        }
        let key = (self.free.clone(), self.seq[self.seq.len() - self.r..].to_vec());
        if self.spanning && self.failed.contains(&key) {
            return Ok(false);
        }
        for v in self.order(&self.candidates()) {
            meter.tick()?;
            self.seq.push(v);
            self.free.remove(v);
            if self.feasible() && self.extend(meter)? {
                return Ok(true);
            }
            self.free.insert(v);
            self.seq.pop();
        }
        if self.spanning && self.failed.len() < MEMO_CAP {
            self.failed.insert(key);
        }
        Ok(false)
    }
}

/// Searches for an r-path that starts with the clique `s`, ends with the
/// clique `t` and stays inside `allowed`.
///
/// With [`PathSpan::Any`] the number of vertices between `s` and `t` is
/// deepened from zero, so the first path found is a shortest one. With
/// [`PathSpan::Spanning`] the path must cover `allowed` exactly.
pub fn find_power_path_between(
    g: &LayeredGraph,
    s: &VertexTuple,
    t: &VertexTuple,
    r: usize,
    allowed: &VertexSet,
    span: PathSpan,
    meter: &mut Meter,
) -> Result<SearchOutcome<PowerPath>, SearchError> {
    let m = r + 1;
    for e in [s, t] {
        if r == 0 || e.len() != m || !g.is_clique(Layer::Union, e.as_slice()) || e.iter().any(|&v| v >= g.n()) {
            return Err(SearchError::InvalidEndpoint);
        }
        if e.to_set(g.n()).len() != m {
            return Err(SearchError::InvalidEndpoint);
        }
    }
    let ends = s.to_set(g.n()).union(&t.to_set(g.n()));
    if !ends.is_subset(allowed) {
        return Err(SearchError::InvalidInput("allowed set must contain both endpoints"));
    }
    let pool = allowed.difference(&ends);
    let spanning = span == PathSpan::Spanning;

    // Paths in which s and t overlap have no inner vertices at all.
    if pool.is_empty() || !spanning {
        for overlap in (1..=m).rev() {
            if s.as_slice()[m - overlap..] != t.as_slice()[..overlap] {
                continue;
            }
            let mut seq = s.0.clone();
            seq.extend_from_slice(&t.as_slice()[overlap..]);
            let uses_all = VertexSet::from_slice(g.n(), &seq) == *allowed;
            if is_power_path(g, &seq, r) && (!spanning || uses_all) {
                return Ok(SearchOutcome::Found(PowerPath::unchecked(seq, r)));
            }
        }
    }
    if !s.to_set(g.n()).is_disjoint(&t.to_set(g.n())) {
        return Ok(SearchOutcome::NotFound);
    }

    let lengths: Vec<usize> = if spanning { alloc::vec![pool.len()] } else { (0..=pool.len()).collect() };
    for inner in lengths {
        // Pairs between s and t that are close enough to need an edge.
        let joins = (0..m).all(|a| (0..m).all(|j| m + inner + j - a > r || g.has_edge(Layer::Union, s[a], t[j])));
        if !joins {
            continue;
        }
        let mut search = PathSearch {
            g,
            r,
            t: t.as_slice(),
            inner,
            seq: s.0.clone(),
            free: pool.clone(),
            spanning,
            failed: HashSet::new(),
        };
        if !search.feasible() {
            continue;
        }
        match search.extend(meter) {
            Ok(true) => {
                let mut seq = search.seq;
                seq.extend_from_slice(t.as_slice());
                return Ok(SearchOutcome::Found(PowerPath::unchecked(seq, r)));
            }
            Ok(false) => {}
            Err(Exhausted) => return Ok(SearchOutcome::BudgetExceeded),
        }
    }
    Ok(SearchOutcome::NotFound)
}
