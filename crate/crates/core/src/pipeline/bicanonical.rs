use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::extend::{is_extendible, ExtendibilityCheck};
use super::{LayerPolicy, PipelineError, PipelineParams};
use crate::budget::{Exhausted, Meter};
use crate::generators::{derive_seed, rng_from_seed, Rng64};
use crate::graph_core::{Layer, LayeredGraph, SetTuple, VertexSet, VertexTuple};
use crate::power_structs::PowerPath;

/// The layer a (2k+1)-path of the bicanonical shape needs between the
/// 0-based positions p < q, or `None` when the pair is not required.
///
/// The skeleton pairs {v_{2j−1}, v_{2j}} and {v_{2j}, v_{2j+2k+1}} may use
/// either layer ([`Layer::Union`]): a sampled pair that Γ already contains is
/// stored in Γ only. Every other pair within distance 2k+1 must be in Γ.
pub fn required_layer(p: usize, q: usize, k: usize) -> Option<Layer> {
    let gap = q.checked_sub(p)?;
    if gap == 0 || gap > 2 * k + 1 {
        return None;
    }
    let skeleton = (gap == 1 && p.is_multiple_of(2)) || (gap == 2 * k + 1 && !p.is_multiple_of(2));
    Some(if skeleton { Layer::Union } else { Layer::Gamma })
}

/// Whether every required pair of `seq` is present in the layer
/// [`required_layer`] assigns to it.
pub fn layer_audit(g: &LayeredGraph, seq: &[usize], k: usize) -> bool {
    let r = 2 * k + 1;
    (0..seq.len()).all(|q| {
        (q.saturating_sub(r)..q).all(|p| {
            let layer = required_layer(p, q, k).expect("pair within range");
            g.has_edge(layer, seq[p], seq[q])
        })
    })
}

/// Depth-first search over bicanonical sequences.
pub(crate) struct Engine<'a> {
    pub g: &'a LayeredGraph,
    pub k: usize,
    pub policy: LayerPolicy,
}

impl Engine<'_> {
    fn candidates(&self, seq: &[usize], used: &VertexSet, slots: &[VertexSet], rng: &mut Rng64) -> Vec<usize> {
        let q = seq.len();
        let mut cand = slots[q / 2].difference(used);
        for (p, &u) in seq.iter().enumerate().skip(q.saturating_sub(2 * self.k + 1)) {
            let layer = match self.policy {
                LayerPolicy::Union => Layer::Union,
                LayerPolicy::Split => required_layer(p, q, self.k).expect("pair within range"),
            };
            cand.intersect_with(self.g.neighbors(layer, u));
        }
        let mut list = cand.to_vec();
        list.shuffle(rng);
        list
    }

    /// A sequence with seq[2i], seq[2i+1] ∈ slots[i] satisfying the layer
    /// rules, screened by `accept`. `Ok(None)` means the space is exhausted.
    pub fn search(
        &self,
        slots: &[VertexSet],
        rng: &mut Rng64,
        meter: &mut Meter,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Result<Option<Vec<usize>>, Exhausted> {
        let len = 2 * slots.len();
        let mut seq: Vec<usize> = Vec::with_capacity(len);
        let mut used = VertexSet::new(self.g.n());
        if len == 0 {
            return Ok(accept(&seq).then_some(seq));
        }
        // One frame per level; stack.len() == seq.len() + 1.
        let mut stack: Vec<(Vec<usize>, usize)> = alloc::vec![(self.candidates(&seq, &used, slots, rng), 0)];
        while let Some((cands, cursor)) = stack.last_mut() {
            let Some(&v) = cands.get(*cursor) else {
                stack.pop();
                if let Some(u) = seq.pop() {
                    used.remove(u);
                }
                continue;
            };
            *cursor += 1;
            meter.tick()?;
            seq.push(v);
            used.insert(v);
            if seq.len() == len {
                if accept(&seq) {
                    return Ok(Some(seq));
                }
                seq.pop();
                used.remove(v);
                continue;
            }
            let next = self.candidates(&seq, &used, slots, rng);
            stack.push((next, 0));
        }
        Ok(None)
    }
}

/// rev(s) against (Ys, V_{k+1}, …, V_2) minus the path.
#[allow(clippy::too_many_arguments)]
pub(crate) fn s_check(
    g: &LayeredGraph,
    layer: Layer,
    k: usize,
    seq: &[usize],
    ys: &VertexSet,
    first: &[VertexSet],
    path_set: &VertexSet,
    rho: f64,
) -> ExtendibilityCheck {
    let s = VertexTuple(seq[..2 * k + 2].to_vec()).rev();
    let mut sets = alloc::vec![ys.difference(path_set)];
    sets.extend((1..=k).rev().map(|i| first[i].difference(path_set)));
    is_extendible(g, layer, &s, &SetTuple(sets), rho).expect("lengths match")
}

/// t against (Yt, V_{ℓ−k}, …, V_{ℓ−1}) minus the path; `last` holds V_{ℓ−k}..V_ℓ.
#[allow(clippy::too_many_arguments)]
pub(crate) fn t_check(
    g: &LayeredGraph,
    layer: Layer,
    k: usize,
    seq: &[usize],
    yt: &VertexSet,
    last: &[VertexSet],
    path_set: &VertexSet,
    rho: f64,
) -> ExtendibilityCheck {
    let t = VertexTuple(seq[seq.len() - (2 * k + 2)..].to_vec());
    let mut sets = alloc::vec![yt.difference(path_set)];
    sets.extend(last[..k].iter().map(|v| v.difference(path_set)));
    is_extendible(g, layer, &t, &SetTuple(sets), rho).expect("lengths match")
}

/// A path produced by [`build_bicanonical_path`] with its endpoint checks.
#[derive(Clone, Debug)]
pub struct BicanonicalPath {
    pub path: PowerPath,
    /// rev(s) against (Ys, V_{k+1}, …, V_2) \ V(P); absent when Ys is empty.
    pub s_check: Option<ExtendibilityCheck>,
    /// t against (Yt, V_{ℓ−k}, …, V_{ℓ−1}) \ V(P); absent when Yt is empty.
    pub t_check: Option<ExtendibilityCheck>,
    pub attempts: u32,
}

/// Runs the engine with re-randomised restarts. Exhaustion of the whole
/// space is final; running out of budget triggers the next attempt.
pub(crate) fn search_with_retries(
    engine: &Engine,
    slots: &[VertexSet],
    params: &PipelineParams,
    seed: u64,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<(Vec<usize>, u32), PipelineError> {
    for attempt in 0..=params.retry_limit {
        let mut rng = rng_from_seed(derive_seed(seed, attempt as u64));
        let mut meter = params.budget.meter();
        match engine.search(slots, &mut rng, &mut meter, accept) {
            Ok(Some(seq)) => return Ok((seq, attempt + 1)),
            Ok(None) => return Err(PipelineError::NotFound),
            Err(Exhausted) => continue,
        }
    }
    Err(PipelineError::BudgetExceeded)
}

/// Builds a `sets`-bicanonical (2k+1)-path whose non-skeleton pairs are Γ
/// edges (under [`LayerPolicy::Split`]). When `ys` (resp. `yt`) is nonempty, rev(s)
/// (resp. t) must in addition be ρ-extendible into the sets of the endpoint
/// properties.
#[allow(clippy::too_many_arguments)]
pub fn build_bicanonical_path(
    g: &LayeredGraph,
    k: usize,
    sets: &SetTuple,
    ys: &VertexSet,
    yt: &VertexSet,
    rho: f64,
    params: &PipelineParams,
    seed: u64,
) -> Result<BicanonicalPath, PipelineError> {
    let ell = sets.len();
    if ell < k + 1 {
        return Err(PipelineError::InvalidInput("need at least k+1 sets"));
    }
    if sets.iter().any(|v| v.len() < 2) {
        return Err(PipelineError::InvalidInput("every set needs two vertices"));
    }
    let engine = Engine { g, k, policy: params.layer_policy };
    let layer = params.layer_policy.gamma_layer();
    let slots = sets.as_slice();
    let checks = |seq: &[usize]| {
        let path_set = VertexSet::from_slice(g.n(), seq);
        let s = (!ys.is_empty()).then(|| s_check(g, layer, k, seq, ys, &slots[..=k], &path_set, rho));
        let t = (!yt.is_empty()).then(|| t_check(g, layer, k, seq, yt, &slots[ell - k - 1..], &path_set, rho));
        (s, t)
    };
    let mut accept = |seq: &[usize]| {
        let (s, t) = checks(seq);
        s.is_none_or(|c| c.is_extendible()) && t.is_none_or(|c| c.is_extendible())
    };
    let (seq, attempts) = search_with_retries(&engine, slots, params, seed, &mut accept)?;
    let (s_check, t_check) = checks(&seq);
    let path = PowerPath::new(g, seq, 2 * k + 1)?;
    Ok(BicanonicalPath { path, s_check, t_check, attempts })
}
