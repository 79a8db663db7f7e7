use alloc::format;
use alloc::vec::Vec;

use rand::seq::IteratorRandom;

use super::bicanonical::{search_with_retries, t_check, Engine};
use super::extend::{is_extendible, ExtendibilityCheck};
use super::{PipelineError, PipelineParams};
use crate::budget::SearchBudget;
use crate::exact_search::{find_power_path_between, PathSpan, SearchOutcome};
use crate::generators::{derive_seed, rng_from_seed, Rng64};
use crate::graph_core::{Layer, LayeredGraph, SetTuple, VertexSet, VertexTuple};
use crate::power_structs::PowerPath;

/// Largest absorbable set [`verify_absorbing`] enumerates.
pub const VERIFY_CAP: usize = 12;

/// `vertex` splices in between path positions `after` and `after + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InsertionSlot {
    pub vertex: usize,
    pub after: usize,
}

impl InsertionSlot {
    pub fn pair(&self) -> (usize, usize) {
        (self.after, self.after + 1)
    }
}

/// A path together with the vertices it can absorb.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsorberGadget {
    pub path: PowerPath,
    pub absorbable: VertexSet,
    pub slots: Vec<InsertionSlot>,
}

impl AbsorberGadget {
    pub fn slot_of(&self, x: usize) -> Option<&InsertionSlot> {
        self.slots.iter().find(|s| s.vertex == x)
    }

    /// Valid path, avoids the absorbable set, one in-range slot per vertex,
    /// no two vertices sharing a slot.
    pub fn is_well_formed(&self, g: &LayeredGraph) -> bool {
        let len = self.path.len();
        let mut afters: Vec<usize> = self.slots.iter().map(|s| s.after).collect();
        afters.sort_unstable();
        afters.dedup();
        self.path.validate(g).is_ok()
            && self.path.vertices().iter().all(|&v| !self.absorbable.contains(v))
            && self.slots.len() == self.absorbable.len()
            && afters.len() == self.slots.len()
            && self.slots.iter().all(|s| self.absorbable.contains(s.vertex) && s.after + 1 < len)
    }
}

/// Checks every X* ⊆ X: a path with the gadget's endpoints on exactly
/// V(P) ∪ X* must exist. Slots are only checked for well-formedness; the
/// paths themselves come from exhaustive search.
pub fn verify_absorbing(
    g: &LayeredGraph,
    gadget: &AbsorberGadget,
    budget: &SearchBudget,
) -> Result<bool, PipelineError> {
    let xs = gadget.absorbable.to_vec();
    if xs.len() > VERIFY_CAP {
        return Err(PipelineError::TooLarge { size: xs.len(), cap: VERIFY_CAP });
    }
    if !gadget.is_well_formed(g) {
        return Ok(false);
    }
    let r = gadget.path.r();
    let (s, t) = gadget.path.endpoints()?;
    let base = gadget.path.vertex_set(g.n());
    for mask in 0u32..1 << xs.len() {
        let mut allowed = base.clone();
        for (i, &x) in xs.iter().enumerate() {
            if mask & 1 << i != 0 {
                allowed.insert(x);
            }
        }
        let mut meter = budget.meter();
        match find_power_path_between(g, &s, &t, r, &allowed, PathSpan::Spanning, &mut meter)? {
            SearchOutcome::Found(p) if p.vertex_set(g.n()) == allowed => {}
            SearchOutcome::BudgetExceeded => return Err(PipelineError::BudgetExceeded),
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Splices every vertex of `x_star` into its slot.
pub fn absorb(g: &LayeredGraph, gadget: &AbsorberGadget, x_star: &VertexSet) -> Result<PowerPath, PipelineError> {
    if !x_star.is_subset(&gadget.absorbable) {
        return Err(PipelineError::NotSubset);
    }
    let r = gadget.path.r();
    let mut slots: Vec<InsertionSlot> = Vec::with_capacity(x_star.len());
    for x in x_star {
        slots.push(*gadget.slot_of(x).ok_or(PipelineError::NotAbsorbable { vertex: x })?);
    }
    // Later positions first, so earlier slot indices stay put.
    slots.sort_by_key(|s| core::cmp::Reverse(s.after));
    let mut seq = gadget.path.vertices().to_vec();
    for slot in slots {
        let at = slot.after + 1;
        if at > seq.len() {
            return Err(PipelineError::NotAbsorbable { vertex: slot.vertex });
        }
        seq.insert(at, slot.vertex);
        let lo = at.saturating_sub(r);
        let hi = (at + r).min(seq.len() - 1);
        if !(lo..=hi).all(|i| i == at || g.has_edge(Layer::Union, seq[i], slot.vertex)) {
            return Err(PipelineError::NotAbsorbable { vertex: slot.vertex });
        }
    }
    Ok(PowerPath::new(g, seq, r)?)
}

/// An absorber with the coverage figures of the local construction.
#[derive(Clone, Debug)]
pub struct LocalAbsorber {
    pub gadget: AbsorberGadget,
    /// |V_i \ (V(P) ∪ Q)| per set.
    pub leftover: Vec<usize>,
    /// Allowed leftover range per set.
    pub band: Vec<(usize, usize)>,
    pub y_used: usize,
    pub y_limit: usize,
    /// rev(s) against (Y, V_{k+1}, …, V_2) \ (V(P) ∪ Q).
    pub s_check: ExtendibilityCheck,
    /// t against (Y, V_1, …, V_k) \ (V(P) ∪ Q).
    pub t_check: ExtendibilityCheck,
    /// Number of path pieces chained together.
    pub steps: usize,
}

/// N(x) restricted to each set.
fn nbhd(g: &LayeredGraph, layer: Layer, x: usize, sets: &[VertexSet]) -> Vec<VertexSet> {
    sets.iter().map(|v| v.intersection(g.neighbors(layer, x))).collect()
}

pub(crate) fn band(size: usize, gamma: f64, tol: f64) -> (usize, usize) {
    let target = gamma * size as f64;
    (libm::floor((1.0 - tol) * target + 1e-9) as usize, libm::ceil((1.0 + tol) * target - 1e-9) as usize)
}

enum Piece {
    Gadgets(Vec<usize>),
    Cover(usize),
}

/// Builds an X-absorbing (2k+1)-path inside (V_1 ∪ … ∪ V_{k+1} ∪ Y) \ Q that
/// leaves (1 ± tol)γ|V_i| vertices of every V_i, uses at most λ|Y| of Y and
/// has both endpoints extendible.
///
/// X is handled in batches of L = ⌊3(1−γ)/λ⌋. The first piece runs through
/// (N(x_1), N(x_1), …) for the first batch; every later piece attaches to
/// the current end through its common neighbourhoods and either carries the
/// next batch or covers further vertices.
#[allow(clippy::too_many_arguments)]
pub fn build_absorber_local(
    g: &LayeredGraph,
    k: usize,
    x: &VertexSet,
    sets: &SetTuple,
    y: &VertexSet,
    q: &VertexSet,
    alpha: f64,
    params: &PipelineParams,
    seed: u64,
) -> Result<LocalAbsorber, PipelineError> {
    params.validate()?;
    if sets.len() != k + 1 {
        return Err(PipelineError::LengthMismatch { expected: k + 1, found: sets.len() });
    }
    if x.len() > VERIFY_CAP {
        return Err(PipelineError::TooLarge { size: x.len(), cap: VERIFY_CAP });
    }
    let mut seen = x.union(y);
    if !x.is_disjoint(y) {
        return Err(PipelineError::InvalidInput("X and Y must be disjoint"));
    }
    for v in sets.iter() {
        if !v.is_disjoint(&seen) {
            return Err(PipelineError::InvalidInput("sets, X and Y must be pairwise disjoint"));
        }
        seen.union_with(v);
    }
    let layer = params.layer_policy.gamma_layer();
    for xv in x {
        if sets.iter().any(|v| (g.degree_into(Layer::Gamma, xv, v) as f64) < alpha * v.len() as f64 - 1e-9) {
            return Err(PipelineError::DegreeCondition { vertex: xv });
        }
    }

    let vp: Vec<VertexSet> = sets.iter().map(|v| v.difference(q)).collect();
    let ny = libm::ceil(params.lambda * y.len() as f64 - 1e-9) as usize;
    let y_limit = libm::floor(params.lambda * y.len() as f64 + 1e-9) as usize;
    let y_avail = y.difference(q);
    if y_avail.len() < ny || ny < 2 {
        return Err(PipelineError::InfeasibleParams(format!(
            "helper set leaves {} vertices outside Q, need {}",
            y_avail.len(),
            ny.max(2)
        )));
    }

    // Plan the pieces so that every set loses the same even number U.
    let l = (libm::floor(3.0 * (1.0 - params.gamma) / params.lambda) as usize).max(1);
    let xs = x.to_vec();
    let batches: Vec<Vec<usize>> = xs.chunks(l).map(<[usize]>::to_vec).collect();
    let first_groups = batches.first().map_or(1, |b| 2 * b.len());
    let u_min = 2 * first_groups + batches.iter().skip(1).map(|b| 2 + 4 * b.len()).sum::<usize>();
    let bands: Vec<(usize, usize)> = sets.iter().map(|v| band(v.len(), params.gamma, params.tol)).collect();
    let cap = vp.iter().map(VertexSet::len).min().unwrap_or(0);
    let u = (u_min..=cap)
        .step_by(2)
        .filter(|&u| vp.iter().zip(&bands).all(|(v, &(lo, hi))| (lo..=hi).contains(&(v.len() - u))))
        .min_by(|&a, &b| {
            let cost = |u: usize| {
                vp.iter()
                    .zip(sets.iter())
                    .map(|(v, s)| libm::fabs((v.len() - u) as f64 - params.gamma * s.len() as f64))
                    .sum::<f64>()
            };
            cost(a).partial_cmp(&cost(b)).expect("finite")
        })
        .ok_or_else(|| {
            PipelineError::InfeasibleParams(format!(
                "no even usage ≥ {u_min} leaves every set inside its band {bands:?} (available {cap})"
            ))
        })?;
    let mut pieces: Vec<Piece> = Vec::new();
    if batches.is_empty() {
        pieces.push(Piece::Cover(1));
    }
    pieces.extend(batches.iter().cloned().map(Piece::Gadgets));
    let mut extra = (u - u_min) / 2;
    while extra > 0 {
        let take = extra.min(2 * l + 1);
        pieces.push(Piece::Cover(take - 1));
        extra -= take;
    }
    let y_needed = 2 * (pieces.len() - 1);
    if y_needed > y_limit {
        return Err(PipelineError::InfeasibleParams(format!(
            "{} pieces need {y_needed} helper vertices, λ|Y| allows {y_limit}",
            pieces.len()
        )));
    }

    let mut last_err = PipelineError::NotFound;
    for attempt in 0..=params.retry_limit {
        let mut rng = rng_from_seed(derive_seed(seed, 0x100 + attempt as u64));
        let y_prime = VertexSet::from_iter_cap(g.n(), y_avail.iter().choose_multiple(&mut rng, ny));
        let plan = Plan { g, k, layer, params, sets, vp: &vp, y, y_prime: &y_prime, q, pieces: &pieces };
        match plan.run(&mut rng, derive_seed(seed, 0x200 + attempt as u64)) {
            Ok((gadget, s_check, t_check)) => {
                let used = gadget.path.vertex_set(g.n());
                let leftover: Vec<usize> = vp.iter().map(|v| v.difference(&used).len()).collect();
                let y_used = used.intersection_len(y);
                let in_band = leftover.iter().zip(&bands).all(|(&o, &(lo, hi))| lo <= o && o <= hi);
                if in_band && y_used <= y_limit && s_check.is_extendible() && t_check.is_extendible() {
                    return Ok(LocalAbsorber {
                        gadget,
                        leftover,
                        band: bands,
                        y_used,
                        y_limit,
                        s_check,
                        t_check,
                        steps: pieces.len(),
                    });
                }
                last_err = PipelineError::NotFound;
            }
            Err(e @ PipelineError::InfeasibleParams(_)) => return Err(e),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

struct Plan<'a> {
    g: &'a LayeredGraph,
    k: usize,
    layer: Layer,
    params: &'a PipelineParams,
    sets: &'a SetTuple,
    vp: &'a [VertexSet],
    y: &'a VertexSet,
    y_prime: &'a VertexSet,
    q: &'a VertexSet,
    pieces: &'a [Piece],
}

impl Plan<'_> {
    /// (Y, V_1, …, V_k) or (Y, V_{k+1}, …, V_2) minus the path and Q.
    fn final_sets(&self, used: &VertexSet, forward: bool) -> SetTuple {
        let k = self.k;
        let gone = used.union(self.q);
        let mut out = alloc::vec![self.y.difference(&gone)];
        if forward {
            out.extend((0..k).map(|i| self.sets[i].difference(&gone)));
        } else {
            out.extend((1..=k).rev().map(|i| self.sets[i].difference(&gone)));
        }
        SetTuple(out)
    }

    fn run(
        &self,
        rng: &mut Rng64,
        seed: u64,
    ) -> Result<(AbsorberGadget, ExtendibilityCheck, ExtendibilityCheck), PipelineError> {
        let (g, k, layer) = (self.g, self.k, self.layer);
        let n = g.n();
        let rho = self.params.rho;
        let m = 2 * k + 2;
        let engine = Engine { g, k, policy: self.params.layer_policy };
        let last = self.pieces.len() - 1;
        let mut seq: Vec<usize> = Vec::new();
        let mut slots_out: Vec<InsertionSlot> = Vec::new();
        let mut protect = VertexSet::new(n);

        for (idx, piece) in self.pieces.iter().enumerate() {
            let used = VertexSet::from_slice(n, &seq);
            let gone = used.union(&protect);
            let mut slots: Vec<VertexSet> = Vec::new();
            if idx > 0 {
                let t = &seq[seq.len() - m..];
                // Slot i lies in (Y', V_1, …, V_k)_i and sees t^{≥2i}.
                slots.push(g.common_neighborhood_of(layer, &t[1..], &self.y_prime.difference(&gone)));
                for i in 1..=k {
                    slots.push(g.common_neighborhood_of(layer, &t[2 * i + 1..], &self.vp[i - 1].difference(&gone)));
                }
                slots.push(self.vp[k].difference(&gone));
            }
            let prefix = slots.len();
            match piece {
                Piece::Gadgets(batch) => {
                    for (b, &xv) in batch.iter().enumerate() {
                        let avail: Vec<VertexSet> = self.vp.iter().map(|v| v.difference(&gone)).collect();
                        let nx = nbhd(g, layer, xv, &avail);
                        slots.extend(nx.iter().cloned());
                        slots.extend(nx);
                        let mid = prefix + (2 * b + 1) * (k + 1);
                        slots_out.push(InsertionSlot { vertex: xv, after: seq.len() + 2 * mid - 1 });
                    }
                }
                Piece::Cover(groups) => {
                    for _ in 0..*groups {
                        slots.extend(self.vp.iter().map(|v| v.difference(&gone)));
                    }
                }
            }
            if slots.len() < k + 1 || slots.iter().any(|v| v.len() < 2) {
                return Err(PipelineError::NotFound);
            }
            let base = seq.clone();
            let mut accept = |seg: &[usize]| {
                let mut full = base.clone();
                full.extend_from_slice(seg);
                let path_set = VertexSet::from_slice(n, &full);
                if idx == 0 {
                    let s = VertexTuple(full[..m].to_vec()).rev();
                    let vs = {
                        let mut v = alloc::vec![self.y_prime.difference(&path_set)];
                        v.extend((1..=k).rev().map(|i| self.vp[i].difference(&path_set)));
                        SetTuple(v)
                    };
                    if !is_extendible(g, layer, &s, &vs, rho).expect("lengths match").is_extendible() {
                        return false;
                    }
                }
                let t = VertexTuple(full[full.len() - m..].to_vec());
                if idx == last {
                    is_extendible(g, layer, &t, &self.final_sets(&path_set, true), rho)
                        .expect("lengths match")
                        .is_extendible()
                } else {
                    let gone = path_set.union(&protect);
                    let mut vt = alloc::vec![self.y_prime.clone()];
                    vt.extend(self.vp[..=k].iter().cloned());
                    t_check(g, layer, k, &full, &vt[0], &vt[1..], &gone, rho).is_extendible()
                }
            };
            let (seg, _) =
                search_with_retries(&engine, &slots, self.params, derive_seed(seed, idx as u64), &mut accept)?;
            seq.extend_from_slice(&seg);

            if idx == 0 {
                // Reserve part of each common neighbourhood of rev(s) for the end.
                let path_set = VertexSet::from_slice(n, &seq);
                let s = VertexTuple(seq[..m].to_vec()).rev();
                let mut vs = alloc::vec![self.y_prime.clone()];
                vs.extend((1..=k).rev().map(|i| self.vp[i].clone()));
                for (i, v) in vs.iter().enumerate() {
                    let size = libm::ceil(rho / 4.0 * v.len() as f64 - 1e-9) as usize;
                    let cand = g.common_neighborhood_of(layer, &s.as_slice()[2 * i + 1..], &v.difference(&path_set));
                    for u in cand.iter().choose_multiple(rng, size) {
                        protect.insert(u);
                    }
                }
            }
        }

        let path = PowerPath::new(g, seq, 2 * k + 1)?;
        let used = path.vertex_set(n);
        let s_check = is_extendible(g, layer, &path.s()?.rev(), &self.final_sets(&used, false), rho)?;
        let t_check = is_extendible(g, layer, &path.t()?, &self.final_sets(&used, true), rho)?;
        let absorbable = VertexSet::from_iter_cap(n, slots_out.iter().map(|s| s.vertex));
        Ok((AbsorberGadget { path, absorbable, slots: slots_out }, s_check, t_check))
    }
}
