use alloc::format;
use alloc::vec::Vec;

use super::absorber::{band, AbsorberGadget, InsertionSlot};
use super::bicanonical::build_bicanonical_path;
use super::extend::ExtendibilityCheck;
use super::{PipelineError, PipelineParams};
use crate::graph_core::{Layer, LayeredGraph, SetTuple, VertexSet};
use crate::regularity::Partition;

/// Output of [`absorbing_covering`].
#[derive(Clone, Debug)]
pub struct CoveringResult {
    pub gadget: AbsorberGadget,
    pub z: usize,
    /// |W_i \ V(P)| per class.
    pub leftover: Vec<usize>,
    pub band: (usize, usize),
    /// rev(s) against (W_z, W_{k+1}, …, W_2) \ V(P).
    pub s_check: ExtendibilityCheck,
    /// t against (W_z, W_1, …, W_k) \ V(P).
    pub t_check: ExtendibilityCheck,
    /// Pairs (x, j): x is absorbed inside block j.
    pub assignment: Vec<(usize, usize)>,
    pub groups_per_block: usize,
}

/// Smallest class adjacent in `reduced` to each of the first k+1 classes.
pub fn choose_z(reduced: &LayeredGraph, k: usize) -> Option<usize> {
    (0..reduced.n()).find(|&z| (0..=k).all(|i| reduced.has_edge(Layer::Gamma, i, z)))
}

/// Leftover range (1 ± tol)·γ·size, rounded outwards.
pub fn leftover_band(size: usize, gamma: f64, tol: f64) -> (usize, usize) {
    band(size, gamma, tol)
}

/// Balanced assignment of X to blocks with room for two gadget groups per
/// vertex; block 0 also keeps its first and last group for covering.
fn assign(valid: &[Vec<usize>], xs: &[usize], blocks: usize, groups: usize) -> Option<Vec<(usize, usize)>> {
    let cap = |j: usize| (groups - if j == 0 { 2.min(groups) } else { 0 }) / 2;
    let mut load = alloc::vec![0usize; blocks];
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by_key(|&i| (valid[i].len(), xs[i]));
    let mut out = Vec::with_capacity(xs.len());
    for i in order {
        let j = valid[i].iter().copied().filter(|&j| load[j] < cap(j)).min_by_key(|&j| (load[j], j))?;
        load[j] += 1;
        out.push((xs[i], j));
    }
    out.sort_unstable();
    Some(out)
}

/// Builds an X-absorbing (2k+1)-path through the classes W_1..W_t that
/// leaves (1 ± tol)γ|W_i| vertices of every class and whose endpoints are
/// extendible towards W_z.
///
/// The classes are grouped into blocks K_j of k+1 consecutive classes. Each
/// x goes to a block where it has at least (α/2)|W|/t Γ-neighbours in every
/// class, and the path runs once around the blocks, starting and ending in
/// K_1. Inside a block it passes twice through N(x) for each assigned x and
/// then covers the block until the leftover target is reached.
#[allow(clippy::too_many_arguments)]
pub fn absorbing_covering(
    g: &LayeredGraph,
    k: usize,
    x: &VertexSet,
    w: &Partition,
    reduced: &LayeredGraph,
    z: usize,
    alpha: f64,
    gamma: f64,
    params: &PipelineParams,
    seed: u64,
) -> Result<CoveringResult, PipelineError> {
    params.validate()?;
    let t = w.t();
    let b = k + 1;
    if t < b || !t.is_multiple_of(b) {
        return Err(PipelineError::InvalidInput("the number of classes must be a positive multiple of k+1"));
    }
    if reduced.n() != t {
        return Err(PipelineError::LengthMismatch { expected: t, found: reduced.n() });
    }
    let size = w.class_size();
    if size < 2 || w.classes.iter().any(|c| c.len() != size) {
        return Err(PipelineError::InvalidInput("classes must have equal size of at least two"));
    }
    let all: VertexSet = w.classes.iter().fold(VertexSet::new(g.n()), |acc, c| acc.union(c));
    if !x.is_disjoint(&all) {
        return Err(PipelineError::InvalidInput("X must avoid the classes"));
    }
    let cyclic = (0..t).all(|i| (1..=k).all(|d| (i + d) % t == i || reduced.has_edge(Layer::Gamma, i, (i + d) % t)));
    if !cyclic {
        return Err(PipelineError::InvalidInput("class order is not the k-th power of a cycle in the reduced graph"));
    }
    if z >= t || !(0..=k).all(|i| reduced.has_edge(Layer::Gamma, i, z)) {
        return Err(PipelineError::InvalidInput("z must be adjacent to each of the first k+1 classes"));
    }
    let kf = k as f64;
    let need = (kf / (kf + 1.0) + alpha) * all.len() as f64;
    if let Some(bad) = x.iter().find(|&v| (g.degree_into(Layer::Gamma, v, &all) as f64) < need - 1e-9) {
        return Err(PipelineError::DegreeCondition { vertex: bad });
    }

    let blocks = t / b;
    let class = |j: usize, i: usize| &w.classes[j * b + i];
    let threshold = alpha / 2.0 * all.len() as f64 / t as f64;
    let xs = x.to_vec();
    let mut valid = Vec::with_capacity(xs.len());
    for &v in &xs {
        let ok: Vec<usize> = (0..blocks)
            .filter(|&j| (0..b).all(|i| g.degree_into(Layer::Gamma, v, class(j, i)) as f64 >= threshold - 1e-9))
            .collect();
        if ok.is_empty() {
            return Err(PipelineError::DegreeCondition { vertex: v });
        }
        valid.push(ok);
    }

    // Group counts whose leftover lands in the band, nearest to γ|W_i| first.
    let (lo, hi) = band(size, gamma, params.tol);
    let target = gamma * size as f64;
    let mut options: Vec<usize> = (1..=size / 2).filter(|&gc| (lo..=hi).contains(&(size - 2 * gc))).collect();
    options.sort_by(|&a, &c| {
        let d = |gc: usize| libm::fabs((size - 2 * gc) as f64 - target);
        d(a).partial_cmp(&d(c)).expect("finite").then(c.cmp(&a))
    });
    let Some((groups, assignment)) =
        options.iter().find_map(|&gc| (gc >= 2).then(|| assign(&valid, &xs, blocks, gc)).flatten().map(|a| (gc, a)))
    else {
        return Err(PipelineError::InfeasibleParams(format!(
            "{} vertices to absorb, {blocks} blocks, class size {size}: no group count with leftover in [{lo}, {hi}] has room",
            xs.len()
        )));
    };

    let layer = params.layer_policy.gamma_layer();
    let cover = |j: usize| (0..b).map(|i| class(j, i).clone()).collect::<Vec<_>>();
    let mut tuple: Vec<VertexSet> = Vec::with_capacity(blocks * groups * b);
    let mut slots = Vec::with_capacity(xs.len());
    let mut push_gadgets = |tuple: &mut Vec<VertexSet>, j: usize| {
        for &(v, _) in assignment.iter().filter(|&&(_, jj)| jj == j) {
            let nx: Vec<VertexSet> = (0..b).map(|i| class(j, i).intersection(g.neighbors(layer, v))).collect();
            let second = tuple.len() / b + 1;
            tuple.extend(nx.iter().cloned());
            tuple.extend(nx);
            slots.push(InsertionSlot { vertex: v, after: 2 * second * b - 1 });
        }
    };
    let load = |j: usize| assignment.iter().filter(|&&(_, jj)| jj == j).count();
    let rest0 = groups - 2 - 2 * load(0);
    tuple.extend(cover(0));
    push_gadgets(&mut tuple, 0);
    for _ in 0..rest0 / 2 {
        tuple.extend(cover(0));
    }
    for j in 1..blocks {
        push_gadgets(&mut tuple, j);
        for _ in 0..groups - 2 * load(j) {
            tuple.extend(cover(j));
        }
    }
    for _ in 0..rest0 - rest0 / 2 + 1 {
        tuple.extend(cover(0));
    }
    debug_assert_eq!(tuple.len(), blocks * groups * b);

    let wz = &w.classes[z];
    let built = build_bicanonical_path(g, k, &SetTuple(tuple), wz, wz, params.rho, params, seed)?;
    let used = built.path.vertex_set(g.n());
    let leftover: Vec<usize> = w.classes.iter().map(|c| c.difference(&used).len()).collect();
    let gadget = AbsorberGadget { path: built.path, absorbable: x.clone(), slots };
    Ok(CoveringResult {
        gadget,
        z,
        leftover,
        band: (lo, hi),
        s_check: built.s_check.expect("W_z is nonempty"),
        t_check: built.t_check.expect("W_z is nonempty"),
        assignment,
        groups_per_block: groups,
    })
}
