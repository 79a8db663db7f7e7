use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;

use super::absorber::absorb;
use super::connect::{connect_cliques, ConnectJob};
use super::covering::{absorbing_covering, choose_z, CoveringResult};
use super::{PipelineError, PipelineParams};
use crate::exact_search::{find_power_ham_cycle, SearchOutcome};
use crate::generators::{derive_seed, rng_from_seed};
use crate::graph_core::{Layer, LayeredGraph, SetTuple, VertexSet};
use crate::power_structs::{is_power_hamilton_cycle, PathError, PowerPath};
use crate::regularity::{check_degree_form, reduced_graph, PairOptions, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Precondition,
    Partition,
    Split,
    AbsorbingCovering1,
    AbsorbingCovering2,
    Connect,
    Merge,
    Absorb1,
    Absorb2,
    Validate,
}

impl Stage {
    pub const ALL: [Stage; 10] = [
        Stage::Precondition,
        Stage::Partition,
        Stage::Split,
        Stage::AbsorbingCovering1,
        Stage::AbsorbingCovering2,
        Stage::Connect,
        Stage::Merge,
        Stage::Absorb1,
        Stage::Absorb2,
        Stage::Validate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Precondition => "precondition",
            Stage::Partition => "partition",
            Stage::Split => "split",
            Stage::AbsorbingCovering1 => "absorbing_covering_1",
            Stage::AbsorbingCovering2 => "absorbing_covering_2",
            Stage::Connect => "connect",
            Stage::Merge => "merge",
            Stage::Absorb1 => "absorb_1",
            Stage::Absorb2 => "absorb_2",
            Stage::Validate => "validate",
        }
    }
}

impl core::str::FromStr for Stage {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL.into_iter().find(|st| st.name() == s).ok_or(PipelineError::InvalidInput("unknown stage"))
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A successful run: the cyclic order and one log line per stage.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineRun {
    pub order: Vec<usize>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineFailure {
    pub stage: Stage,
    /// Randomised attempts spent in the failing stage.
    pub attempts: u32,
    pub error: PipelineError,
    pub trace: Vec<String>,
}

impl fmt::Display for PipelineFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} failed after {} attempt(s): {}", self.stage, self.attempts, self.error)
    }
}

impl core::error::Error for PipelineFailure {}

/// Checks that `seq` is the r-th power of a Hamilton cycle of `g` and
/// returns it as an order.
pub fn close_cycle(g: &LayeredGraph, seq: Vec<usize>, r: usize) -> Result<Vec<usize>, PipelineError> {
    if r == 0 {
        return Err(PathError::ZeroPower.into());
    }
    if is_power_hamilton_cycle(g, &seq, r)? {
        Ok(seq)
    } else {
        Err(PipelineError::InvalidInput("sequence does not close into a power cycle"))
    }
}

/// Whether `seq` is the r-th power of a (not necessarily spanning) cycle.
fn is_power_cycle(g: &LayeredGraph, seq: &[usize], r: usize) -> Result<(), PipelineError> {
    if seq.len() <= 2 * r {
        return Err(PipelineError::InvalidInput("cycle too short"));
    }
    let mut wrapped = seq.to_vec();
    wrapped.extend_from_slice(&seq[..r]);
    // Wrapping repeats the first r vertices; check adjacency only.
    for (j, &v) in wrapped.iter().enumerate() {
        for &u in &wrapped[j.saturating_sub(r)..j] {
            if !g.has_edge(Layer::Union, u, v) {
                return Err(PathError::MissingEdge(u, v).into());
            }
        }
    }
    if VertexSet::from_slice(g.n(), seq).len() != seq.len() {
        return Err(PathError::RepeatedVertex(seq[0]).into());
    }
    Ok(())
}

fn budget_attempts(e: &PipelineError, params: &PipelineParams) -> u32 {
    match e {
        PipelineError::BudgetExceeded | PipelineError::NotFound | PipelineError::ConnectFailed { .. } => {
            params.retry_limit + 1
        }
        _ => 1,
    }
}

fn classes_partition(n: usize, classes: Vec<VertexSet>) -> Result<Partition, PipelineError> {
    let mut rest = VertexSet::full(n);
    for c in &classes {
        rest.difference_with(c);
    }
    Ok(Partition::new(n, rest, classes)?)
}

fn cover_line(tag: &str, c: &CoveringResult) -> String {
    format!(
        "{tag}: {} vertices, absorbs {}, {} groups per block, leftover {:?} in band {:?}",
        c.gadget.path.len(),
        c.gadget.absorbable.len(),
        c.groups_per_block,
        c.leftover,
        c.band
    )
}

/// Builds the (2k+1)-st power of a Hamilton cycle in the union graph of
/// `g`, given a partition of Γ in degree form.
///
/// Every class is split at random into a reservoir X_i and a main part W_i.
/// One covering path P_1 runs through the W_i and can absorb any subset of
/// X; a second path P_2 runs through the X_i and can absorb any subset of
/// V_0 ∪ (W \ V(P_1)). Two connecting paths close P_1 and P_2 into a cycle,
/// and the vertices still missing are absorbed into P_1 and P_2.
pub fn full_pipeline(
    g: &LayeredGraph,
    k: usize,
    partition: &Partition,
    alpha: f64,
    params: &PipelineParams,
    seed: u64,
) -> Result<PipelineRun, PipelineFailure> {
    let mut trace = Vec::new();
    macro_rules! fail {
        ($stage:expr, $attempts:expr, $err:expr) => {{
            let error = $err;
            trace.push(format!("{}: failed: {}", $stage, error));
            return Err(PipelineFailure { stage: $stage, attempts: $attempts, error, trace });
        }};
    }
    macro_rules! attempt {
        ($stage:expr, $e:expr) => {
            match $e {
                Ok(v) => v,
                Err(err) => {
                    let err: PipelineError = err.into();
                    let a = budget_attempts(&err, params);
                    fail!($stage, a, err)
                }
            }
        };
    }

    let n = g.n();
    let r = 2 * k + 1;
    let opts = PairOptions { seed: derive_seed(seed, 0), ..PairOptions::default() };

    // Precondition
    attempt!(Stage::Precondition, params.validate());
    if k == 0 {
        fail!(Stage::Precondition, 1, PipelineError::InvalidParam("k"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        fail!(Stage::Precondition, 1, PipelineError::InvalidParam("alpha"));
    }
    if partition.n() != n {
        fail!(Stage::Precondition, 1, PipelineError::LengthMismatch { expected: n, found: partition.n() });
    }
    let form = check_degree_form(g, Layer::Gamma, partition, params.eps, params.d, None, &opts);
    if !form.all_pass() {
        for v in &form.violations {
            trace.push(format!("precondition: {v}"));
        }
        fail!(Stage::Precondition, 1, PipelineError::InvalidInput("partition is not in degree form"));
    }
    trace.push(format!(
        "precondition: n = {n}, k = {k}, t = {}, |V_0| = {}",
        partition.t(),
        partition.exceptional.len()
    ));

    // Partition
    let mut part = partition.clone();
    let moved = part.truncate_to_multiple(k + 1);
    if moved > 0 {
        trace.push(format!("partition: moved {moved} trailing class(es) into V_0"));
    }
    let t = part.t();
    if t < k + 1 {
        fail!(Stage::Partition, 1, PipelineError::InvalidInput("fewer than k+1 classes"));
    }
    let rg = attempt!(Stage::Partition, reduced_graph(g, Layer::Gamma, &part, params.eps, params.d, &opts));
    let kf = k as f64;
    let need = (kf / (kf + 1.0) + alpha / 4.0) * t as f64;
    if (rg.min_degree() as f64) < need - 1e-9 {
        fail!(
            Stage::Partition,
            1,
            PipelineError::InfeasibleParams(format!(
                "reduced graph has minimum degree {} < {need:.2}",
                rg.min_degree()
            ))
        );
    }
    let mut meter = params.budget.meter();
    let order = match find_power_ham_cycle(&rg.to_graph(), k, &mut meter) {
        Ok(SearchOutcome::Found(o)) => o,
        Ok(SearchOutcome::NotFound) => fail!(Stage::Partition, 1, PipelineError::NotFound),
        Ok(SearchOutcome::BudgetExceeded) => fail!(Stage::Partition, 1, PipelineError::BudgetExceeded),
        Err(e) => fail!(Stage::Partition, 1, e.into()),
    };
    let part = part.relabel(&order);
    let mut reduced = LayeredGraph::empty(t);
    for i in 0..t {
        for j in i + 1..t {
            if rg.has_edge(order[i], order[j]) {
                reduced.add_gamma_edge(i, j).expect("in range");
            }
        }
    }
    let Some(z) = choose_z(&reduced, k) else {
        fail!(Stage::Partition, 1, PipelineError::NoCommonNeighborClass);
    };
    trace.push(format!("partition: class order {order:?}, z = {z}"));

    // Split
    let mut split = None;
    let mut last_bad = 0;
    let mut tries = 0;
    for attempt in 0..=params.retry_limit {
        tries = attempt + 1;
        let mut rng = rng_from_seed(derive_seed(derive_seed(seed, 1), attempt as u64));
        let mut xs = Vec::with_capacity(t);
        let mut ws = Vec::with_capacity(t);
        for c in &part.classes {
            let mut members = c.to_vec();
            members.shuffle(&mut rng);
            let take = libm::round(params.xi * members.len() as f64) as usize;
            xs.push(VertexSet::from_slice(n, &members[..take]));
            ws.push(VertexSet::from_slice(n, &members[take..]));
        }
        if xs[0].len() < 2 || ws[0].len() < 2 {
            fail!(
                Stage::Split,
                tries,
                PipelineError::InfeasibleParams(format!("class size {} too small to split", part.class_size()))
            );
        }
        let x_all = xs.iter().fold(VertexSet::new(n), |a, c| a.union(c));
        let w_all = ws.iter().fold(VertexSet::new(n), |a, c| a.union(c));
        let bound = kf / (kf + 1.0) + alpha / 2.0;
        let bad = (0..n).find(|&v| {
            (g.degree_into(Layer::Gamma, v, &w_all) as f64) < bound * w_all.len() as f64 - 1e-9
                || (g.degree_into(Layer::Gamma, v, &x_all) as f64) < bound * x_all.len() as f64 - 1e-9
        });
        match bad {
            None => {
                split = Some((xs, ws, x_all));
                break;
            }
            Some(v) => last_bad = v,
        }
    }
    let Some((xs, ws, x_all)) = split else {
        fail!(Stage::Split, tries, PipelineError::DegreeCondition { vertex: last_bad });
    };
    trace.push(format!("split: |X_i| = {}, |W_i| = {} after {tries} draw(s)", xs[0].len(), ws[0].len()));
    let wpart = attempt!(Stage::Split, classes_partition(n, ws.clone()));
    let xpart = attempt!(Stage::Split, classes_partition(n, xs.clone()));

    // First covering path, through W, absorbing X.
    let c1 = attempt!(
        Stage::AbsorbingCovering1,
        absorbing_covering(g, k, &x_all, &wpart, &reduced, z, alpha / 4.0, params.gamma, params, derive_seed(seed, 2))
    );
    trace.push(cover_line("absorbing_covering_1", &c1));
    let p1 = &c1.gadget.path;
    let v_p1 = p1.vertex_set(n);

    // Second covering path, through X, absorbing V_0'.
    let mut v0p = part.exceptional.clone();
    for w in &ws {
        v0p.union_with(&w.difference(&v_p1));
    }
    let c2 = attempt!(
        Stage::AbsorbingCovering2,
        absorbing_covering(
            g,
            k,
            &v0p,
            &xpart,
            &reduced,
            z,
            alpha / 4.0,
            params.gamma_reservoir,
            params,
            derive_seed(seed, 3)
        )
    );
    trace.push(cover_line("absorbing_covering_2", &c2));
    let p2 = &c2.gadget.path;
    let v_p2 = p2.vertex_set(n);

    // Connections t(P_1) → s(P_2) and t(P_2) → s(P_1).
    let wl = |i: usize| ws[i].difference(&v_p1);
    let xl = |i: usize| xs[i].difference(&v_p2);
    let mut sets1 = Vec::with_capacity(2 * k + 4);
    sets1.push(wl(z));
    sets1.extend((0..=k).map(wl));
    sets1.extend((0..=k).map(xl));
    sets1.push(xl(z));
    let mut sets2 = Vec::with_capacity(2 * k + 4);
    sets2.push(xl(z));
    sets2.extend((0..=k).map(xl));
    sets2.extend((0..=k).map(wl));
    sets2.push(wl(z));
    let (s1, t1) = attempt!(Stage::Connect, p1.endpoints());
    let (s2, t2) = attempt!(Stage::Connect, p2.endpoints());
    let jobs = [ConnectJob { s: t1, t: s2, sets: SetTuple(sets1) }, ConnectJob { s: t2, t: s1, sets: SetTuple(sets2) }];
    let used = v_p1.union(&v_p2);
    let links = attempt!(Stage::Connect, connect_cliques(g, k, &jobs, &used, params, derive_seed(seed, 4)));
    trace.push(format!("connect: inner lengths {} and {}", links[0].len() - 2 * (r + 1), links[1].len() - 2 * (r + 1)));

    // Merge into a cycle.
    let m = r + 1;
    let splice = |a: &PowerPath, b: &PowerPath| {
        let mut seq = a.vertices().to_vec();
        seq.extend_from_slice(&links[0].vertices()[m..]);
        seq.extend_from_slice(&b.vertices()[m..]);
        let back = links[1].vertices();
        seq.extend_from_slice(&back[m..back.len() - m]);
        seq
    };
    let cycle = splice(p1, p2);
    attempt!(Stage::Merge, is_power_cycle(g, &cycle, r));
    let on_cycle = VertexSet::from_slice(n, &cycle);
    trace.push(format!("merge: cycle on {} of {n} vertices", cycle.len()));

    let q1 = x_all.difference(&on_cycle);
    let p1_star = attempt!(Stage::Absorb1, absorb(g, &c1.gadget, &q1));
    trace.push(format!("absorb_1: {} reservoir vertices", q1.len()));
    let q2 = v0p.difference(&on_cycle);
    let p2_star = attempt!(Stage::Absorb2, absorb(g, &c2.gadget, &q2));
    trace.push(format!("absorb_2: {} leftover vertices", q2.len()));

    let order = attempt!(Stage::Validate, close_cycle(g, splice(&p1_star, &p2_star), r));
    trace.push(format!("validate: power {r} Hamilton cycle on {n} vertices"));
    Ok(PipelineRun { order, trace })
}
