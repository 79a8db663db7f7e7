use alloc::vec::Vec;

use super::bicanonical::{search_with_retries, Engine};
use super::extend::is_extendible;
use super::{PipelineError, PipelineParams};
use crate::generators::derive_seed;
use crate::graph_core::{Layer, LayeredGraph, SetTuple, VertexSet, VertexTuple};
use crate::power_structs::PowerPath;

/// Connect the clique `s` to the clique `t` through the 2k+4 sets `sets`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectJob {
    pub s: VertexTuple,
    pub t: VertexTuple,
    pub sets: SetTuple,
}

/// Connects every job by a (2k+1)-path s ++ inner ++ t whose inner part is
/// `sets`-bicanonical. Jobs are handled one after another; each path avoids
/// `used`, all job endpoints and every earlier path.
pub fn connect_cliques(
    g: &LayeredGraph,
    k: usize,
    jobs: &[ConnectJob],
    used: &VertexSet,
    params: &PipelineParams,
    seed: u64,
) -> Result<Vec<PowerPath>, PipelineError> {
    let m = 2 * k + 2;
    let layer = params.layer_policy.gamma_layer();
    let mut blocked = used.clone();
    let mut seen = VertexSet::new(g.n());
    for (i, job) in jobs.iter().enumerate() {
        if job.sets.len() != 2 * k + 4 {
            return Err(PipelineError::LengthMismatch { expected: 2 * k + 4, found: job.sets.len() });
        }
        for e in [&job.s, &job.t] {
            if e.len() != m {
                return Err(PipelineError::LengthMismatch { expected: m, found: e.len() });
            }
            if !g.is_clique(Layer::Union, e.as_slice()) || e.to_set(g.n()).len() != m {
                return Err(PipelineError::InvalidInput("endpoints must be cliques on distinct vertices"));
            }
        }
        let ends = job.s.to_set(g.n()).union(&job.t.to_set(g.n()));
        if !ends.is_disjoint(&seen) {
            return Err(PipelineError::InvalidInput("endpoint cliques must be pairwise disjoint"));
        }
        seen.union_with(&ends);
        if job.s == job.t {
            continue;
        }
        let head = job.sets.upto(k + 1);
        let tail = job.sets.rev().upto(k + 1);
        let s_ok = is_extendible(g, layer, &job.s, &head, params.rho)?.is_extendible();
        let t_ok = is_extendible(g, layer, &job.t.rev(), &tail, params.rho)?.is_extendible();
        if !(s_ok && t_ok) {
            return Err(PipelineError::HypothesisViolated { job: i });
        }
    }

    blocked.union_with(&seen);
    let engine = Engine { g, k, policy: params.layer_policy };
    let mut paths = Vec::with_capacity(jobs.len());
    for (i, job) in jobs.iter().enumerate() {
        if job.s == job.t {
            paths.push(PowerPath::new(g, job.s.0.clone(), 2 * k + 1)?);
            continue;
        }
        let rev_t = job.t.rev();
        let slots: Vec<VertexSet> = (0..2 * k + 4)
            .map(|j| {
                let base = job.sets[j].difference(&blocked);
                if j <= k {
                    g.common_neighborhood_of(layer, &job.s.as_slice()[2 * j + 1..], &base)
                } else if j >= k + 3 {
                    let jj = 2 * k + 3 - j;
                    g.common_neighborhood_of(layer, &rev_t.as_slice()[2 * jj + 1..], &base)
                } else {
                    base
                }
            })
            .collect();
        if slots.iter().any(|v| v.len() < 2) {
            return Err(PipelineError::ConnectFailed { job: i });
        }
        let mut accept = |_: &[usize]| true;
        let (inner, _) = search_with_retries(&engine, &slots, params, derive_seed(seed, i as u64), &mut accept)
            .map_err(|_| PipelineError::ConnectFailed { job: i })?;
        let mut seq = job.s.0.clone();
        seq.extend_from_slice(&inner);
        seq.extend_from_slice(job.t.as_slice());
        let path = PowerPath::new(g, seq, 2 * k + 1)?;
        blocked.union_with(&VertexSet::from_slice(g.n(), &inner));
        paths.push(path);
    }
    Ok(paths)
}
