use alloc::string::String;
use alloc::vec::Vec;

use super::pair::{check_pair, PairOptions, RegVerdict};
use super::{Partition, RegularityError};
use crate::generators::derive_seed;
use crate::graph_core::{Density, Layer, LayeredGraph, VertexSet};

/// Parameters of a slice of an ε-regular pair: taking δ-fractions of both
/// sides leaves an ε/δ-regular pair of density at least d − ε.
pub fn slice_regularity(eps: f64, delta: f64, d: f64) -> Result<(f64, f64), RegularityError> {
    if !(eps > 0.0 && eps <= delta && delta <= 0.5) {
        return Err(RegularityError::RangeViolation);
    }
    Ok((eps / delta, d - eps))
}

/// Cluster graph on the classes of a partition.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedGraph {
    pub t: usize,
    pub adj: Vec<VertexSet>,
    /// `densities[i][j]` for i ≠ j.
    pub densities: Vec<Vec<Density>>,
    pub verdicts: Vec<Vec<RegVerdict>>,
    /// Pairs the sampler could not decide. They are never edges.
    pub undecided: Vec<(usize, usize)>,
}

impl ReducedGraph {
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(VertexSet::len).min().unwrap_or(0)
    }

    /// The cluster graph as a layered graph with all edges in Γ.
    pub fn to_graph(&self) -> LayeredGraph {
        let mut g = LayeredGraph::empty(self.t);
        for i in 0..self.t {
            for j in self.adj[i].iter().filter(|&j| j > i) {
                g.add_gamma_edge(i, j).expect("in range");
            }
        }
        g
    }

    /// Whether 1, 2, ..., t in this order span the k-th power of a cycle.
    pub fn is_power_cycle_in_order(&self, k: usize) -> bool {
        let t = self.t;
        (0..t).all(|i| (1..=k.min(t / 2)).all(|d| self.has_edge(i, (i + d) % t)))
    }
}

/// Builds the (ε, d)-reduced graph: {i, j} is an edge when the pair is
/// certified ε-regular with density at least d.
pub fn reduced_graph(
    g: &LayeredGraph,
    layer: Layer,
    partition: &Partition,
    eps: f64,
    d: f64,
    opts: &PairOptions,
) -> Result<ReducedGraph, RegularityError> {
    let t = partition.t();
    let mut rg = ReducedGraph {
        t,
        adj: (0..t).map(|_| VertexSet::new(t)).collect(),
        densities: alloc::vec![alloc::vec![Density { edges: 0, pairs: 1 }; t]; t],
        verdicts: alloc::vec![alloc::vec![RegVerdict::Regular; t]; t],
        undecided: Vec::new(),
    };
    for i in 0..t {
        for j in i + 1..t {
            let pair_opts = PairOptions { seed: derive_seed(opts.seed, (i * t + j) as u64), ..*opts };
            let rep = check_pair(g, layer, &partition.classes[i], &partition.classes[j], eps, &pair_opts)?;
            rg.densities[i][j] = rep.density;
            rg.densities[j][i] = rep.density;
            rg.verdicts[i][j] = rep.verdict;
            rg.verdicts[j][i] = rep.verdict;
            match rep.verdict {
                RegVerdict::Regular if rep.density.as_f64() >= d => {
                    rg.adj[i].insert(j);
                    rg.adj[j].insert(i);
                }
                RegVerdict::Undecided => rg.undecided.push((i, j)),
                _ => {}
            }
        }
    }
    Ok(rg)
}

/// Which of the degree-form properties a partition satisfies.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeFormReport {
    /// |V_0| ≤ εn.
    pub exceptional_small: bool,
    /// Equal class sizes within [(1−ε)n/t, n/t].
    pub sizes_ok: bool,
    /// deg_{G'}(v) > deg_G(v) − (d+ε)n; `None` without a reference graph.
    pub degrees_kept: Option<bool>,
    /// No edges inside any class.
    pub classes_empty: bool,
    /// Every pair certified regular with density 0 or at least d.
    pub pairs_ok: bool,
    pub violations: Vec<String>,
}

impl DegreeFormReport {
    pub fn all_pass(&self) -> bool {
        self.exceptional_small
            && self.sizes_ok
            && self.degrees_kept != Some(false)
            && self.classes_empty
            && self.pairs_ok
    }
}

/// Checks a partition of `g` against the degree form of the regularity
/// lemma. `reference` is the graph `g` was cleaned from, if any.
pub fn check_degree_form(
    g: &LayeredGraph,
    layer: Layer,
    partition: &Partition,
    eps: f64,
    d: f64,
    reference: Option<&LayeredGraph>,
    opts: &PairOptions,
) -> DegreeFormReport {
    let n = g.n() as f64;
    let t = partition.t();
    let mut violations = Vec::new();

    let exceptional_small = partition.exceptional.len() as f64 <= eps * n + 1e-9;
    if !exceptional_small {
        violations.push(alloc::format!("|V_0| = {} exceeds εn", partition.exceptional.len()));
    }
    let size = partition.class_size() as f64;
    let sizes_ok = t > 0 && size >= (1.0 - eps) * n / t as f64 - 1e-9 && size <= n / t as f64 + 1e-9;
    if !sizes_ok {
        violations.push(alloc::format!("class size {size} outside [(1-ε)n/t, n/t] for t = {t}"));
    }
    let degrees_kept = reference.map(|h| {
        let slack = (d + eps) * n;
        let bad: Vec<usize> =
            (0..g.n()).filter(|&v| g.degree(layer, v) as f64 <= h.degree(layer, v) as f64 - slack).collect();
        if let Some(&v) = bad.first() {
            violations.push(alloc::format!("vertex {v} lost more than (d+ε)n of its degree"));
        }
        bad.is_empty()
    });
    let mut classes_empty = true;
    for (i, c) in partition.classes.iter().enumerate() {
        if g.edges_within(layer, c) > 0 {
            classes_empty = false;
            violations.push(alloc::format!("class {} has internal edges", i + 1));
        }
    }
    let mut pairs_ok = true;
    for i in 0..t {
        for j in i + 1..t {
            let pair_opts = PairOptions { seed: derive_seed(opts.seed, (i * t + j) as u64), ..*opts };
            match check_pair(g, layer, &partition.classes[i], &partition.classes[j], eps, &pair_opts) {
                Ok(rep) => {
                    let dense_or_empty = rep.density.is_zero() || rep.density.as_f64() >= d;
                    if rep.verdict != RegVerdict::Regular || !dense_or_empty {
                        pairs_ok = false;
                        violations.push(alloc::format!(
                            "pair ({}, {}) is {} with density {}",
                            i + 1,
                            j + 1,
                            rep.verdict,
                            rep.density
                        ));
                    }
                }
                Err(e) => {
                    pairs_ok = false;
                    violations.push(alloc::format!("pair ({}, {}): {e}", i + 1, j + 1));
                }
            }
        }
    }
    DegreeFormReport { exceptional_small, sizes_ok, degrees_kept, classes_empty, pairs_ok, violations }
}

/// Whether the reduced graph has δ(R) ≥ (k/(k+1) + α/4)·t.
#[allow(clippy::too_many_arguments)]
pub fn reduced_min_degree_inherits(
    g: &LayeredGraph,
    layer: Layer,
    partition: &Partition,
    eps: f64,
    d: f64,
    alpha: f64,
    k: usize,
    opts: &PairOptions,
) -> Result<bool, RegularityError> {
    let rg = reduced_graph(g, layer, partition, eps, d, opts)?;
    let k = k as f64;
    let need = (k / (k + 1.0) + alpha / 4.0) * rg.t as f64;
    Ok(rg.t > 0 && rg.min_degree() as f64 >= need - 1e-9)
}
