//! Graph models: G(n, p), perturbation, and the extremal constructions.
//!
//! Randomness comes from ChaCha8 seeded with a 64-bit value. Independent
//! streams (one per trial, one per pipeline stage) are derived with
//! [`derive_seed`], which XORs the base seed with a SplitMix64 hash of the
//! stream index.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph_core::{Layer, LayeredGraph, VertexSet};

/// The generator used everywhere in this crate.
pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenError {
    InvalidProbability(f64),
    InvalidAlpha(f64),
    /// The requested size leaves a construction empty or degenerate.
    TooSmall(&'static str),
    /// No sample met the degree bound.
    Exhausted {
        attempts: usize,
    },
    /// A construction needs a different `k`.
    UnsupportedK(usize),
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidProbability(p) => write!(f, "edge probability {p} outside [0, 1]"),
            GenError::InvalidAlpha(a) => write!(f, "alpha = {a} out of range"),
            GenError::TooSmall(what) => write!(f, "instance too small: {what}"),
            GenError::Exhausted { attempts } => {
                write!(f, "no graph met the degree bound after {attempts} attempts")
            }
            GenError::UnsupportedK(k) => write!(f, "construction not available for k = {k}"),
        }
    }
}

impl core::error::Error for GenError {}

fn check_p(p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::InvalidProbability(p))
    }
}

/// Samples G(n, p): each pair `u < v` in lexicographic order is kept with
/// probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Vec<(usize, usize)>, GenError> {
    check_p(p)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(edges)
}

/// Adds a G(n, p) sample as the random layer of `gamma`, dropping pairs Γ
/// already has. Any previous random layer is replaced.
pub fn perturb(gamma: &LayeredGraph, p: f64, seed: u64) -> Result<LayeredGraph, GenError> {
    let edges = gen_gnp(gamma.n(), p, seed)?;
    Ok(gamma.with_random_layer(&edges).expect("sampled pairs are in range"))
}

/// A graph together with a vertex partition it was built from.
#[derive(Clone, Debug)]
pub struct Classed {
    pub graph: LayeredGraph,
    pub classes: Vec<VertexSet>,
}

fn consecutive_classes(sizes: &[usize]) -> Vec<VertexSet> {
    let n: usize = sizes.iter().sum();
    let mut next = 0;
    sizes
        .iter()
        .map(|&s| {
            let set = VertexSet::from_iter_cap(n, next..next + s);
            next += s;
            set
        })
        .collect()
}

/// Sizes of `parts` classes covering `n` vertices, differing by at most one.
pub fn balanced_sizes(n: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| n / parts + usize::from(i < n % parts)).collect()
}

/// Blow-up of a graph on `sizes.len()` vertices: class `i` has `sizes[i]`
/// vertices and classes `i`, `j` are completely joined in Γ when `{i, j}` is
/// a base edge. Classes are independent.
pub fn gen_blowup(base_edges: &[(usize, usize)], sizes: &[usize]) -> Classed {
    let classes = consecutive_classes(sizes);
    let mut g = LayeredGraph::empty(sizes.iter().sum());
    for &(i, j) in base_edges {
        for u in &classes[i] {
            for v in &classes[j] {
                g.add_gamma_edge(u, v).expect("blow-up classes are disjoint");
            }
        }
    }
    Classed { graph: g, classes }
}

/// Complete multipartite graph with the given class sizes, in Γ.
pub fn gen_complete_multipartite(sizes: &[usize]) -> Result<Classed, GenError> {
    if sizes.len() < 2 {
        return Err(GenError::TooSmall("need at least two classes"));
    }
    let t = sizes.len();
    let base: Vec<_> = (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j))).collect();
    Ok(gen_blowup(&base, sizes))
}

/// The X/Y construction: Γ[X] empty, Γ[Y] complete, Γ[X, Y] complete.
#[derive(Clone, Debug)]
pub struct XyConstruction {
    pub graph: LayeredGraph,
    pub x: VertexSet,
    pub y: VertexSet,
}

fn xy_with_size(n: usize, x_len: usize) -> XyConstruction {
    let mut g = LayeredGraph::empty(n);
    for u in 0..n {
        for v in (u + 1).max(x_len)..n {
            g.add_gamma_edge(u, v).expect("in range");
        }
    }
    XyConstruction { graph: g, x: VertexSet::from_iter_cap(n, 0..x_len), y: VertexSet::from_iter_cap(n, x_len..n) }
}

/// The k = 2 construction with |X| = round((1/3 − α)n). X is `0..|X|`.
pub fn gen_xy_construction(n: usize, alpha: f64) -> Result<XyConstruction, GenError> {
    if !(alpha > 0.0 && alpha < 1.0 / 3.0) {
        return Err(GenError::InvalidAlpha(alpha));
    }
    let x_len = libm::round((1.0 / 3.0 - alpha) * n as f64) as usize;
    if x_len == 0 || x_len >= n {
        return Err(GenError::TooSmall("X must be nonempty and proper"));
    }
    Ok(xy_with_size(n, x_len))
}

/// Same shape for general `k` with |X| = round((1/(k+1) − α)n).
///
/// Only the k = 2 case is backed by the known obstruction argument.
#[cfg(feature = "experimental")]
pub fn gen_xy_construction_k(n: usize, k: usize, alpha: f64) -> Result<XyConstruction, GenError> {
    if k == 0 {
        return Err(GenError::UnsupportedK(k));
    }
    let share = 1.0 / (k + 1) as f64;
    if !(alpha > 0.0 && alpha < share) {
        return Err(GenError::InvalidAlpha(alpha));
    }
    let x_len = libm::round((share - alpha) * n as f64) as usize;
    if x_len == 0 || x_len >= n {
        return Err(GenError::TooSmall("X must be nonempty and proper"));
    }
    Ok(xy_with_size(n, x_len))
}

/// A graph in Γ with minimum degree at least `delta_min`.
///
/// Each attempt draws G(n, q) with q = delta_min/(n−1), then for every vertex
/// still below the bound adds one edge to a random non-neighbour. The first
/// attempt that meets the bound is returned.
pub fn gen_dirac_random(n: usize, delta_min: usize, seed: u64, max_attempts: usize) -> Result<LayeredGraph, GenError> {
    if n == 0 || delta_min > n - 1 {
        return Err(GenError::TooSmall("delta_min exceeds n - 1"));
    }
    let q = delta_min as f64 / (n - 1).max(1) as f64;
    let mut rng = rng_from_seed(seed);
    for _ in 0..max_attempts {
        let mut g = LayeredGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(q) {
                    g.add_gamma_edge(u, v).expect("in range");
                }
            }
        }
        for v in 0..n {
            if g.degree(Layer::Gamma, v) < delta_min {
                let mut options: Vec<usize> = (0..n).filter(|&u| u != v && !g.has_edge(Layer::Gamma, u, v)).collect();
                if let Some(&u) = options.as_mut_slice().choose(&mut rng) {
                    g.add_gamma_edge(u, v).expect("in range");
                }
            }
        }
        if g.min_degree(Layer::Gamma) >= delta_min {
            return Ok(g);
        }
    }
    Err(GenError::Exhausted { attempts: max_attempts })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Γ empty, random layer G(n, p).
    Gnp,
    /// Balanced complete (k+1)-partite Γ plus G(n, p).
    CompleteMultipartite,
    /// X/Y construction plus G(n, p).
    XyConstruction,
    /// Γ sampled with δ(Γ) ≥ (k/(k+1) + α)n; no random layer.
    DiracRandom,
    /// The same Γ as `DiracRandom`, plus G(n, p).
    Perturbed,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Gnp => "gnp",
            ModelKind::CompleteMultipartite => "complete_multipartite",
            ModelKind::XyConstruction => "xy_construction",
            ModelKind::DiracRandom => "dirac_random",
            ModelKind::Perturbed => "perturbed",
        }
    }
}

impl FromStr for ModelKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "gnp" => ModelKind::Gnp,
            "complete_multipartite" => ModelKind::CompleteMultipartite,
            "xy_construction" => ModelKind::XyConstruction,
            "dirac_random" => ModelKind::DiracRandom,
            "perturbed" => ModelKind::Perturbed,
            _ => return Err(()),
        })
    }
}

/// Edge probability given directly or as C with p = C/n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeProb {
    P(f64),
    C(f64),
}

impl EdgeProb {
    /// The probability for `n` vertices, capped at 1.
    pub fn p(self, n: usize) -> f64 {
        match self {
            EdgeProb::P(p) => p,
            EdgeProb::C(c) => (c / n as f64).min(1.0),
        }
    }
}

/// Everything needed to sample one instance of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub prob: EdgeProb,
    pub seed: u64,
}

/// One sampled instance with whatever labelling its construction provides.
#[derive(Clone, Debug)]
pub struct ModelInstance {
    pub graph: LayeredGraph,
    pub classes: Option<Vec<VertexSet>>,
    pub x: Option<VertexSet>,
}

const DIRAC_ATTEMPTS: usize = 1000;

impl ModelConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        match self.prob {
            EdgeProb::P(p) => check_p(p)?,
            EdgeProb::C(c) if c < 0.0 || c.is_nan() => return Err(GenError::InvalidProbability(c)),
            EdgeProb::C(_) => {}
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(GenError::InvalidAlpha(self.alpha));
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        self.prob.p(self.n)
    }

    /// δ(Γ) target (k/(k+1) + α)n, rounded up.
    pub fn dirac_bound(&self) -> usize {
        let k = self.k as f64;
        (libm::ceil((k / (k + 1.0) + self.alpha) * self.n as f64) as usize).min(self.n.saturating_sub(1))
    }

    /// The deterministic layer. Uses `seed` only for `DiracRandom`/`Perturbed`.
    pub fn gamma(&self, seed: u64) -> Result<ModelInstance, GenError> {
        self.validate()?;
        Ok(match self.kind {
            ModelKind::Gnp => ModelInstance { graph: LayeredGraph::empty(self.n), classes: None, x: None },
            ModelKind::CompleteMultipartite => {
                let c = gen_complete_multipartite(&balanced_sizes(self.n, self.k + 1))?;
                ModelInstance { graph: c.graph, classes: Some(c.classes), x: None }
            }
            ModelKind::XyConstruction => {
                if self.k != 2 {
                    return Err(GenError::UnsupportedK(self.k));
                }
                let xy = gen_xy_construction(self.n, self.alpha)?;
                ModelInstance { graph: xy.graph, classes: None, x: Some(xy.x) }
            }
            ModelKind::DiracRandom | ModelKind::Perturbed => {
                let g = gen_dirac_random(self.n, self.dirac_bound(), seed, DIRAC_ATTEMPTS)?;
                ModelInstance { graph: g, classes: None, x: None }
            }
        })
    }

    /// Samples the instance for stream `trial` of this config.
    pub fn sample(&self, trial: u64) -> Result<ModelInstance, GenError> {
        self.sample_with_prob(trial, self.p())
    }

    /// Same as [`sample`](Self::sample) with the edge probability overridden.
    pub fn sample_with_prob(&self, trial: u64, p: f64) -> Result<ModelInstance, GenError> {
        let seed = derive_seed(self.seed, trial);
        let mut inst = self.gamma(derive_seed(seed, 0))?;
        if self.kind != ModelKind::DiracRandom {
            inst.graph = perturb(&inst.graph, p, derive_seed(seed, 1))?;
        }
        Ok(inst)
    }
}
