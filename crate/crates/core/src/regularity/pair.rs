use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;

use super::RegularityError;
use crate::generators::rng_from_seed;
use crate::graph_core::{Density, Layer, LayeredGraph, VertexSet};

/// Largest side the exact checker enumerates.
pub const DEFAULT_EXACT_CAP: usize = 16;

const TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegVerdict {
    Regular,
    Irregular,
    /// Sampling found no violation; regularity is not established.
    Undecided,
}

impl fmt::Display for RegVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegVerdict::Regular => "regular",
            RegVerdict::Irregular => "irregular",
            RegVerdict::Undecided => "undecided",
        })
    }
}

/// Verdict on one pair (V_1, V_2).
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub v1: VertexSet,
    pub v2: VertexSet,
    pub eps: f64,
    pub density: Density,
    pub verdict: RegVerdict,
    /// Present exactly when the verdict is irregular.
    pub witness: Option<(VertexSet, VertexSet)>,
    /// Largest |d(U_1, U_2) − d(V_1, V_2)| seen.
    pub max_deviation: f64,
}

impl RegularityReport {
    /// Recomputes the witness deviation from the graph.
    pub fn witness_holds(&self, g: &LayeredGraph, layer: Layer) -> bool {
        let Some((u1, u2)) = &self.witness else { return false };
        let f1 = size_floor(self.eps, self.v1.len());
        let f2 = size_floor(self.eps, self.v2.len());
        let sizes_ok = u1.len() >= f1 && u2.len() >= f2 && u1.is_subset(&self.v1) && u2.is_subset(&self.v2);
        let d = g.density(layer, u1, u2).map(Density::as_f64);
        sizes_ok && d.is_ok_and(|d| (d - self.density.as_f64()).abs() > self.eps + TOL)
    }
}

/// Smallest subset size counted by the definition: ⌈ε|V|⌉, at least 1.
pub fn size_floor(eps: f64, len: usize) -> usize {
    (libm::ceil(eps * len as f64 - 1e-9) as usize).max(1)
}

fn check_sides(v1: &VertexSet, v2: &VertexSet) -> Result<(), RegularityError> {
    if v1.is_empty() || v2.is_empty() {
        return Err(RegularityError::EmptySet);
    }
    if !v1.is_disjoint(v2) {
        return Err(RegularityError::NotDisjoint);
    }
    Ok(())
}

fn regular_report(v1: &VertexSet, v2: &VertexSet, eps: f64, density: Density, dev: f64) -> RegularityReport {
    RegularityReport {
        v1: v1.clone(),
        v2: v2.clone(),
        eps,
        density,
        verdict: RegVerdict::Regular,
        witness: None,
        max_deviation: dev,
    }
}

/// Exhaustive ε-regularity check.
///
/// Every subset U of the smaller side with |U| ≥ ⌈ε|V|⌉ is enumerated. For a
/// fixed U and size s, the densest and sparsest s-subsets of the other side
/// are its s vertices of largest and smallest degree into U, so sorting
/// degrees covers all subsets of the other side exactly.
pub fn is_eps_regular_exact(
    g: &LayeredGraph,
    layer: Layer,
    v1: &VertexSet,
    v2: &VertexSet,
    eps: f64,
    cap: usize,
) -> Result<RegularityReport, RegularityError> {
    check_sides(v1, v2)?;
    let density = g.density(layer, v1, v2).map_err(|_| RegularityError::NotDisjoint)?;
    let swap = v1.len() > v2.len();
    let (a, b) = if swap { (v2, v1) } else { (v1, v2) };
    if a.len() > cap || a.len() > 30 {
        return Err(RegularityError::TooLarge { size: a.len(), cap });
    }
    let al = a.to_vec();
    let bl = b.to_vec();
    // Neighbourhood of each b inside `a`, as a bitmask over positions in `al`.
    let masks: Vec<u32> = bl
        .iter()
        .map(|&w| al.iter().enumerate().filter(|&(_, &u)| g.has_edge(layer, u, w)).fold(0, |m, (i, _)| m | 1 << i))
        .collect();
    let fa = size_floor(eps, al.len());
    let fb = size_floor(eps, bl.len());
    let d = density.as_f64();
    let mut best = (0.0f64, 0u32, Vec::new());
    let mut degs: Vec<(u32, usize)> = Vec::with_capacity(bl.len());
    let mut prefix: Vec<u64> = Vec::with_capacity(bl.len() + 1);
    for mask in 1u32..(1 << al.len()) {
        let ua = mask.count_ones();
        if (ua as usize) < fa {
            continue;
        }
        degs.clear();
        degs.extend(masks.iter().enumerate().map(|(i, m)| ((m & mask).count_ones(), i)));
        degs.sort_unstable_by(|x, y| y.cmp(x));
        prefix.clear();
        prefix.push(0u64);
        for &(c, _) in &degs {
            prefix.push(prefix.last().unwrap() + c as u64);
        }
        let len = degs.len();
        for s in fb..=len {
            let pairs = (ua as usize * s) as f64;
            let top = (prefix[s] as f64 / pairs - d).abs();
            if top > best.0 {
                best = (top, mask, degs[..s].iter().map(|&(_, i)| bl[i]).collect());
            }
            let bottom = ((prefix[len] - prefix[len - s]) as f64 / pairs - d).abs();
            if bottom > best.0 {
                best = (bottom, mask, degs[len - s..].iter().map(|&(_, i)| bl[i]).collect());
            }
        }
    }
    let (dev, mask, wb) = best;
    if dev <= eps + TOL {
        return Ok(regular_report(v1, v2, eps, density, dev));
    }
    let wa =
        VertexSet::from_iter_cap(g.n(), al.iter().enumerate().filter(|&(i, _)| mask & 1 << i != 0).map(|(_, &u)| u));
    let wb = VertexSet::from_slice(g.n(), &wb);
    let witness = if swap { (wb, wa) } else { (wa, wb) };
    Ok(RegularityReport {
        v1: v1.clone(),
        v2: v2.clone(),
        eps,
        density,
        verdict: RegVerdict::Irregular,
        witness: Some(witness),
        max_deviation: dev,
    })
}

/// Tests `samples` random subset pairs of the floor sizes. Never returns
/// a regular verdict.
pub fn is_eps_regular_sampled(
    g: &LayeredGraph,
    layer: Layer,
    v1: &VertexSet,
    v2: &VertexSet,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<RegularityReport, RegularityError> {
    if samples == 0 {
        return Err(RegularityError::NoSamples);
    }
    check_sides(v1, v2)?;
    let density = g.density(layer, v1, v2).map_err(|_| RegularityError::NotDisjoint)?;
    let d = density.as_f64();
    let (l1, l2) = (v1.to_vec(), v2.to_vec());
    let (f1, f2) = (size_floor(eps, l1.len()), size_floor(eps, l2.len()));
    let mut rng = rng_from_seed(seed);
    let mut best: Option<(f64, VertexSet, VertexSet)> = None;
    for _ in 0..samples {
        let u1 = VertexSet::from_iter_cap(g.n(), l1.choose_multiple(&mut rng, f1).copied());
        let u2 = VertexSet::from_iter_cap(g.n(), l2.choose_multiple(&mut rng, f2).copied());
        let dev = (g.density(layer, &u1, &u2).expect("nonempty disjoint").as_f64() - d).abs();
        if best.as_ref().is_none_or(|b| dev > b.0) {
            best = Some((dev, u1, u2));
        }
    }
    let (dev, u1, u2) = best.expect("samples ≥ 1");
    let irregular = dev > eps + TOL;
    Ok(RegularityReport {
        v1: v1.clone(),
        v2: v2.clone(),
        eps,
        density,
        verdict: if irregular { RegVerdict::Irregular } else { RegVerdict::Undecided },
        witness: irregular.then_some((u1, u2)),
        max_deviation: dev,
    })
}

/// How [`check_pair`] decides a pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairOptions {
    pub exact_cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for PairOptions {
    fn default() -> Self {
        PairOptions { exact_cap: DEFAULT_EXACT_CAP, samples: 200, seed: 0 }
    }
}

/// Decides one pair with the strongest method available: pairs of density
/// exactly 0 or 1 are regular outright (every subpair has the same density),
/// small pairs are checked exhaustively, the rest are sampled.
pub fn check_pair(
    g: &LayeredGraph,
    layer: Layer,
    v1: &VertexSet,
    v2: &VertexSet,
    eps: f64,
    opts: &PairOptions,
) -> Result<RegularityReport, RegularityError> {
    check_sides(v1, v2)?;
    let density = g.density(layer, v1, v2).map_err(|_| RegularityError::NotDisjoint)?;
    if density.is_zero() || density.is_one() {
        return Ok(regular_report(v1, v2, eps, density, 0.0));
    }
    if v1.len().min(v2.len()) <= opts.exact_cap {
        is_eps_regular_exact(g, layer, v1, v2, eps, opts.exact_cap)
    } else {
        is_eps_regular_sampled(g, layer, v1, v2, eps, opts.samples, opts.seed)
    }
}
