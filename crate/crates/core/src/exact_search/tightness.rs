use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{count_cliques_in_layer, max_clique_packing, SearchError};
use crate::budget::Meter;
use crate::graph_core::{Layer, LayeredGraph, VertexSet};

/// Which extremal construction a graph claims to come from, with its labels.
#[derive(Clone, Debug)]
pub enum Construction {
    Xy { x: VertexSet },
    Multipartite { classes: Vec<VertexSet> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The certificate rules out the cycle power.
    Pass,
    /// Preconditions hold but the certificate does not rule it out.
    Fail,
    /// The random layer is too rich for the argument to apply.
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inapplicable => "INAPPLICABLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessReport {
    pub verdict: Verdict,
    /// Power of the cycle being ruled out.
    pub r: usize,
    pub random_triangles: u64,
    /// Random-layer K_4 count (X/Y only).
    pub random_k4: u64,
    /// Largest number of random-isolated vertices in one class (multipartite only).
    pub isolated: usize,
    /// Size of a maximum K_{r+1} packing (X/Y only).
    pub max_packing: usize,
    /// ⌊n/(r+1)⌋, the number of disjoint K_{r+1} in the cycle power (X/Y only).
    pub required: usize,
    /// Vertices of X left uncovered by the maximum packing found (X/Y only).
    pub x_uncovered: usize,
    pub note: String,
}

fn check_xy(g: &LayeredGraph, x: &VertexSet) -> Result<(), SearchError> {
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            let want = !(x.contains(u) && x.contains(v));
            if g.has_edge(Layer::Gamma, u, v) != want {
                return Err(SearchError::WrongConstruction("Γ is not the X/Y graph for this X"));
            }
        }
    }
    Ok(())
}

fn check_multipartite(g: &LayeredGraph, classes: &[VertexSet]) -> Result<(), SearchError> {
    let n = g.n();
    let mut class_of = alloc::vec![usize::MAX; n];
    for (i, c) in classes.iter().enumerate() {
        for v in c {
            if v >= n || class_of[v] != usize::MAX {
                return Err(SearchError::WrongConstruction("classes do not partition the vertices"));
            }
            class_of[v] = i;
        }
    }
    if class_of.contains(&usize::MAX) {
        return Err(SearchError::WrongConstruction("classes do not cover the vertices"));
    }
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(Layer::Gamma, u, v) != (class_of[u] != class_of[v]) {
                return Err(SearchError::WrongConstruction("Γ is not complete multipartite on these classes"));
            }
        }
    }
    Ok(())
}

/// Certifies that a perturbed extremal graph has no (2k+2)-nd (X/Y) or
/// (2k+1)-st (multipartite) power of a Hamilton cycle.
///
/// X/Y (k = 2): when the random layer has no K_4 and fewer than |X|
/// triangles, PASS means a maximum K_7 packing is smaller than ⌊n/7⌋, which
/// the 6th power of a Hamilton cycle would contain.
///
/// Multipartite: in the (2k+1)-st power every vertex lies in a K_{2k+2};
/// one isolated in the random layer forces a random triangle inside another
/// class, and the cliques around isolated vertices of a single class can be
/// chosen disjoint. PASS means there are fewer random triangles than
/// isolated vertices in the best class.
pub fn tightness_certificate(
    construction: &Construction,
    g: &LayeredGraph,
    k: usize,
    meter: &mut Meter,
) -> Result<TightnessReport, SearchError> {
    let n = g.n();
    let triangles = count_cliques_in_layer(g, Layer::Random, 3);
    match construction {
        Construction::Xy { x } => {
            if k != 2 {
                return Err(SearchError::WrongConstruction("the X/Y certificate is stated for k = 2"));
            }
            check_xy(g, x)?;
            let r = 2 * k + 2;
            let k4 = count_cliques_in_layer(g, Layer::Random, 4);
            let mut report = TightnessReport {
                verdict: Verdict::Inapplicable,
                r,
                random_triangles: triangles,
                random_k4: k4,
                isolated: 0,
                max_packing: 0,
                required: n / (r + 1),
                x_uncovered: 0,
                note: String::new(),
            };
            if k4 > 0 || triangles >= x.len() as u64 {
                report.note = alloc::format!("random layer has {k4} K4 and {triangles} triangles");
                return Ok(report);
            }
            let packing = max_clique_packing(g, r + 1, meter)?;
            report.max_packing = packing.cliques.len();
            report.x_uncovered = packing.uncovered.intersection_len(x);
            report.verdict = if report.max_packing < report.required { Verdict::Pass } else { Verdict::Fail };
            Ok(report)
        }
        Construction::Multipartite { classes } => {
            if classes.len() != k + 1 {
                return Err(SearchError::WrongConstruction("need exactly k+1 classes"));
            }
            check_multipartite(g, classes)?;
            let isolated = classes
                .iter()
                .map(|c| c.iter().filter(|&v| g.degree(Layer::Random, v) == 0).count())
                .max()
                .unwrap_or(0);
            let verdict = if triangles < isolated as u64 { Verdict::Pass } else { Verdict::Inapplicable };
            Ok(TightnessReport {
                verdict,
                r: 2 * k + 1,
                random_triangles: triangles,
                random_k4: 0,
                isolated,
                max_packing: 0,
                required: 0,
                x_uncovered: 0,
                note: String::new(),
            })
        }
    }
}
