use alloc::vec::Vec;

use super::PipelineError;
use crate::graph_core::{Layer, LayeredGraph, SetTuple, VertexTuple};

/// Margins |N(v^{≥2i}, V_i)| / |V_i| of a (2k+2)-tuple against k+1 sets.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendibilityCheck {
    pub tuple: VertexTuple,
    pub sets: SetTuple,
    pub rho: f64,
    /// One entry per set; an empty set has margin 0.
    pub margins: Vec<f64>,
}

impl ExtendibilityCheck {
    pub fn is_extendible(&self) -> bool {
        self.margins.iter().all(|&m| m >= self.rho - 1e-12)
    }

    /// Vertices that may leave set `i` (0-based) without losing extendibility.
    pub fn slack(&self, i: usize) -> usize {
        let spare = (self.margins[i] - self.rho) * self.sets[i].len() as f64;
        if spare < 0.0 {
            0
        } else {
            libm::floor(spare + 1e-9) as usize
        }
    }
}

fn margin(g: &LayeredGraph, layer: Layer, suffix: &[usize], set: &crate::VertexSet) -> f64 {
    if set.is_empty() {
        return 0.0;
    }
    g.common_neighborhood_of(layer, suffix, set).len() as f64 / set.len() as f64
}

/// Whether `v` is (V, ρ)-extendible: |N(v^{≥2i}, V_i)| ≥ ρ|V_i| for all i.
pub fn is_extendible(
    g: &LayeredGraph,
    layer: Layer,
    v: &VertexTuple,
    sets: &SetTuple,
    rho: f64,
) -> Result<ExtendibilityCheck, PipelineError> {
    if v.len() != 2 * sets.len() {
        return Err(PipelineError::LengthMismatch { expected: 2 * sets.len(), found: v.len() });
    }
    let margins = sets.iter().enumerate().map(|(i, set)| margin(g, layer, &v.as_slice()[2 * i + 1..], set)).collect();
    Ok(ExtendibilityCheck { tuple: v.clone(), sets: sets.clone(), rho, margins })
}
