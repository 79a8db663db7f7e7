use alloc::vec::Vec;

use super::RegularityError;
use crate::graph_core::VertexSet;

/// An exceptional set V_0 and equal-size classes V_1..V_t covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    pub exceptional: VertexSet,
    pub classes: Vec<VertexSet>,
}

impl Partition {
    pub fn new(n: usize, exceptional: VertexSet, classes: Vec<VertexSet>) -> Result<Self, RegularityError> {
        let mut seen = exceptional.clone();
        if seen.iter().any(|v| v >= n) {
            return Err(RegularityError::InvalidPartition("vertex out of range"));
        }
        for c in &classes {
            if c.iter().any(|v| v >= n) {
                return Err(RegularityError::InvalidPartition("vertex out of range"));
            }
            if !c.is_disjoint(&seen) {
                return Err(RegularityError::InvalidPartition("classes overlap"));
            }
            seen.union_with(c);
        }
        if seen.len() != n {
            return Err(RegularityError::InvalidPartition("classes do not cover the vertex set"));
        }
        if classes.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(RegularityError::InvalidPartition("classes differ in size"));
        }
        Ok(Partition { n, exceptional, classes })
    }

    /// Splits each part into `pieces` equal chunks and orders them
    /// chunk-major: part 1 chunk 1, part 2 chunk 1, ..., part 1 chunk 2, ...
    /// Vertices that do not fit (unequal parts, remainders) go to V_0.
    ///
    /// With at least k+1 parts, any k+1 cyclically consecutive classes come
    /// from distinct parts.
    pub fn round_robin(n: usize, parts: &[VertexSet], pieces: usize) -> Result<Self, RegularityError> {
        if parts.is_empty() || pieces == 0 {
            return Err(RegularityError::InvalidPartition("need at least one part and one piece"));
        }
        let size = parts.iter().map(VertexSet::len).min().unwrap_or(0) / pieces;
        if size == 0 {
            return Err(RegularityError::InvalidPartition("parts too small to split"));
        }
        let lists: Vec<Vec<usize>> = parts.iter().map(VertexSet::to_vec).collect();
        let mut classes = Vec::new();
        for piece in 0..pieces {
            for list in &lists {
                classes.push(VertexSet::from_slice(n, &list[piece * size..(piece + 1) * size]));
            }
        }
        let mut exceptional = VertexSet::full(n);
        for c in &classes {
            exceptional.difference_with(c);
        }
        Partition::new(n, exceptional, classes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self) -> usize {
        self.classes.first().map_or(0, VertexSet::len)
    }

    /// Moves trailing classes into V_0 until t is a multiple of `m`.
    /// Returns how many classes moved.
    pub fn truncate_to_multiple(&mut self, m: usize) -> usize {
        let keep = self.t() - self.t() % m.max(1);
        let moved = self.t() - keep;
        for c in self.classes.drain(keep..) {
            self.exceptional.union_with(&c);
        }
        moved
    }

    /// Index of the class holding `v`, or `None` for V_0.
    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(v))
    }

    /// Reorders the classes so that new class i is old class `order[i]`.
    pub fn relabel(&self, order: &[usize]) -> Partition {
        Partition {
            n: self.n,
            exceptional: self.exceptional.clone(),
            classes: order.iter().map(|&i| self.classes[i].clone()).collect(),
        }
    }
}
