//! ε-regular pairs, reduced graphs and embedding counts.
//!
//! Partitions are supplied by the caller; nothing here constructs a
//! regularity partition.

mod counting;
mod pair;
mod partition;
mod reduced;

use core::fmt;

pub use counting::{count_embeddings, counting_band, SmallGraph};
pub use pair::{
    check_pair, is_eps_regular_exact, is_eps_regular_sampled, size_floor, PairOptions, RegVerdict, RegularityReport,
    DEFAULT_EXACT_CAP,
};
pub use partition::Partition;
pub use reduced::{
    check_degree_form, reduced_graph, reduced_min_degree_inherits, slice_regularity, DegreeFormReport, ReducedGraph,
};

#[derive(Clone, Debug, PartialEq)]
pub enum RegularityError {
    TooLarge { size: usize, cap: usize },
    RangeViolation,
    EmptySet,
    NotDisjoint,
    NoSamples,
    InvalidPartition(&'static str),
    LengthMismatch { expected: usize, found: usize },
}

impl fmt::Display for RegularityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularityError::TooLarge { size, cap } => write!(f, "set of size {size} exceeds the exact cap {cap}"),
            RegularityError::RangeViolation => f.write_str("parameters outside 0 < ε ≤ δ ≤ 1/2"),
            RegularityError::EmptySet => f.write_str("empty vertex set"),
            RegularityError::NotDisjoint => f.write_str("vertex sets overlap"),
            RegularityError::NoSamples => f.write_str("at least one sample is required"),
            RegularityError::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
            RegularityError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} sets, found {found}")
            }
        }
    }
}

impl core::error::Error for RegularityError {}
