//! Powers of Hamilton cycles in randomly perturbed graphs.
//!
//! A [`LayeredGraph`] keeps a dense deterministic layer Γ and a random layer
//! side by side. On top of it this crate provides the extremal constructions,
//! exact containment search, ε-regularity checks and an absorbing-method
//! pipeline that assembles the (2k+1)-st power of a Hamilton cycle.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and parallel experiment drivers live in the companion `perturbed-lab`
//! crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod budget;
pub mod exact_search;
pub mod generators;
pub mod graph_core;
pub mod pipeline;
pub mod power_structs;
pub mod regularity;

pub use budget::{Clock, Meter, SearchBudget};
pub use graph_core::{Density, GraphError, Layer, LayeredGraph, SetTuple, VertexSet, VertexTuple};
pub use power_structs::{PathError, PowerPath};
