//! Exact containment search and the clique-packing obstructions.
//!
//! Searches charge one node per extension to a [`Meter`](crate::Meter) and
//! report [`SearchOutcome::BudgetExceeded`] separately from a proven
//! [`SearchOutcome::NotFound`].

mod cliques;
mod cycle;
mod oracle;
mod packing;
mod path;
mod tightness;

use core::fmt;

pub use cliques::{count_cliques_in_layer, list_cliques};
pub use cycle::find_power_ham_cycle;
pub use oracle::{oracle_contains_power_ham_cycle, ORACLE_CAP};
pub use packing::{max_clique_packing, PackingResult};
pub use path::{find_power_path_between, PathSpan};
pub use tightness::{tightness_certificate, Construction, TightnessReport, Verdict};

/// Result of an exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The whole search tree was explored.
    NotFound,
    /// The budget ran out first; nothing is known.
    BudgetExceeded,
}

impl<T> SearchOutcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(f(t)),
            SearchOutcome::NotFound => SearchOutcome::NotFound,
            SearchOutcome::BudgetExceeded => SearchOutcome::BudgetExceeded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    TooLarge {
        n: usize,
        cap: usize,
    },
    InvalidInput(&'static str),
    /// An endpoint tuple is the wrong size or not a clique.
    InvalidEndpoint,
    /// The graph does not have the shape of the named construction.
    WrongConstruction(&'static str),
    BudgetExceeded,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::TooLarge { n, cap } => write!(f, "instance size {n} exceeds the cap {cap}"),
            SearchError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            SearchError::InvalidEndpoint => f.write_str("endpoint is not a clique of size r+1"),
            SearchError::WrongConstruction(msg) => write!(f, "graph does not match the construction: {msg}"),
            SearchError::BudgetExceeded => f.write_str("search budget exceeded"),
        }
    }
}

impl core::error::Error for SearchError {}
