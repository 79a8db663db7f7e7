//! Search budgets.
//!
//! The core crate has no clock of its own. Callers that want a wall-clock
//! limit hand a [`Clock`] to [`SearchBudget::meter_with_clock`].

use core::fmt;

/// Limits for one backtracking search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    /// Maximum number of search nodes expanded.
    pub max_nodes: u64,
    /// Wall-clock limit in seconds, only enforced when a clock is supplied.
    pub time_limit: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 5_000_000, time_limit: 60.0 }
    }
}

/// Monotone time source in seconds.
pub trait Clock {
    fn now_secs(&self) -> f64;
}

/// Returned when a [`Meter`] runs dry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exhausted;

impl fmt::Display for Exhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("search budget exceeded")
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, time_limit: f64) -> Self {
        SearchBudget { max_nodes, time_limit }
    }

    /// Both limits must be positive.
    pub fn is_valid(&self) -> bool {
        self.max_nodes > 0 && self.time_limit > 0.0
    }

    /// A node-counting meter with no time limit.
    pub fn meter(&self) -> Meter<'static> {
        Meter { nodes: 0, max_nodes: self.max_nodes, clock: None, deadline: f64::INFINITY }
    }

    pub fn meter_with_clock<'a>(&self, clock: &'a dyn Clock) -> Meter<'a> {
        let deadline = clock.now_secs() + self.time_limit;
        Meter { nodes: 0, max_nodes: self.max_nodes, clock: Some(clock), deadline }
    }
}

/// Running count of expanded nodes against a [`SearchBudget`].
pub struct Meter<'a> {
    nodes: u64,
    max_nodes: u64,
    clock: Option<&'a dyn Clock>,
    deadline: f64,
}

impl Meter<'_> {
    /// A meter that never runs out.
    pub fn unlimited() -> Meter<'static> {
        Meter { nodes: 0, max_nodes: u64::MAX, clock: None, deadline: f64::INFINITY }
    }

    /// Charge one node.
    #[inline]
    pub fn tick(&mut self) -> Result<(), Exhausted> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Exhausted);
        }
        if self.nodes & 0x3ff == 0 {
            if let Some(clock) = self.clock {
                if clock.now_secs() > self.deadline {
                    return Err(Exhausted);
                }
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }
}
