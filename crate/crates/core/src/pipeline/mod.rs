//! Constructive machinery: extendible tuples, bicanonical paths with the
//! deterministic/random layer split, connections, absorbers and the full
//! assembly of a Hamilton power cycle.

mod absorber;
mod assemble;
mod bicanonical;
mod connect;
mod covering;
mod extend;

use alloc::string::String;
use core::fmt;

pub use absorber::{
    absorb, build_absorber_local, verify_absorbing, AbsorberGadget, InsertionSlot, LocalAbsorber, VERIFY_CAP,
};
pub use assemble::{close_cycle, full_pipeline, PipelineFailure, PipelineRun, Stage};
pub use bicanonical::{build_bicanonical_path, layer_audit, required_layer, BicanonicalPath};
pub use connect::{connect_cliques, ConnectJob};
pub use covering::{absorbing_covering, choose_z, leftover_band, CoveringResult};
pub use extend::{is_extendible, ExtendibilityCheck};

use crate::budget::SearchBudget;
use crate::exact_search::SearchError;
use crate::graph_core::Layer;
use crate::power_structs::PathError;
use crate::regularity::RegularityError;

/// Which layer each required pair of a bicanonical path has to come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LayerPolicy {
    /// Skeleton pairs from Γ ∪ G(n, p), every other pair from Γ.
    #[default]
    Split,
    /// Any edge of Γ ∪ G(n, p) will do.
    Union,
}

impl LayerPolicy {
    /// The layer used for neighbourhoods that the split assigns to Γ.
    pub fn gamma_layer(self) -> Layer {
        match self {
            LayerPolicy::Split => Layer::Gamma,
            LayerPolicy::Union => Layer::Union,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LayerPolicy::Split => "split",
            LayerPolicy::Union => "union",
        }
    }
}

impl core::str::FromStr for LayerPolicy {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "split" => Ok(LayerPolicy::Split),
            "union" => Ok(LayerPolicy::Union),
            _ => Err(PipelineError::InvalidInput("layer policy must be split or union")),
        }
    }
}

/// Runtime knobs for the construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineParams {
    /// Extendibility threshold.
    pub rho: f64,
    /// Target leftover fraction of each class of the first covering path.
    pub gamma: f64,
    /// Target leftover fraction inside the reservoir for the second covering path.
    pub gamma_reservoir: f64,
    /// Share of the helper set a local absorber may use.
    pub lambda: f64,
    /// Density threshold of the reduced graph.
    pub d: f64,
    /// Regularity parameter.
    pub eps: f64,
    /// Share of every class moved into the reservoir.
    pub xi: f64,
    /// Relative width of the leftover band.
    pub tol: f64,
    /// Re-randomisations per search stage.
    pub retry_limit: u32,
    pub budget: SearchBudget,
    pub layer_policy: LayerPolicy,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            rho: 0.2,
            gamma: 0.15,
            gamma_reservoir: 0.15,
            lambda: 0.2,
            d: 0.25,
            eps: 0.1,
            xi: 0.25,
            tol: 0.1,
            retry_limit: 5,
            budget: SearchBudget::default(),
            layer_policy: LayerPolicy::Split,
        }
    }
}

impl PipelineParams {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let fractions = [
            ("rho", self.rho),
            ("gamma", self.gamma),
            ("gamma_reservoir", self.gamma_reservoir),
            ("lambda", self.lambda),
            ("d", self.d),
            ("eps", self.eps),
            ("xi", self.xi),
            ("tol", self.tol),
        ];
        for (name, v) in fractions {
            if !(v > 0.0 && v < 1.0) {
                return Err(PipelineError::InvalidParam(name));
            }
        }
        if !self.budget.is_valid() {
            return Err(PipelineError::InvalidParam("budget"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineError {
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    InvalidInput(&'static str),
    InvalidParam(&'static str),
    /// A vertex misses the degree condition into its target sets.
    DegreeCondition {
        vertex: usize,
    },
    /// The search space was exhausted.
    NotFound,
    BudgetExceeded,
    /// The extendibility hypotheses of a connection job fail.
    HypothesisViolated {
        job: usize,
    },
    ConnectFailed {
        job: usize,
    },
    /// The sizes cannot accommodate the requested structure.
    InfeasibleParams(String),
    NoCommonNeighborClass,
    NotAbsorbable {
        vertex: usize,
    },
    NotSubset,
    TooLarge {
        size: usize,
        cap: usize,
    },
    Path(PathError),
    Search(SearchError),
    Regularity(RegularityError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::LengthMismatch { expected, found } => {
                write!(f, "expected length {expected}, found {found}")
            }
            PipelineError::InvalidInput(m) => write!(f, "invalid input: {m}"),
            PipelineError::InvalidParam(m) => write!(f, "parameter {m} out of range"),
            PipelineError::DegreeCondition { vertex } => write!(f, "vertex {vertex} misses the degree condition"),
            PipelineError::NotFound => write!(f, "search exhausted without a path"),
            PipelineError::BudgetExceeded => write!(f, "search budget exceeded"),
            PipelineError::HypothesisViolated { job } => write!(f, "job {job}: endpoints are not extendible"),
            PipelineError::ConnectFailed { job } => write!(f, "job {job}: no connecting path"),
            PipelineError::InfeasibleParams(m) => write!(f, "infeasible parameters: {m}"),
            PipelineError::NoCommonNeighborClass => write!(f, "no class is adjacent to all of the first k+1"),
            PipelineError::NotAbsorbable { vertex } => write!(f, "vertex {vertex} cannot be spliced in"),
            PipelineError::NotSubset => write!(f, "set is not contained in the absorbable set"),
            PipelineError::TooLarge { size, cap } => write!(f, "size {size} exceeds cap {cap}"),
            PipelineError::Path(e) => write!(f, "{e}"),
            PipelineError::Search(e) => write!(f, "{e}"),
            PipelineError::Regularity(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PipelineError {}

impl From<PathError> for PipelineError {
    fn from(e: PathError) -> Self {
        PipelineError::Path(e)
    }
}

impl From<SearchError> for PipelineError {
    fn from(e: SearchError) -> Self {
        PipelineError::Search(e)
    }
}

impl From<RegularityError> for PipelineError {
    fn from(e: RegularityError) -> Self {
        PipelineError::Regularity(e)
    }
}
