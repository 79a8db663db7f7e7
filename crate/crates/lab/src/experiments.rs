//! Monte Carlo threshold runs and aggregated tightness reports.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use perturbed_core::exact_search::{
    find_power_ham_cycle, tightness_certificate, Construction, SearchError, SearchOutcome, TightnessReport,
    Verdict as Certificate,
};
use perturbed_core::generators::{derive_seed, EdgeProb, GenError, ModelConfig, ModelInstance, ModelKind};
use perturbed_core::pipeline::{full_pipeline, Stage};
use perturbed_core::power_structs::is_power_hamilton_cycle;
use perturbed_core::regularity::Partition;
use perturbed_core::{Clock, Layer, SearchBudget, VertexSet};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::io::RunConfig;

/// Wall clock measured from construction.
pub struct StdClock(Instant);

impl StdClock {
    pub fn new() -> Self {
        StdClock(Instant::now())
    }
}

impl Default for StdClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for StdClock {
    fn now_secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ExactSearch,
    Pipeline,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactSearch => "exact_search",
            Method::Pipeline => "pipeline",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact_search" => Ok(Method::ExactSearch),
            "pipeline" => Ok(Method::Pipeline),
            _ => Err(format!("unknown method `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Found,
    NotFound,
    BudgetExceeded,
    PipelineFailedAt(Stage),
}

impl Verdict {
    /// Budget exhaustion says nothing about containment.
    pub fn is_unknown(self) -> bool {
        self == Verdict::BudgetExceeded
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Found => f.write_str("found"),
            Verdict::NotFound => f.write_str("not_found"),
            Verdict::BudgetExceeded => f.write_str("budget_exceeded"),
            Verdict::PipelineFailedAt(s) => write!(f, "pipeline_failed_at:{s}"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "found" => Ok(Verdict::Found),
            "not_found" => Ok(Verdict::NotFound),
            "budget_exceeded" => Ok(Verdict::BudgetExceeded),
            _ => s
                .strip_prefix("pipeline_failed_at:")
                .and_then(|st| st.parse().ok())
                .map(Verdict::PipelineFailedAt)
                .ok_or_else(|| format!("unknown verdict `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial_index: u64,
    /// `derive_seed(run seed, trial_index)`.
    pub derived_seed: u64,
    /// p = C/n, capped at 1.
    pub c: f64,
    pub verdict: Verdict,
    pub elapsed: f64,
    /// First 16 hex digits of SHA-256 over the found order.
    pub witness_digest: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyRow {
    pub c: f64,
    pub trials: usize,
    pub found: usize,
    /// Includes pipeline failures.
    pub not_found: usize,
    pub unknown: usize,
}

impl FrequencyRow {
    /// found / (found + not_found); `None` when every trial is unknown.
    pub fn frequency(&self) -> Option<f64> {
        let decided = self.found + self.not_found;
        (decided > 0).then(|| self.found as f64 / decided as f64)
    }

    /// At most 20% unknown verdicts.
    pub fn is_valid(&self) -> bool {
        self.unknown * 5 <= self.trials
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyTable {
    pub rows: Vec<FrequencyRow>,
}

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

impl FrequencyTable {
    /// One row per distinct C, in order of first appearance.
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let mut rows: Vec<FrequencyRow> = Vec::new();
        for r in records {
            let i = match rows.iter().position(|row| row.c.to_bits() == r.c.to_bits()) {
                Some(i) => i,
                None => {
                    rows.push(FrequencyRow { c: r.c, trials: 0, found: 0, not_found: 0, unknown: 0 });
                    rows.len() - 1
                }
            };
            let row = &mut rows[i];
            row.trials += 1;
            match r.verdict {
                Verdict::Found => row.found += 1,
                Verdict::BudgetExceeded => row.unknown += 1,
                Verdict::NotFound | Verdict::PipelineFailedAt(_) => row.not_found += 1,
            }
        }
        FrequencyTable { rows }
    }

    pub fn is_valid(&self) -> bool {
        self.rows.iter().all(FrequencyRow::is_valid)
    }

    /// Adjacent rows whose frequency drops by more than `z` pooled standard
    /// errors of the difference of two proportions.
    pub fn significant_decreases(&self, z: f64) -> Vec<(f64, f64)> {
        self.rows
            .windows(2)
            .filter_map(|w| {
                let (a, b) = (&w[0], &w[1]);
                let (fa, fb) = (a.frequency()?, b.frequency()?);
                let (na, nb) = ((a.found + a.not_found) as f64, (b.found + b.not_found) as f64);
                let pooled = (a.found + b.found) as f64 / (na + nb);
                let se = (pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb)).sqrt();
                (fa - fb > z * se).then_some((a.c, b.c))
            })
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Generator(#[from] GenError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("trial {0}: reported witness does not validate")]
    BadWitness(u64),
}

/// Result of [`mc_threshold`]: records ordered by trial index.
#[derive(Clone, Debug)]
pub struct McRun {
    pub table: FrequencyTable,
    pub records: Vec<TrialRecord>,
    pub warnings: Vec<String>,
}

fn digest(order: &[usize]) -> String {
    let mut h = Sha256::new();
    for &v in order {
        h.update((v as u64).to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Classes for the pipeline: each construction class split in two, or
/// `None` when the model has no labelling.
fn pipeline_partition(n: usize, inst: &ModelInstance) -> Option<Partition> {
    Partition::round_robin(n, inst.classes.as_ref()?, 2).ok()
}

fn run_trial(cfg: &RunConfig, index: u64, c: f64) -> Result<TrialRecord, ExperimentError> {
    let clock = StdClock::new();
    let model = &cfg.model;
    let r = 2 * model.k + 1;
    let seed = derive_seed(model.seed, index);
    let inst = model.sample_with_prob(index, EdgeProb::C(c).p(model.n))?;
    let g = &inst.graph;
    let (verdict, order) = match cfg.method {
        Method::ExactSearch => {
            let mut meter = cfg.budget.meter_with_clock(&clock);
            match find_power_ham_cycle(g, r, &mut meter)? {
                SearchOutcome::Found(o) => (Verdict::Found, Some(o)),
                SearchOutcome::NotFound => (Verdict::NotFound, None),
                SearchOutcome::BudgetExceeded => (Verdict::BudgetExceeded, None),
            }
        }
        Method::Pipeline => match pipeline_partition(model.n, &inst) {
            None => (Verdict::PipelineFailedAt(Stage::Precondition), None),
            Some(part) => match full_pipeline(g, model.k, &part, model.alpha, &cfg.params, seed) {
                Ok(run) => (Verdict::Found, Some(run.order)),
                Err(f) => (Verdict::PipelineFailedAt(f.stage), None),
            },
        },
    };
    if let Some(o) = &order {
        if is_power_hamilton_cycle(g, o, r) != Ok(true) {
            return Err(ExperimentError::BadWitness(index));
        }
    }
    Ok(TrialRecord {
        trial_index: index,
        derived_seed: seed,
        c,
        verdict,
        elapsed: clock.now_secs(),
        witness_digest: order.as_deref().map(digest),
    })
}

/// Runs `trials` perturb-then-decide experiments for every C in the grid,
/// in parallel. Trial i of grid point j has index j·trials + i and seed
/// `derive_seed(seed, index)`.
pub fn mc_threshold(cfg: &RunConfig) -> Result<McRun, ExperimentError> {
    if cfg.trials == 0 {
        return Err(ExperimentError::Config("trials must be at least 1".into()));
    }
    if cfg.c_grid.iter().any(|&c| c.is_nan() || c < 0.0) {
        return Err(ExperimentError::Config("C values must be non-negative".into()));
    }
    cfg.model.validate()?;
    let mut warnings = Vec::new();
    let gamma = cfg.model.gamma(derive_seed(cfg.model.seed, u64::MAX))?;
    if gamma.graph.min_degree(Layer::Gamma) < cfg.model.dirac_bound() {
        warnings.push(format!(
            "minimum degree of the deterministic graph is {}, below (k/(k+1)+alpha)n = {}",
            gamma.graph.min_degree(Layer::Gamma),
            cfg.model.dirac_bound()
        ));
    }
    let jobs: Vec<(u64, f64)> = cfg
        .c_grid
        .iter()
        .enumerate()
        .flat_map(|(j, &c)| (0..cfg.trials).map(move |i| ((j * cfg.trials + i) as u64, c)))
        .collect();
    let records = jobs.par_iter().map(|&(index, c)| run_trial(cfg, index, c)).collect::<Result<Vec<_>, _>>()?;
    let table = FrequencyTable::from_records(&records);
    for row in table.rows.iter().filter(|r| !r.is_valid()) {
        warnings.push(format!("C = {}: {} of {} trials unknown, row invalid", row.c, row.unknown, row.trials));
    }
    Ok(McRun { table, records, warnings })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionKind {
    Xy,
    Multipartite,
}

impl FromStr for ConstructionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "xy" => Ok(ConstructionKind::Xy),
            "multipartite" => Ok(ConstructionKind::Multipartite),
            _ => Err(format!("unknown construction `{s}`")),
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionKind::Xy => "xy",
            ConstructionKind::Multipartite => "multipartite",
        })
    }
}

/// Certificates over many perturbations of one construction.
#[derive(Clone, Debug)]
pub struct TightnessSummary {
    pub construction: ConstructionKind,
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub reports: Vec<TightnessReport>,
    /// Trials whose packing search ran out of budget.
    pub unknown: usize,
}

impl TightnessSummary {
    pub fn count(&self, v: Certificate) -> usize {
        self.reports.iter().filter(|r| r.verdict == v).count()
    }

    /// PASS among trials where the certificate applies.
    pub fn pass_rate(&self) -> Option<f64> {
        let pass = self.count(Certificate::Pass);
        let applicable = pass + self.count(Certificate::Fail);
        (applicable > 0).then(|| pass as f64 / applicable as f64)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "construction={} n={} k={} C={} trials={} pass={} fail={} inapplicable={} unknown={} pass_rate={}\n",
            self.construction,
            self.n,
            self.k,
            self.c,
            self.reports.len() + self.unknown,
            self.count(Certificate::Pass),
            self.count(Certificate::Fail),
            self.count(Certificate::Inapplicable),
            self.unknown,
            self.pass_rate().map_or("-".to_string(), |r| r.to_string()),
        );
        if self.construction == ConstructionKind::Xy {
            let packed: Vec<usize> =
                self.reports.iter().filter(|r| r.verdict != Certificate::Inapplicable).map(|r| r.max_packing).collect();
            if let (Some(lo), Some(hi)) = (packed.iter().min(), packed.iter().max()) {
                let mean = packed.iter().sum::<usize>() as f64 / packed.len() as f64;
                out += &format!("packing min={lo} max={hi} mean={mean} required={}\n", self.reports[0].required);
            }
        }
        for (i, r) in self.reports.iter().enumerate() {
            out += &format!(
                "trial={i} verdict={} triangles={} k4={} isolated={} packing={} x_uncovered={}{}\n",
                r.verdict,
                r.random_triangles,
                r.random_k4,
                r.isolated,
                r.max_packing,
                r.x_uncovered,
                if r.note.is_empty() { String::new() } else { format!(" note=\"{}\"", r.note) },
            );
        }
        out
    }
}

/// Samples `trials` perturbations with p = C/n and runs the matching
/// tightness certificate on each.
#[allow(clippy::too_many_arguments)]
pub fn tightness_report(
    construction: ConstructionKind,
    n: usize,
    k: usize,
    c: f64,
    alpha: f64,
    trials: usize,
    seed: u64,
    budget: &SearchBudget,
) -> Result<TightnessSummary, ExperimentError> {
    let kind = match construction {
        ConstructionKind::Xy => ModelKind::XyConstruction,
        ConstructionKind::Multipartite => ModelKind::CompleteMultipartite,
    };
    let model = ModelConfig { kind, n, k, alpha, prob: EdgeProb::C(c), seed };
    model.validate()?;
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let inst = model.sample(t)?;
            let cons = match construction {
                ConstructionKind::Xy => Construction::Xy { x: inst.x.clone().unwrap_or_else(|| VertexSet::new(n)) },
                ConstructionKind::Multipartite => {
                    Construction::Multipartite { classes: inst.classes.clone().unwrap_or_default() }
                }
            };
            let mut meter = budget.meter();
            match tightness_certificate(&cons, &inst.graph, k, &mut meter) {
                Ok(rep) => Ok(Some(rep)),
                Err(SearchError::BudgetExceeded) => Ok(None),
                Err(e) => Err(ExperimentError::from(e)),
            }
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let unknown = outcomes.iter().filter(|o| o.is_none()).count();
    Ok(TightnessSummary { construction, n, k, c, reports: outcomes.into_iter().flatten().collect(), unknown })
}
