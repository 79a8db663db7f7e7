//! Plain-text formats: layered edge lists, partitions, paths, absorber
//! gadgets, run configurations, trial records and frequency tables.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use perturbed_core::generators::{EdgeProb, ModelConfig, ModelKind};
use perturbed_core::pipeline::{AbsorberGadget, InsertionSlot, LayerPolicy, PipelineParams};
use perturbed_core::regularity::Partition;
use perturbed_core::{Layer, LayeredGraph, PowerPath, SearchBudget, VertexSet};

use crate::experiments::{FrequencyTable, Method, TrialRecord, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn bad(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// Non-empty lines with `#` comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse().map_err(|_| bad(line, format!("bad {what} `{tok}`")))
}

fn parse_vertices(line: usize, text: &str, n: usize) -> Result<Vec<usize>, FormatError> {
    text.split_whitespace()
        .map(|t| {
            let v: usize = parse_num(line, t, "vertex")?;
            if v >= n {
                return Err(bad(line, format!("vertex {v} out of range for n = {n}")));
            }
            Ok(v)
        })
        .collect()
}

fn join(vs: impl IntoIterator<Item = usize>) -> String {
    vs.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn read_to_string(path: &Path) -> Result<String, FormatError> {
    Ok(std::fs::read_to_string(path)?)
}

// Layered edge lists

/// Parses `n <count>` followed by `u v g` / `u v r` lines. A pair listed
/// in both layers is kept in Γ only.
pub fn parse_graph(text: &str) -> Result<LayeredGraph, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| bad(1, "missing `n <count>` header"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => parse_num(hl, count, "vertex count")?,
        _ => return Err(bad(hl, "expected `n <count>`")),
    };
    let mut seen: [HashSet<(usize, usize)>; 2] = Default::default();
    let mut edges: [Vec<(usize, usize)>; 2] = Default::default();
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [u, v, tag] = toks[..] else {
            return Err(bad(ln, "expected `u v g` or `u v r`"));
        };
        let layer = match tag {
            "g" => 0,
            "r" => 1,
            _ => return Err(bad(ln, format!("unknown layer tag `{tag}`"))),
        };
        let (u, v): (usize, usize) = (parse_num(ln, u, "vertex")?, parse_num(ln, v, "vertex")?);
        if u >= n || v >= n {
            return Err(bad(ln, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(bad(ln, "self-loop"));
        }
        let key = (u.min(v), u.max(v));
        if !seen[layer].insert(key) {
            return Err(bad(ln, format!("duplicate pair {{{}, {}}}", key.0, key.1)));
        }
        edges[layer].push(key);
    }
    LayeredGraph::from_edges(n, &edges[0], &edges[1]).map_err(|e| bad(0, e.to_string()))
}

pub fn write_graph(g: &LayeredGraph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (layer, tag) in [(Layer::Gamma, 'g'), (Layer::Random, 'r')] {
        for (u, v) in g.edges(layer) {
            writeln!(out, "{u} {v} {tag}").unwrap();
        }
    }
    out
}

// Partitions

/// Parses `class <i>: v ...` and `exceptional: v ...` lines. Class indices
/// must run 1, 2, ... in order.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition, FormatError> {
    let mut classes = Vec::new();
    let mut exceptional = VertexSet::new(n);
    let mut last = 0;
    for (ln, l) in content_lines(text) {
        let (head, body) = l.split_once(':').ok_or_else(|| bad(ln, "expected `class <i>:` or `exceptional:`"))?;
        let vs = parse_vertices(ln, body, n)?;
        match head.split_whitespace().collect::<Vec<_>>()[..] {
            ["exceptional"] => exceptional.union_with(&VertexSet::from_slice(n, &vs)),
            ["class", i] => {
                let i: usize = parse_num(ln, i, "class index")?;
                if i != classes.len() + 1 {
                    return Err(bad(ln, format!("expected class {}", classes.len() + 1)));
                }
                classes.push(VertexSet::from_slice(n, &vs));
            }
            _ => return Err(bad(ln, format!("unknown entry `{head}`"))),
        }
        last = ln;
    }
    Partition::new(n, exceptional, classes).map_err(|e| bad(last, e.to_string()))
}

pub fn write_partition(p: &Partition) -> String {
    let mut out = String::new();
    for (i, c) in p.classes.iter().enumerate() {
        writeln!(out, "class {}: {}", i + 1, join(c)).unwrap();
    }
    writeln!(out, "exceptional: {}", join(&p.exceptional)).unwrap();
    out
}

// Paths and gadgets

fn parse_path_line(ln: usize, l: &str, n: usize) -> Result<PowerPath, FormatError> {
    let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
    let r = head.strip_prefix("r=").ok_or_else(|| bad(ln, "expected `r=<r> v ...`"))?;
    let r: usize = parse_num(ln, r, "power")?;
    let vs = parse_vertices(ln, rest, n)?;
    if VertexSet::from_slice(n, &vs).len() != vs.len() {
        return Err(bad(ln, "repeated vertex"));
    }
    Ok(PowerPath::unchecked(vs, r))
}

/// Parses `r=<r> v v ...`. Adjacency is not checked here.
pub fn parse_path(text: &str, n: usize) -> Result<PowerPath, FormatError> {
    let (ln, l) = content_lines(text).next().ok_or_else(|| bad(1, "empty path file"))?;
    parse_path_line(ln, l, n)
}

pub fn write_path(p: &PowerPath) -> String {
    format!("r={} {}\n", p.r(), join(p.vertices().iter().copied()))
}

/// A path line, then `absorbable: v ...` and one `slot <x> <after>` per
/// absorbable vertex.
pub fn parse_gadget(text: &str, n: usize) -> Result<AbsorberGadget, FormatError> {
    let mut lines = content_lines(text);
    let (ln, l) = lines.next().ok_or_else(|| bad(1, "empty gadget file"))?;
    let path = parse_path_line(ln, l, n)?;
    let mut absorbable = VertexSet::new(n);
    let mut slots = Vec::new();
    for (ln, l) in lines {
        if let Some(body) = l.strip_prefix("absorbable:") {
            absorbable.union_with(&VertexSet::from_slice(n, &parse_vertices(ln, body, n)?));
        } else if let Some(body) = l.strip_prefix("slot ") {
            let [x, after] = body.split_whitespace().collect::<Vec<_>>()[..] else {
                return Err(bad(ln, "expected `slot <vertex> <after>`"));
            };
            let vertex = parse_num(ln, x, "vertex")?;
            if vertex >= n {
                return Err(bad(ln, format!("vertex {vertex} out of range for n = {n}")));
            }
            slots.push(InsertionSlot { vertex, after: parse_num(ln, after, "position")? });
        } else {
            return Err(bad(ln, "expected `absorbable:` or `slot`"));
        }
    }
    Ok(AbsorberGadget { path, absorbable, slots })
}

pub fn write_gadget(g: &AbsorberGadget) -> String {
    let mut out = write_path(&g.path);
    writeln!(out, "absorbable: {}", join(&g.absorbable)).unwrap();
    for s in &g.slots {
        writeln!(out, "slot {} {}", s.vertex, s.after).unwrap();
    }
    out
}

// Run configurations

/// Everything a Monte Carlo or pipeline run needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub c_grid: Vec<f64>,
    pub trials: usize,
    pub method: Method,
    pub budget: SearchBudget,
    pub params: PipelineParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelConfig {
                kind: ModelKind::CompleteMultipartite,
                n: 12,
                k: 1,
                alpha: 0.1,
                prob: EdgeProb::C(1.0),
                seed: 0,
            },
            c_grid: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            trials: 100,
            method: Method::ExactSearch,
            budget: SearchBudget::default(),
            params: PipelineParams::default(),
        }
    }
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value `{v}`"))
        }
        let m = &mut self.model;
        let p = &mut self.params;
        match key {
            "model" => m.kind = value.parse().map_err(|_| format!("unknown model `{value}`"))?,
            "n" => m.n = num(value)?,
            "k" => m.k = num(value)?,
            "alpha" => m.alpha = num(value)?,
            "p" => m.prob = EdgeProb::P(num(value)?),
            "c" => m.prob = EdgeProb::C(num(value)?),
            "seed" => m.seed = num(value)?,
            "c_grid" => {
                self.c_grid = value.split(',').map(|c| num(c.trim())).collect::<Result<_, _>>()?;
            }
            "trials" => self.trials = num(value)?,
            "method" => self.method = value.parse()?,
            "max_nodes" => self.budget.max_nodes = num(value)?,
            "time_limit" => self.budget.time_limit = num(value)?,
            "rho" => p.rho = num(value)?,
            "gamma" => p.gamma = num(value)?,
            "gamma_reservoir" => p.gamma_reservoir = num(value)?,
            "lambda" => p.lambda = num(value)?,
            "d" => p.d = num(value)?,
            "eps" => p.eps = num(value)?,
            "xi" => p.xi = num(value)?,
            "tol" => p.tol = num(value)?,
            "retry_limit" => p.retry_limit = num(value)?,
            "layer_policy" => p.layer_policy = value.parse::<LayerPolicy>().map_err(|e| e.to_string())?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Parses `key = value` lines on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut cfg = RunConfig::default();
        for (ln, l) in content_lines(text) {
            let (k, v) = l.split_once('=').ok_or_else(|| bad(ln, "expected `key = value`"))?;
            cfg.set(k.trim(), v.trim()).map_err(|m| bad(ln, m))?;
        }
        cfg.params.budget = cfg.budget;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        Self::parse(&read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let m = &self.model;
        let p = &self.params;
        let prob = match m.prob {
            EdgeProb::P(x) => format!("p = {x}"),
            EdgeProb::C(x) => format!("c = {x}"),
        };
        let grid = self.c_grid.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        format!(
            "model = {}\nn = {}\nk = {}\nalpha = {}\n{prob}\nseed = {}\nc_grid = {grid}\ntrials = {}\nmethod = {}\n\
             max_nodes = {}\ntime_limit = {}\nrho = {}\ngamma = {}\ngamma_reservoir = {}\nlambda = {}\nd = {}\n\
             eps = {}\nxi = {}\ntol = {}\nretry_limit = {}\nlayer_policy = {}\n",
            m.kind.name(),
            m.n,
            m.k,
            m.alpha,
            m.seed,
            self.trials,
            self.method,
            self.budget.max_nodes,
            self.budget.time_limit,
            p.rho,
            p.gamma,
            p.gamma_reservoir,
            p.lambda,
            p.d,
            p.eps,
            p.xi,
            p.tol,
            p.retry_limit,
            p.layer_policy.name(),
        )
    }
}

// Trial records and frequency tables

/// `trial=<i> seed=<s> C=<c> verdict=<v> elapsed=<secs> digest=<hex|->`
pub fn write_record(r: &TrialRecord) -> String {
    format!(
        "trial={} seed={} C={} verdict={} elapsed={} digest={}",
        r.trial_index,
        r.derived_seed,
        r.c,
        r.verdict,
        r.elapsed,
        r.witness_digest.as_deref().unwrap_or("-")
    )
}

pub fn parse_record(line: usize, text: &str) -> Result<TrialRecord, FormatError> {
    let fields: Vec<(&str, &str)> = text
        .split_whitespace()
        .map(|f| f.split_once('=').ok_or_else(|| bad(line, format!("bad field `{f}`"))))
        .collect::<Result<_, _>>()?;
    let keys = ["trial", "seed", "C", "verdict", "elapsed", "digest"];
    if fields.len() != keys.len() || fields.iter().zip(keys).any(|((k, _), want)| *k != want) {
        return Err(bad(line, format!("expected fields {}", keys.join(" "))));
    }
    let v = |i: usize| fields[i].1;
    Ok(TrialRecord {
        trial_index: parse_num(line, v(0), "trial index")?,
        derived_seed: parse_num(line, v(1), "seed")?,
        c: parse_num(line, v(2), "C")?,
        verdict: v(3).parse::<Verdict>().map_err(|m| bad(line, m))?,
        elapsed: parse_num(line, v(4), "elapsed time")?,
        witness_digest: (v(5) != "-").then(|| v(5).to_string()),
    })
}

pub fn write_records(records: &[TrialRecord]) -> String {
    records.iter().map(|r| write_record(r) + "\n").collect()
}

pub fn parse_records(text: &str) -> Result<Vec<TrialRecord>, FormatError> {
    content_lines(text).map(|(ln, l)| parse_record(ln, l)).collect()
}

pub fn table_csv(t: &FrequencyTable) -> String {
    let mut out = String::from("C,trials,found,not_found,unknown,frequency,valid\n");
    for r in &t.rows {
        let freq = r.frequency().map_or(String::new(), |f| f.to_string());
        writeln!(out, "{},{},{},{},{},{},{}", r.c, r.trials, r.found, r.not_found, r.unknown, freq, r.is_valid())
            .unwrap();
    }
    out
}
