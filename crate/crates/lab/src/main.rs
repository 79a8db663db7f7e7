use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use perturbed_core::exact_search::{find_power_ham_cycle, SearchOutcome};
use perturbed_core::generators::{EdgeProb, ModelConfig, ModelKind};
use perturbed_core::pipeline::{full_pipeline, verify_absorbing};
use perturbed_core::power_structs::is_power_hamilton_cycle;
use perturbed_core::regularity::{check_degree_form, check_pair, PairOptions, Partition};
use perturbed_core::{Layer, PowerPath, SearchBudget};
use perturbed_lab::experiments::{mc_threshold, tightness_report, ConstructionKind, StdClock};
use perturbed_lab::io::{self, RunConfig};

#[derive(Parser)]
#[command(name = "perturbed", version, about = "Powers of Hamilton cycles in randomly perturbed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct BudgetArgs {
    /// Search nodes per search.
    #[arg(long, default_value_t = 5_000_000)]
    budget_nodes: u64,
    /// Seconds per search.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget::new(self.budget_nodes, self.time_limit)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph and write it as a layered edge list.
    Gen {
        /// gnp, complete_multipartite, xy_construction, dirac_random or perturbed.
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        /// Edge probability of the random layer.
        #[arg(long, conflicts_with = "c")]
        p: Option<f64>,
        /// Use p = C/n.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the construction classes, each split into this many pieces.
        #[arg(long, requires = "pieces")]
        partition_out: Option<PathBuf>,
        #[arg(long)]
        pieces: Option<usize>,
    },
    /// Exact search for the r-th power of a Hamilton cycle.
    Search {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Also write the verdict and witness here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the absorbing construction for the (2k+1)-st power.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        /// key = value file; only the construction keys are used.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo frequency of containment over a grid of C with p = C/n.
    Mc {
        #[arg(long)]
        config: PathBuf,
        /// Trial records, one per line, ordered by trial index.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Frequency table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tightness certificates over perturbations of an extremal construction.
    Tightness {
        /// xy or multipartite.
        #[arg(long)]
        construction: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check that a gadget absorbs every subset of its absorbable set.
    VerifyAbsorber {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        gadget: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// ε-regularity of every class pair and the degree-form checks.
    Regcheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_graph(path: &Path) -> Result<perturbed_core::LayeredGraph> {
    io::parse_graph(&io::read_to_string(path)?).with_context(|| format!("reading {}", path.display()))
}

fn load_partition(path: &Path, n: usize) -> Result<Partition> {
    io::parse_partition(&io::read_to_string(path)?, n).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { model, n, k, alpha, p, c, seed, out, partition_out, pieces } => {
            let kind: ModelKind = model.parse().map_err(|_| anyhow::anyhow!("unknown model `{model}`"))?;
            let prob = match (p, c) {
                (Some(p), _) => EdgeProb::P(p),
                (None, Some(c)) => EdgeProb::C(c),
                (None, None) => EdgeProb::P(0.0),
            };
            let cfg = ModelConfig { kind, n, k, alpha, prob, seed };
            let inst = cfg.sample(0)?;
            write(&out, &io::write_graph(&inst.graph))?;
            if let (Some(path), Some(pieces)) = (partition_out, pieces) {
                let Some(classes) = &inst.classes else { bail!("model `{model}` has no classes") };
                write(&path, &io::write_partition(&Partition::round_robin(n, classes, pieces)?))?;
            }
        }
        Command::Search { input, r, budget, out } => {
            let g = load_graph(&input)?;
            let clock = StdClock::new();
            let mut meter = budget.budget().meter_with_clock(&clock);
            let result = match find_power_ham_cycle(&g, r, &mut meter)? {
                SearchOutcome::Found(order) => {
                    assert_eq!(is_power_hamilton_cycle(&g, &order, r), Ok(true));
                    format!("found\n{}", io::write_path(&PowerPath::unchecked(order, r)))
                }
                SearchOutcome::NotFound => "not_found\n".to_string(),
                SearchOutcome::BudgetExceeded => format!("budget_exceeded after {} nodes\n", meter.nodes()),
            };
            print!("{result}");
            if let Some(path) = out {
                write(&path, &result)?;
            }
        }
        Command::Pipeline { input, partition, k, alpha, params, seed } => {
            let g = load_graph(&input)?;
            let part = load_partition(&partition, g.n())?;
            let params = match params {
                Some(p) => RunConfig::load(&p)?.params,
                None => Default::default(),
            };
            match full_pipeline(&g, k, &part, alpha, &params, seed) {
                Ok(run) => {
                    for line in &run.trace {
                        eprintln!("{line}");
                    }
                    print!("{}", io::write_path(&PowerPath::unchecked(run.order, 2 * k + 1)));
                }
                Err(f) => {
                    for line in &f.trace {
                        eprintln!("{line}");
                    }
                    bail!("{f}");
                }
            }
        }
        Command::Mc { config, records, csv } => {
            let cfg = RunConfig::load(&config)?;
            let run = mc_threshold(&cfg)?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(path) = records {
                write(&path, &io::write_records(&run.records))?;
            }
            let table = io::table_csv(&run.table);
            match csv {
                Some(path) => write(&path, &table)?,
                None => print!("{table}"),
            }
        }
        Command::Tightness { construction, n, k, c, alpha, trials, seed, out, budget } => {
            let kind: ConstructionKind = construction.parse().map_err(anyhow::Error::msg)?;
            let summary = tightness_report(kind, n, k, c, alpha, trials, seed, &budget.budget())?;
            match out {
                Some(path) => write(&path, &summary.to_text())?,
                None => print!("{}", summary.to_text()),
            }
        }
        Command::VerifyAbsorber { input, gadget, budget } => {
            let g = load_graph(&input)?;
            let gadget = io::parse_gadget(&io::read_to_string(&gadget)?, g.n())?;
            let ok = verify_absorbing(&g, &gadget, &budget.budget())?;
            println!("{}", if ok { "absorbing" } else { "not_absorbing" });
            if !ok {
                std::process::exit(1);
            }
        }
        Command::Regcheck { input, partition, eps, d, samples, seed } => {
            let g = load_graph(&input)?;
            let part = load_partition(&partition, g.n())?;
            let opts = PairOptions { samples, seed, ..PairOptions::default() };
            let t = part.t();
            for i in 0..t {
                for j in i + 1..t {
                    let rep = check_pair(&g, Layer::Gamma, &part.classes[i], &part.classes[j], eps, &opts)?;
                    println!(
                        "pair {} {} density={} verdict={} max_deviation={}",
                        i + 1,
                        j + 1,
                        rep.density.as_f64(),
                        rep.verdict,
                        rep.max_deviation
                    );
                }
            }
            let form = check_degree_form(&g, Layer::Gamma, &part, eps, d, None, &opts);
            println!("degree_form={}", if form.all_pass() { "pass" } else { "fail" });
            for v in &form.violations {
                println!("violation: {v}");
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    run(Cli::parse())
}
