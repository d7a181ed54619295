//! Batch experiment harness: graph generation, suite execution, metric
//! aggregation, and standalone spectrum / baseline runs.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use awqv_cli::{config, suite};
use awqv_core::gw::{default_rank, gw_solve, hyperplane_round_trajectory, GwOptions};
use awqv_core::problem::{brute_force_spectrum, PreparedInstance};
use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Family, SingleRunConfig};
use suite::{bitstring_text, load_graph, resolve_workers};

#[derive(Parser)]
#[command(name = "awqv", about = "MaxCut experiments: adaptive weighted QITE-VQE and baselines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random graph files.
    Gen {
        /// "regular" or "er".
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        /// Degree (regular model).
        #[arg(long)]
        d: Option<usize>,
        /// Edge probability (er model).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "graphs")]
        out: PathBuf,
    },
    /// Run a suite config (or a single-run config with a graph_path).
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's global seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Concurrent runs; AWQV_WORKERS env var is the fallback.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory (overrides the config's `out`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate metrics.csv files under a directory into summary tables.
    Summarize {
        #[arg(long)]
        dir: PathBuf,
        /// Also write the tables as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force the spectrum of one graph file.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        /// Write the full spectrum as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Goemans-Williamson baseline on one graph file.
    Gw {
        #[arg(long)]
        graph: PathBuf,
        /// Rounding budget.
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        /// Embedding rank; defaults to ceil(sqrt(2n)).
        #[arg(long)]
        rank: Option<usize>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { model, n, d, p, count, seed, out } => {
            let family = match model.as_str() {
                "regular" => Family::Regular {
                    n,
                    d: d.context("--d is required for the regular model")?,
                    count,
                },
                "er" => Family::Er {
                    n,
                    p: p.context("--p is required for the er model")?,
                    count,
                },
                other => bail!("unknown model {other:?} (expected regular|er)"),
            };
            let paths = suite::generate_graphs(&family, seed, &out)?;
            println!("wrote {} graph files under {}", paths.len(), out.display());
        }
        Command::Run { config, seed, workers, out } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let workers = resolve_workers(workers);
            // A config with a graph_path is a single run; otherwise a suite.
            if text.contains("\"graph_path\"") {
                run_single(&text, seed, out)?;
            } else {
                let mut suite_config = ExperimentConfig::parse(&text)?;
                if let Some(s) = seed {
                    suite_config.seed = s;
                }
                let out_dir = out
                    .or_else(|| suite_config.out.as_ref().map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from("results").join(&suite_config.suite));
                suite::run_suite(&suite_config, &out_dir, workers)?;
                println!(
                    "suite {} finished: {} instances x {} methods -> {}",
                    suite_config.suite,
                    suite_config.family.count(),
                    suite_config.methods.len(),
                    out_dir.display()
                );
            }
        }
        Command::Summarize { dir, out } => {
            let text = suite::summarize_dir(&dir, out.as_deref())?;
            print!("{text}");
        }
        Command::Spectrum { graph, out } => {
            let instance = load_graph(&graph)?;
            let spectrum = brute_force_spectrum(&instance).map_err(|e| anyhow::anyhow!("{e}"))?;
            println!("n = {}, |E| = {}", instance.n(), instance.edges().len());
            println!("levels K = {}", spectrum.k());
            println!("optimum C_1 = {} (max cut {})", spectrum.optimum(), -spectrum.optimum());
            println!("worst C_K = {}", spectrum.worst());
            println!("|optimal set| = {}", spectrum.optimal_set().len());
            for &x in spectrum.optimal_set().iter().take(4) {
                println!("  optimal: {}", bitstring_text(x, instance.n()));
            }
            if let Some(path) = out {
                let doc = serde_json::json!({
                    "n": instance.n(),
                    "distinct_costs": spectrum.distinct_costs(),
                    "optimal_set": spectrum
                        .optimal_set()
                        .iter()
                        .map(|&x| bitstring_text(x, instance.n()))
                        .collect::<Vec<_>>(),
                });
                std::fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
                println!("spectrum written to {}", path.display());
            }
        }
        Command::Gw { graph, m, seed, restarts, rank } => {
            let instance = load_graph(&graph)?;
            let rank = rank.unwrap_or_else(|| default_rank(instance.n()));
            let opts = GwOptions { restarts, ..Default::default() };
            let emb = gw_solve(&instance, rank, &opts, seed).map_err(|e| anyhow::anyhow!("{e}"))?;
            let (x, cost, _) = hyperplane_round_trajectory(&emb, &instance, m, seed.wrapping_add(1))
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            println!("relaxation objective = {}", emb.objective());
            println!("best cut over {m} roundings = {} (cost {cost})", -cost);
            println!("solution = {}", bitstring_text(x, instance.n()));
            if instance.n() <= 24 {
                let spectrum =
                    brute_force_spectrum(&instance).map_err(|e| anyhow::anyhow!("{e}"))?;
                let optimal = cost == spectrum.optimum();
                println!("optimal = {optimal} (brute-force optimum {})", spectrum.optimum());
            }
        }
    }
    Ok(())
}

/// Executes a single-run config {method, ansatz, eta, mu, lambda, iters,
/// samples, seed, graph_path} and writes one trace + metrics row.
fn run_single(text: &str, seed_override: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    let mut config: SingleRunConfig = serde_json::from_str(text).context("parsing run config")?;
    if let Some(s) = seed_override {
        config.seed = s;
    }
    let instance = load_graph(&PathBuf::from(&config.graph_path))?;
    let weighted = instance.edges().iter().any(|e| (e.w - 1.0).abs() > 1e-12);
    let method = config.method_spec().resolve(weighted)?;
    let prepared = PreparedInstance::new(instance).map_err(|e| anyhow::anyhow!("{e}"))?;
    let out_dir = out.unwrap_or_else(|| PathBuf::from("run-out"));
    std::fs::create_dir_all(&out_dir)?;

    let (row, trace) = suite::execute_run(
        "single",
        0,
        &prepared,
        &method,
        prepared.instance().seed(),
        config.seed,
    );
    if let Some(text) = trace {
        std::fs::write(out_dir.join(format!("000_{}.jsonl", row.method)), text)?;
    }
    suite::write_metrics_csv(&out_dir.join("metrics.csv"), std::slice::from_ref(&row))?;
    println!("method = {}", row.method);
    println!("status = {}", row.status);
    if let Some(e) = row.energy_best {
        println!("best energy = {e} (step {})", row.best_step.unwrap_or(0));
    }
    if let Some(p) = row.p_gs {
        println!("p_gs = {p}");
    }
    if let (Some(sol), Some(cost)) = (&row.solution, row.solution_cost) {
        println!("solution = {sol} (cost {cost})");
    }
    println!("outputs in {}", out_dir.display());
    Ok(())
}
