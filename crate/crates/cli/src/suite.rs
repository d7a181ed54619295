//! Suite execution: instance generation, run dispatch across a worker pool,
//! metric extraction, and deterministic CSV / summary output.
//!
//! Seed derivation is FNV-1a over "{global_seed}/{suite}/{index}/{purpose}",
//! where purpose is "graph" for instance generation and the method tag for
//! runs. The hash is fixed here byte-for-byte so outputs stay stable across
//! toolchains.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{Context, Result};
use awqv_core::ansatz::{apply_ansatz, build_ansatz, GradientMethod};
use awqv_core::awqv::{awqv_run, qiv_run, AwqvConfig};
use awqv_core::gw::{default_rank, gw_solve, hyperplane_round_trajectory, GwOptions};
use awqv_core::metrics::{expected_best_alpha, failure_predicate_sampling, ground_state_probability};
use awqv_core::optimize::{vqe_run, OptimizerKind, VqeInit};
use awqv_core::problem::{
    generate_er_weighted, generate_regular, maxcut_cost, MaxCutInstance, PreparedInstance,
};
use awqv_core::qite::{cqite_run, qite_run, RunOptions};
use awqv_core::statevec::{sample, StateVector};
use awqv_core::trace::RunTrace;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Family, Method, ResolvedMethod};

/// Sampling budgets reported as expected-best-alpha columns.
pub const ALPHA_BUDGETS: [usize; 5] = [1, 2, 3, 5, 10];
/// Sampling budgets reported as failure flags.
pub const FAILURE_BUDGETS: [usize; 10] = [5, 10, 15, 20, 25, 30, 35, 40, 45, 50];

/// FNV-1a 64-bit; the stable seed-derivation hash.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

pub fn derive_seed(global_seed: u64, suite: &str, index: usize, purpose: &str) -> u64 {
    fnv1a64(format!("{global_seed}/{suite}/{index}/{purpose}").as_bytes())
}

/// One CSV row. Option fields serialize as empty cells where a metric does
/// not apply (e.g. p_gs for the classical baseline).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsRow {
    pub suite: String,
    pub instance: usize,
    pub method: String,
    pub status: String,
    pub n: usize,
    pub graph_seed: u64,
    pub run_seed: u64,
    pub energy_best: Option<f64>,
    pub best_step: Option<usize>,
    pub solution: Option<String>,
    pub solution_cost: Option<f64>,
    pub solution_alpha: Option<f64>,
    pub p_gs: Option<f64>,
    pub alpha_m1: Option<f64>,
    pub alpha_m2: Option<f64>,
    pub alpha_m3: Option<f64>,
    pub alpha_m5: Option<f64>,
    pub alpha_m10: Option<f64>,
    pub fail_m5: Option<bool>,
    pub fail_m10: Option<bool>,
    pub fail_m15: Option<bool>,
    pub fail_m20: Option<bool>,
    pub fail_m25: Option<bool>,
    pub fail_m30: Option<bool>,
    pub fail_m35: Option<bool>,
    pub fail_m40: Option<bool>,
    pub fail_m45: Option<bool>,
    pub fail_m50: Option<bool>,
    pub gw_objective: Option<f64>,
    pub gw_best_cut: Option<f64>,
}

impl MetricsRow {
    fn empty(suite: &str, instance: usize, method: &str, n: usize, gseed: u64, rseed: u64) -> Self {
        MetricsRow {
            suite: suite.to_string(),
            instance,
            method: method.to_string(),
            status: "ok".into(),
            n,
            graph_seed: gseed,
            run_seed: rseed,
            energy_best: None,
            best_step: None,
            solution: None,
            solution_cost: None,
            solution_alpha: None,
            p_gs: None,
            alpha_m1: None,
            alpha_m2: None,
            alpha_m3: None,
            alpha_m5: None,
            alpha_m10: None,
            fail_m5: None,
            fail_m10: None,
            fail_m15: None,
            fail_m20: None,
            fail_m25: None,
            fail_m30: None,
            fail_m35: None,
            fail_m40: None,
            fail_m45: None,
            fail_m50: None,
            gw_objective: None,
            gw_best_cut: None,
        }
    }

    fn set_failures(&mut self, flags: &[bool]) {
        let slots: [&mut Option<bool>; 10] = [
            &mut self.fail_m5,
            &mut self.fail_m10,
            &mut self.fail_m15,
            &mut self.fail_m20,
            &mut self.fail_m25,
            &mut self.fail_m30,
            &mut self.fail_m35,
            &mut self.fail_m40,
            &mut self.fail_m45,
            &mut self.fail_m50,
        ];
        for (slot, &f) in slots.into_iter().zip(flags) {
            *slot = Some(f);
        }
    }

    fn set_alphas(&mut self, values: &[f64]) {
        let slots: [&mut Option<f64>; 5] = [
            &mut self.alpha_m1,
            &mut self.alpha_m2,
            &mut self.alpha_m3,
            &mut self.alpha_m5,
            &mut self.alpha_m10,
        ];
        for (slot, &v) in slots.into_iter().zip(values) {
            *slot = Some(v);
        }
    }

    pub fn failure_flags(&self) -> Vec<Option<bool>> {
        vec![
            self.fail_m5,
            self.fail_m10,
            self.fail_m15,
            self.fail_m20,
            self.fail_m25,
            self.fail_m30,
            self.fail_m35,
            self.fail_m40,
            self.fail_m45,
            self.fail_m50,
        ]
    }
}

/// Vertex 1 is the first character.
pub fn bitstring_text(x: u64, n: usize) -> String {
    (0..n).map(|q| if (x >> q) & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn generate_instance(family: &Family, seed: u64) -> Result<MaxCutInstance> {
    let instance = match family {
        Family::Regular { n, d, .. } => generate_regular(*n, *d, seed),
        Family::Er { n, p, .. } => generate_er_weighted(*n, *p, seed),
    };
    instance.map_err(|e| anyhow::anyhow!("{e}"))
}

fn gradient_method(tag: &str) -> GradientMethod {
    if tag == "shift" {
        GradientMethod::ParameterShift
    } else {
        GradientMethod::Adjoint
    }
}

/// Executes one (instance, method) pair and fills a metrics row plus the
/// trace text for quantum methods.
pub fn execute_run(
    suite: &str,
    instance_idx: usize,
    prepared: &PreparedInstance,
    method: &ResolvedMethod,
    graph_seed: u64,
    run_seed: u64,
) -> (MetricsRow, Option<String>) {
    let tag = method.tag();
    let mut row = MetricsRow::empty(suite, instance_idx, &tag, prepared.n(), graph_seed, run_seed);
    match run_inner(prepared, method, run_seed, &mut row) {
        Ok(trace_text) => (row, trace_text),
        Err(e) => {
            row.status = format!("error:{e}");
            (row, None)
        }
    }
}

fn run_inner(
    prepared: &PreparedInstance,
    method: &ResolvedMethod,
    run_seed: u64,
    row: &mut MetricsRow,
) -> Result<Option<String>> {
    let opts = RunOptions::default();
    if method.method == Method::Gw {
        let rank = method.rank.unwrap_or_else(|| default_rank(prepared.n()));
        let gw_opts = GwOptions { restarts: method.restarts, ..Default::default() };
        let emb = gw_solve(prepared.instance(), rank, &gw_opts, run_seed)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let budget = *FAILURE_BUDGETS.last().unwrap();
        let (best_x, best_cost, prefix) =
            hyperplane_round_trajectory(&emb, prepared.instance(), budget, run_seed.wrapping_add(1))
                .map_err(|e| anyhow::anyhow!("{e}"))?;
        row.gw_objective = Some(emb.objective());
        row.gw_best_cut = Some(-best_cost);
        row.solution = Some(bitstring_text(best_x, prepared.n()));
        row.solution_cost = Some(best_cost);
        row.solution_alpha = Some(
            awqv_core::metrics::approximation_ratio(best_cost, prepared.spectrum())
                .map_err(|e| anyhow::anyhow!("{e}"))?,
        );
        // Failure at budget M: the best cut among the first M roundings is
        // not an optimum.
        let optimum = prepared.spectrum().optimum();
        let flags: Vec<bool> = FAILURE_BUDGETS
            .iter()
            .map(|&m| prefix[m - 1] != optimum)
            .collect();
        row.set_failures(&flags);
        return Ok(None);
    }

    let ansatz = method.ansatz.expect("quantum methods carry an ansatz");
    let spec = build_ansatz(prepared.n(), ansatz).map_err(|e| anyhow::anyhow!("{e}"))?;
    // cqite(P1A) follows the published setup: qubit 1 pinned to |0>.
    let psi0 = if method.method == Method::Cqite && ansatz == awqv_core::ansatz::AnsatzVariant::P1a {
        StateVector::zero_plus_state(prepared.n())
    } else {
        StateVector::plus_state(prepared.n())
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    let (trace, eval_state): (RunTrace, StateVector) = match method.method {
        Method::Awqv => {
            let config = AwqvConfig {
                eta: method.eta,
                mu: method.mu,
                lambda: method.lambda,
                iters: method.iters,
                samples: method.samples,
                seed: run_seed,
                gradient: gradient_method(&method.gradient),
                weight_override: None,
            };
            let (_, trace) = awqv_run(prepared, &spec, &psi0, &config, &opts)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let state = apply_ansatz(&spec, &trace.theta_best, &psi0)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            (trace, state)
        }
        Method::Qiv => {
            let (_, trace) = qiv_run(
                prepared,
                &spec,
                &psi0,
                method.eta,
                method.iters,
                method.samples,
                run_seed,
                &opts,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            let state = apply_ansatz(&spec, &trace.theta_best, &psi0)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            (trace, state)
        }
        Method::Vqe => {
            let optimizer = if method.optimizer == "adam" { OptimizerKind::Adam } else { OptimizerKind::Gd };
            let init = if method.init == "zero" { VqeInit::Zero } else { VqeInit::SingleQiteStep };
            let trace = vqe_run(
                prepared,
                &spec,
                &psi0,
                optimizer,
                method.eta,
                method.iters,
                init,
                gradient_method(&method.gradient),
                &opts,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            let state = apply_ansatz(&spec, &trace.theta_best, &psi0)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            (trace, state)
        }
        Method::Cqite => {
            let trace = cqite_run(prepared, &spec, &psi0, method.eta, method.iters, &opts)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let state = apply_ansatz(&spec, &trace.theta_best, &psi0)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            (trace, state)
        }
        Method::Qite => {
            let (trace, state) = qite_run(
                prepared,
                spec.strings(),
                &psi0,
                method.eta,
                method.iters,
                &opts,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            (trace, state)
        }
        Method::Gw => unreachable!(),
    };

    row.energy_best = Some(trace.best_energy);
    row.best_step = Some(trace.best_step);

    let p_gs = ground_state_probability(&eval_state, prepared.spectrum())
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    row.p_gs = Some(p_gs);
    let alphas: Vec<f64> = ALPHA_BUDGETS
        .iter()
        .map(|&m| expected_best_alpha(&eval_state, prepared.spectrum(), m))
        .collect::<awqv_core::Result<_>>()
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    row.set_alphas(&alphas);
    let flags: Vec<bool> = FAILURE_BUDGETS
        .iter()
        .map(|&m| failure_predicate_sampling(p_gs, m))
        .collect();
    row.set_failures(&flags);

    // Solution draw: runs that sample internally already stored it; the rest
    // get the same protocol applied to the evaluated state.
    let (sol_x, sol_cost) = match trace.solution {
        Some(pair) => pair,
        None => {
            let draws = sample(&eval_state, method.samples, run_seed)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut best = draws[0];
            let mut best_cost = maxcut_cost(prepared.instance(), best);
            for &x in &draws[1..] {
                let c = maxcut_cost(prepared.instance(), x);
                if c < best_cost {
                    best = x;
                    best_cost = c;
                }
            }
            (best, best_cost)
        }
    };
    row.solution = Some(bitstring_text(sol_x, prepared.n()));
    row.solution_cost = Some(sol_cost);
    row.solution_alpha = Some(
        awqv_core::metrics::approximation_ratio(sol_cost, prepared.spectrum())
            .map_err(|e| anyhow::anyhow!("{e}"))?,
    );

    Ok(Some(trace.to_jsonl()))
}

#[derive(Debug, Serialize)]
struct MethodSummary {
    runs: usize,
    errors: usize,
    mean_p_gs: Option<f64>,
    min_p_gs: Option<f64>,
    mean_alpha: BTreeMap<String, f64>,
    failure_counts: BTreeMap<String, usize>,
}

/// Runs a full suite: generates instances, executes every (instance, method)
/// pair across `workers` threads, and writes instances, traces, a
/// deterministic metrics.csv, summary.json, and timings.json under `out`.
pub fn run_suite(config: &ExperimentConfig, out: &Path, workers: usize) -> Result<()> {
    let start = Instant::now();
    let resolved: Vec<ResolvedMethod> = config
        .methods
        .iter()
        .map(|m| m.resolve(config.family.is_weighted()))
        .collect::<Result<_>>()?;

    fs::create_dir_all(out.join("instances"))?;
    fs::create_dir_all(out.join("traces"))?;

    // Instances first. Preparation failures (e.g. over the dense capacity)
    // are recorded per run later instead of aborting the suite.
    let mut instances: Vec<(usize, u64, Result<PreparedInstance, String>)> = Vec::new();
    for idx in 0..config.family.count() {
        let seed = derive_seed(config.seed, &config.suite, idx, "graph");
        let prepared = generate_instance(&config.family, seed).and_then(|instance| {
            fs::write(out.join("instances").join(format!("{idx:03}.json")), instance.to_json())?;
            PreparedInstance::new(instance).map_err(|e| anyhow::anyhow!("{e}"))
        });
        instances.push((idx, seed, prepared.map_err(|e| e.to_string())));
    }

    // Ansatz audit dumps, one per distinct (variant, n).
    let mut dumped = std::collections::BTreeSet::new();
    for m in &resolved {
        if let Some(variant) = m.ansatz {
            if dumped.insert(variant.tag().to_string()) {
                let spec = build_ansatz(config.family.n(), variant)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                let path = out.join(format!("ansatz_{}_n{}.txt", variant.tag(), config.family.n()));
                fs::write(path, spec.labels().join("\n") + "\n")?;
            }
        }
    }

    // Job queue over (instance, method) pairs, pulled by `workers` threads.
    type JobResult = (MetricsRow, Option<String>, f64);
    let jobs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..resolved.len()).map(move |m| (i, m)))
        .collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Mutex<Vec<Option<JobResult>>> = Mutex::new(vec![None; jobs.len()]);

    std::thread::scope(|scope| {
        for _ in 0..workers.max(1) {
            scope.spawn(|| loop {
                let j = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if j >= jobs.len() {
                    break;
                }
                let (iidx, midx) = jobs[j];
                let (idx, graph_seed, ref prepared) = instances[iidx];
                let method = &resolved[midx];
                let run_seed = derive_seed(config.seed, &config.suite, idx, &method.tag());
                let t0 = Instant::now();
                let (row, trace) = match prepared {
                    Ok(prepared) => {
                        execute_run(&config.suite, idx, prepared, method, graph_seed, run_seed)
                    }
                    Err(e) => {
                        let mut row = MetricsRow::empty(
                            &config.suite,
                            idx,
                            &method.tag(),
                            config.family.n(),
                            graph_seed,
                            run_seed,
                        );
                        row.status = format!("error:{e}");
                        (row, None)
                    }
                };
                let wall = t0.elapsed().as_secs_f64();
                results.lock().unwrap()[j] = Some((row, trace, wall));
            });
        }
    });

    let mut rows = Vec::with_capacity(jobs.len());
    let mut timings = BTreeMap::new();
    for slot in results.into_inner().unwrap() {
        let (row, trace, wall) = slot.expect("every job completed");
        if let Some(text) = trace {
            let name = format!("{:03}_{}.jsonl", row.instance, row.method);
            fs::write(out.join("traces").join(name), text)?;
        }
        timings.insert(format!("{:03}/{}", row.instance, row.method), wall);
        rows.push(row);
    }
    rows.sort_by(|a, b| (a.instance, &a.method).cmp(&(b.instance, &b.method)));

    write_metrics_csv(&out.join("metrics.csv"), &rows)?;

    let summary = summarize_rows(&rows);
    let summary_doc = serde_json::json!({
        "suite": config.suite,
        "family": config.family.label(),
        "seed": config.seed,
        "instances": instances.len(),
        "methods": summary,
    });
    fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary_doc)?)?;

    let timing_doc = serde_json::json!({
        "total_seconds": start.elapsed().as_secs_f64(),
        "workers": workers,
        "runs": timings,
    });
    fs::write(out.join("timings.json"), serde_json::to_string_pretty(&timing_doc)?)?;
    Ok(())
}

pub fn write_metrics_csv(path: &Path, rows: &[MetricsRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).context("opening metrics.csv")?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn summarize_rows(rows: &[MetricsRow]) -> BTreeMap<String, MethodSummary> {
    let mut by_method: BTreeMap<String, Vec<&MetricsRow>> = BTreeMap::new();
    for row in rows {
        by_method.entry(row.method.clone()).or_default().push(row);
    }
    let mut out = BTreeMap::new();
    for (method, rows) in by_method {
        let ok: Vec<&&MetricsRow> = rows.iter().filter(|r| r.status == "ok").collect();
        let pgs: Vec<f64> = ok.iter().filter_map(|r| r.p_gs).collect();
        let mean_p_gs = if pgs.is_empty() {
            None
        } else {
            Some(pgs.iter().sum::<f64>() / pgs.len() as f64)
        };
        let min_p_gs = pgs.iter().copied().fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.min(v)))
        });
        let mut mean_alpha = BTreeMap::new();
        for (k, &m) in ALPHA_BUDGETS.iter().enumerate() {
            let vals: Vec<f64> = ok
                .iter()
                .filter_map(|r| match k {
                    0 => r.alpha_m1,
                    1 => r.alpha_m2,
                    2 => r.alpha_m3,
                    3 => r.alpha_m5,
                    _ => r.alpha_m10,
                })
                .collect();
            if !vals.is_empty() {
                mean_alpha.insert(format!("m{m}"), vals.iter().sum::<f64>() / vals.len() as f64);
            }
        }
        let mut failure_counts = BTreeMap::new();
        for (k, &m) in FAILURE_BUDGETS.iter().enumerate() {
            let count = ok
                .iter()
                .filter(|r| r.failure_flags()[k] == Some(true))
                .count();
            failure_counts.insert(format!("m{m}"), count);
        }
        out.insert(
            method,
            MethodSummary {
                runs: rows.len(),
                errors: rows.iter().filter(|r| r.status != "ok").count(),
                mean_p_gs,
                min_p_gs,
                mean_alpha,
                failure_counts,
            },
        );
    }
    out
}

/// Reads every metrics.csv under `dir` (recursively) and prints the
/// mean/min p_gs and failure-count tables; optionally writes them as JSON.
pub fn summarize_dir(dir: &Path, out_json: Option<&Path>) -> Result<String> {
    let mut rows: Vec<MetricsRow> = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    let mut found = Vec::new();
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).with_context(|| format!("reading {}", d.display()))? {
            let entry = entry?;
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().is_some_and(|f| f == "metrics.csv") {
                found.push(path);
            }
        }
    }
    found.sort();
    for path in &found {
        let mut reader = csv::Reader::from_path(path)?;
        for row in reader.deserialize::<MetricsRow>() {
            rows.push(row.with_context(|| format!("parsing {}", path.display()))?);
        }
    }

    let mut groups: BTreeMap<(String, String), Vec<&MetricsRow>> = BTreeMap::new();
    for row in &rows {
        groups.entry((row.suite.clone(), row.method.clone())).or_default().push(row);
    }

    let mut text = String::new();
    text.push_str("suite,method,runs,errors,mean_p_gs,min_p_gs\n");
    let mut json_groups = Vec::new();
    for ((suite, method), rows) in &groups {
        let ok: Vec<&&MetricsRow> = rows.iter().filter(|r| r.status == "ok").collect();
        let pgs: Vec<f64> = ok.iter().filter_map(|r| r.p_gs).collect();
        let mean = if pgs.is_empty() { f64::NAN } else { pgs.iter().sum::<f64>() / pgs.len() as f64 };
        let min = pgs.iter().copied().fold(f64::NAN, f64::min);
        let errors = rows.len() - ok.len();
        text.push_str(&format!(
            "{suite},{method},{},{errors},{},{}\n",
            rows.len(),
            fmt_opt(mean),
            fmt_opt(min)
        ));
        let mut failures = BTreeMap::new();
        for (k, &m) in FAILURE_BUDGETS.iter().enumerate() {
            let count = ok.iter().filter(|r| r.failure_flags()[k] == Some(true)).count();
            failures.insert(format!("m{m}"), count);
        }
        json_groups.push(serde_json::json!({
            "suite": suite,
            "method": method,
            "runs": rows.len(),
            "errors": errors,
            "mean_p_gs": if mean.is_nan() { None } else { Some(mean) },
            "min_p_gs": if min.is_nan() { None } else { Some(min) },
            "failure_counts": failures,
        }));
    }

    text.push_str("\nfailure counts vs M\nsuite,method,");
    text.push_str(
        &FAILURE_BUDGETS.iter().map(|m| format!("m{m}")).collect::<Vec<_>>().join(","),
    );
    text.push('\n');
    for ((suite, method), rows) in &groups {
        let ok: Vec<&&MetricsRow> = rows.iter().filter(|r| r.status == "ok").collect();
        let counts: Vec<String> = (0..FAILURE_BUDGETS.len())
            .map(|k| {
                ok.iter()
                    .filter(|r| r.failure_flags()[k] == Some(true))
                    .count()
                    .to_string()
            })
            .collect();
        text.push_str(&format!("{suite},{method},{}\n", counts.join(",")));
    }

    if let Some(path) = out_json {
        fs::write(path, serde_json::to_string_pretty(&json_groups)?)?;
    }
    Ok(text)
}

fn fmt_opt(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v}")
    }
}

/// Resolves the worker count: flag beats the AWQV_WORKERS env var beats the
/// machine's available parallelism.
pub fn resolve_workers(flag: Option<usize>) -> usize {
    if let Some(w) = flag {
        return w.max(1);
    }
    if let Ok(text) = std::env::var("AWQV_WORKERS") {
        if let Ok(w) = text.trim().parse::<usize>() {
            return w.max(1);
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn load_graph(path: &Path) -> Result<MaxCutInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    MaxCutInstance::from_json(&text).map_err(|e| anyhow::anyhow!("{e}"))
}

/// `gen` subcommand body: writes `count` graphs as NNN.json under `out`.
pub fn generate_graphs(family: &Family, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out)?;
    let mut paths = Vec::new();
    for idx in 0..family.count() {
        let graph_seed = fnv1a64(format!("{seed}/gen/{idx}").as_bytes());
        let instance = generate_instance(family, graph_seed)?;
        let path = out.join(format!("{idx:03}.json"));
        fs::write(&path, instance.to_json())?;
        paths.push(path);
    }
    Ok(paths)
}
