//! Experiment configuration: suite files, per-method hyperparameter
//! defaults, and the single-run config form.

use anyhow::{bail, Context, Result};
use awqv_core::ansatz::AnsatzVariant;
use serde::{Deserialize, Serialize};

/// Graph family of a suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Family {
    Regular { n: usize, d: usize, count: usize },
    Er { n: usize, p: f64, count: usize },
}

impl Family {
    pub fn n(&self) -> usize {
        match self {
            Family::Regular { n, .. } | Family::Er { n, .. } => *n,
        }
    }

    pub fn count(&self) -> usize {
        match self {
            Family::Regular { count, .. } | Family::Er { count, .. } => *count,
        }
    }

    pub fn is_weighted(&self) -> bool {
        matches!(self, Family::Er { .. })
    }

    pub fn label(&self) -> String {
        match self {
            Family::Regular { n, d, .. } => format!("regular n={n} d={d}"),
            Family::Er { n, p, .. } => format!("er n={n} p={p}"),
        }
    }
}

/// Solver family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Awqv,
    Qiv,
    Vqe,
    Cqite,
    Qite,
    Gw,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Awqv => "awqv",
            Method::Qiv => "qiv",
            Method::Vqe => "vqe",
            Method::Cqite => "cqite",
            Method::Qite => "qite",
            Method::Gw => "gw",
        }
    }

    fn parse(tag: &str) -> Option<Self> {
        match tag {
            "awqv" => Some(Method::Awqv),
            "qiv" => Some(Method::Qiv),
            "vqe" => Some(Method::Vqe),
            "cqite" => Some(Method::Cqite),
            "qite" => Some(Method::Qite),
            "gw" => Some(Method::Gw),
            _ => None,
        }
    }
}

/// One method entry as written in a config file. The `method` field accepts
/// either a bare tag ("awqv") with a separate `ansatz` field, or a combined
/// tag ("awqv-p2a-zy"). Unset hyperparameters take the per-method defaults
/// listed in `ResolvedMethod::resolve`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// VQE only: "gd" or "adam".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<String>,
    /// VQE only: "zero" or "single-qite-step".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
    /// "adjoint" (default) or "shift".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<String>,
    /// GW only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

/// A fully-resolved method ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedMethod {
    pub method: Method,
    pub ansatz: Option<AnsatzVariant>,
    pub eta: f64,
    pub mu: f64,
    pub lambda: f64,
    pub iters: usize,
    pub samples: usize,
    pub optimizer: String,
    pub init: String,
    pub gradient: String,
    pub restarts: usize,
    pub rank: Option<usize>,
}

impl ResolvedMethod {
    /// CSV / file-name tag: "awqv-p2a-zy", "cqite-p1a", "gw".
    pub fn tag(&self) -> String {
        match self.ansatz {
            Some(a) => format!("{}-{}", self.method.tag(), a.tag()),
            None => self.method.tag().to_string(),
        }
    }
}

impl MethodSpec {
    /// Applies the published defaults: eta/dtau 0.05 (0.10 for cqite-p1a),
    /// 50 iterations, mu 0.9 on unweighted suites and 0.8 on weighted ones,
    /// lambda 1, 10 samples; GW gets 10 restarts and rank ceil(sqrt(2n)).
    pub fn resolve(&self, weighted_family: bool) -> Result<ResolvedMethod> {
        let raw = self.method.to_ascii_lowercase();
        let (method, ansatz_from_tag) = match Method::parse(&raw) {
            Some(m) => (m, None),
            None => match raw.split_once('-') {
                Some((head, rest)) => match Method::parse(head) {
                    Some(m) => (m, Some(rest.to_string())),
                    None => bail!("unknown method tag {raw:?}"),
                },
                None => bail!("unknown method tag {raw:?}"),
            },
        };
        let ansatz_tag = match (&self.ansatz, ansatz_from_tag) {
            (Some(a), None) => Some(a.clone()),
            (None, Some(a)) => Some(a),
            (None, None) => None,
            (Some(a), Some(b)) if a.eq_ignore_ascii_case(&b) => Some(a.clone()),
            (Some(a), Some(b)) => bail!("method tag names ansatz {b:?} but ansatz field says {a:?}"),
        };
        let ansatz = match (method, ansatz_tag) {
            (Method::Gw, None) => None,
            (Method::Gw, Some(a)) => bail!("gw takes no ansatz (got {a:?})"),
            (_, Some(a)) => Some(AnsatzVariant::parse(&a).map_err(|e| anyhow::anyhow!("{e}"))?),
            (m, None) => bail!("method {} requires an ansatz tag", m.tag()),
        };

        let default_eta = match (method, ansatz) {
            (Method::Cqite, Some(AnsatzVariant::P1a)) => 0.10,
            _ => 0.05,
        };
        let optimizer = self.optimizer.clone().unwrap_or_else(|| "gd".into());
        if !matches!(optimizer.as_str(), "gd" | "adam") {
            bail!("unknown optimizer {optimizer:?}");
        }
        let init = self.init.clone().unwrap_or_else(|| "single-qite-step".into());
        if !matches!(init.as_str(), "zero" | "single-qite-step") {
            bail!("unknown init {init:?}");
        }
        let gradient = self.gradient.clone().unwrap_or_else(|| "adjoint".into());
        if !matches!(gradient.as_str(), "adjoint" | "shift") {
            bail!("unknown gradient method {gradient:?}");
        }
        Ok(ResolvedMethod {
            method,
            ansatz,
            eta: self.eta.unwrap_or(default_eta),
            mu: self.mu.unwrap_or(if weighted_family { 0.8 } else { 0.9 }),
            lambda: self.lambda.unwrap_or(1.0),
            iters: self.iters.unwrap_or(50),
            samples: self.samples.unwrap_or(10),
            optimizer,
            init,
            gradient,
            restarts: self.restarts.unwrap_or(10),
            rank: self.rank,
        })
    }
}

/// A suite config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: String,
    pub family: Family,
    pub methods: Vec<MethodSpec>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).context("parsing suite config")?;
        if config.methods.is_empty() {
            bail!("suite config lists no methods");
        }
        if config.family.count() == 0 {
            bail!("suite config requests zero instances");
        }
        Ok(config)
    }
}

/// Single-run config: one method on one graph file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingleRunConfig {
    pub method: String,
    #[serde(default)]
    pub ansatz: Option<String>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub iters: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    pub seed: u64,
    pub graph_path: String,
}

impl SingleRunConfig {
    pub fn method_spec(&self) -> MethodSpec {
        MethodSpec {
            method: self.method.clone(),
            ansatz: self.ansatz.clone(),
            eta: self.eta,
            mu: self.mu,
            lambda: self.lambda,
            iters: self.iters,
            samples: self.samples,
            ..Default::default()
        }
    }
}
