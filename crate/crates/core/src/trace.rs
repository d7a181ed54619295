//! Per-iteration run records shared by every optimizer loop, plus their
//! JSON-lines serialization.
//!
//! One line per iteration: {step, energy, p_gs, w, delta, theta_norm,
//! residual}. The full parameter vector is dumped only at the best step and
//! the final step, as trailing records tagged by `theta_at`.

use serde::{Deserialize, Serialize};

/// Scalars recorded at one iteration. Step 0 is the initialization row
/// (w, delta, residual, and the norms default to 0 there).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub energy: f64,
    pub p_gs: f64,
    pub w: f64,
    pub delta: f64,
    pub theta_norm: f64,
    pub residual: f64,
    /// Gradient and solve-direction norms; diagnostics kept in memory and in
    /// the summary, not part of the 7-field JSONL schema.
    #[serde(skip)]
    pub grad_norm: f64,
    #[serde(skip)]
    pub phi_norm: f64,
}

impl TraceRecord {
    pub fn initial(energy: f64, p_gs: f64) -> Self {
        TraceRecord {
            step: 0,
            energy,
            p_gs,
            w: 0.0,
            delta: 0.0,
            theta_norm: 0.0,
            residual: 0.0,
            grad_norm: 0.0,
            phi_norm: 0.0,
        }
    }
}

#[derive(Debug, Serialize)]
struct ThetaDump<'a> {
    theta_at: &'a str,
    step: usize,
    theta: &'a [f64],
}

/// Full record of one optimizer run.
#[derive(Debug, Clone, Default)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    /// Parameter snapshot per recorded step (index matches `records`).
    pub thetas: Vec<Vec<f64>>,
    pub best_step: usize,
    pub best_energy: f64,
    pub theta_best: Vec<f64>,
    pub theta_final: Vec<f64>,
    /// Bitstrings sampled from the best state, when the run sampled.
    pub solutions: Vec<u64>,
    /// Best sampled (bitstring, cost).
    pub solution: Option<(u64, f64)>,
}

impl RunTrace {
    pub(crate) fn new() -> Self {
        RunTrace { best_energy: f64::INFINITY, ..Default::default() }
    }

    /// Appends a record, keeping the best-(theta, energy) pair in sync.
    pub(crate) fn push(&mut self, record: TraceRecord, theta: Vec<f64>) {
        if record.energy < self.best_energy {
            self.best_energy = record.energy;
            self.best_step = record.step;
            self.theta_best = theta.clone();
        }
        self.theta_final = theta.clone();
        self.records.push(record);
        self.thetas.push(theta);
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.energy)
    }

    pub fn final_energy(&self) -> f64 {
        self.records.last().map(|r| r.energy).unwrap_or(f64::NAN)
    }

    /// Serializes to JSON lines: one record per iteration, then the theta
    /// dumps for the best and final steps.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("trace record"));
            out.push('\n');
        }
        let best = ThetaDump { theta_at: "best", step: self.best_step, theta: &self.theta_best };
        out.push_str(&serde_json::to_string(&best).expect("theta dump"));
        out.push('\n');
        let last_step = self.records.last().map(|r| r.step).unwrap_or(0);
        let fin = ThetaDump { theta_at: "final", step: last_step, theta: &self.theta_final };
        out.push_str(&serde_json::to_string(&fin).expect("theta dump"));
        out.push('\n');
        out
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
