//! Gradient-based optimizers and the plain VQE loop.

use serde::{Deserialize, Serialize};

use crate::ansatz::{apply_ansatz, energy_gradient, AnsatzSpec, GradientMethod};
use crate::error::{Error, Result};
use crate::metrics::ground_state_probability;
use crate::problem::PreparedInstance;
use crate::qite::{assemble_system_with, solve_step, RunOptions};
use crate::statevec::{expectation_diagonal, StateVector};
use crate::trace::{l2_norm, RunTrace, TraceRecord};

/// Optimizer family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Gd,
    Adam,
}

/// State carried between iterations. GD is stateless; Adam keeps
/// bias-corrected first and second moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerState {
    pub kind: OptimizerKind,
    pub eta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl OptimizerState {
    pub fn gd(eta: f64, dim: usize) -> Self {
        OptimizerState {
            kind: OptimizerKind::Gd,
            eta,
            beta1: 0.0,
            beta2: 0.0,
            epsilon: 0.0,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            t: 0,
        }
    }

    /// Standard Adam defaults: beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8.
    pub fn adam(eta: f64, dim: usize) -> Self {
        OptimizerState {
            kind: OptimizerKind::Adam,
            eta,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            t: 0,
        }
    }

    /// Applies one update in place, advancing the iteration counter.
    pub fn step(&mut self, theta: &mut [f64], grad: &[f64]) -> Result<()> {
        if theta.len() != self.m.len() || grad.len() != self.m.len() {
            return Err(Error::input("optimizer dimension mismatch"));
        }
        self.t += 1;
        match self.kind {
            OptimizerKind::Gd => {
                for (t, g) in theta.iter_mut().zip(grad) {
                    *t -= self.eta * g;
                }
            }
            OptimizerKind::Adam => {
                let bc1 = 1.0 - self.beta1.powi(self.t as i32);
                let bc2 = 1.0 - self.beta2.powi(self.t as i32);
                for i in 0..theta.len() {
                    self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * grad[i];
                    self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * grad[i] * grad[i];
                    let m_hat = self.m[i] / bc1;
                    let v_hat = self.v[i] / bc2;
                    theta[i] -= self.eta * m_hat / (v_hat.sqrt() + self.epsilon);
                }
            }
        }
        Ok(())
    }
}

/// theta - eta * grad.
pub fn gd_step(theta: &[f64], grad: &[f64], eta: f64) -> Result<Vec<f64>> {
    if theta.len() != grad.len() {
        return Err(Error::input("gradient dimension mismatch"));
    }
    Ok(theta.iter().zip(grad).map(|(t, g)| t - eta * g).collect())
}

/// One bias-corrected Adam update; returns the new parameters and state.
pub fn adam_step(
    mut state: OptimizerState,
    theta: &[f64],
    grad: &[f64],
) -> Result<(Vec<f64>, OptimizerState)> {
    let mut out = theta.to_vec();
    state.step(&mut out, grad)?;
    Ok((out, state))
}

/// How VQE seeds its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VqeInit {
    Zero,
    /// theta(0) = 2 eta phi-hat from one imaginary-time solve at psi0.
    SingleQiteStep,
}

/// Plain VQE: iterate optimizer steps on the energy gradient, tracking the
/// best parameters seen.
#[allow(clippy::too_many_arguments)]
pub fn vqe_run(
    prepared: &PreparedInstance,
    spec: &AnsatzSpec,
    psi0: &StateVector,
    optimizer: OptimizerKind,
    eta: f64,
    iters: usize,
    init: VqeInit,
    gradient: GradientMethod,
    opts: &RunOptions,
) -> Result<RunTrace> {
    if iters == 0 {
        return Err(Error::input("iteration count must be at least 1"));
    }
    let dim = spec.parameter_count();
    let mut state = match optimizer {
        OptimizerKind::Gd => OptimizerState::gd(eta, dim),
        OptimizerKind::Adam => OptimizerState::adam(eta, dim),
    };
    let mut theta = vec![0.0f64; dim];
    if init == VqeInit::SingleQiteStep {
        let system = assemble_system_with(psi0, spec.strings(), prepared.h_diag(), opts)?;
        let sol = solve_step(&system, opts.rel_tol)?;
        for (t, f) in theta.iter_mut().zip(&sol.phi) {
            *t = 2.0 * eta * f;
        }
    }

    let mut trace = RunTrace::new();
    let mut psi = apply_ansatz(spec, &theta, psi0)?;
    let mut prev_energy = expectation_diagonal(prepared.h_diag(), &psi)?;
    let mut rec0 = TraceRecord::initial(prev_energy, ground_state_probability(&psi, prepared.spectrum())?);
    rec0.theta_norm = l2_norm(&theta);
    trace.push(rec0, theta.clone());

    for s in 1..=iters {
        let grad = energy_gradient(spec, &theta, psi0, prepared.h_diag(), gradient)?;
        state.step(&mut theta, &grad)?;
        psi = apply_ansatz(spec, &theta, psi0)?;
        let energy = expectation_diagonal(prepared.h_diag(), &psi)?;
        let rec = TraceRecord {
            step: s,
            energy,
            p_gs: ground_state_probability(&psi, prepared.spectrum())?,
            w: 1.0, // pure gradient updates
            delta: prev_energy - energy,
            theta_norm: l2_norm(&theta),
            residual: 0.0,
            grad_norm: l2_norm(&grad),
            phi_norm: 0.0,
        };
        prev_energy = energy;
        trace.push(rec, theta.clone());
    }
    Ok(trace)
}
