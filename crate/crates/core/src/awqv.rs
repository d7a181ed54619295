//! The adaptive weighted update: blends the energy gradient with the
//! compressed imaginary-time direction through a weight w(s) that shifts
//! from the imaginary-time side toward the gradient as energy convergence
//! slows. Also hosts the QIV ablation, where the weight is a binary step:
//! pure compressed evolution until the energy first rises, then pure
//! gradient descent from the best parameters found.

use crate::ansatz::{apply_ansatz, energy_gradient, AnsatzSpec, GradientMethod};
use crate::error::{Error, Result};
use crate::metrics::ground_state_probability;
use crate::problem::{maxcut_cost, PreparedInstance};
use crate::qite::{assemble_system_with, solve_step, RunOptions};
use crate::statevec::{expectation_diagonal, sample, StateVector};
use crate::trace::{l2_norm, RunTrace, TraceRecord};

/// Gradient norms below this leave only the imaginary-time term: the scale
/// factor ||phi|| / ||grad|| would be singular, and at a stationary point of
/// the energy only that term can move the parameters.
pub const GRAD_NORM_FLOOR: f64 = 1e-12;

/// The weighting schedule with its energy history.
///
/// For s >= 2 the raw weight is
/// `mu w(s-1) + (1-mu)(1 - lambda delta(s-1) / mean)` with
/// `delta(l) = <H>(l-1) - <H>(l)` and `mean` the running average of the
/// deltas, then clamped to `min(max(raw, w(s-1)), 1)` so the sequence is
/// non-decreasing in [0, 1]. w(1) = 0 by definition.
#[derive(Debug, Clone)]
pub struct WeightSchedule {
    mu: f64,
    lambda: f64,
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightSchedule {
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if !(0.0 < mu && mu < 1.0) {
            return Err(Error::input(format!("mu = {mu} must lie in (0, 1)")));
        }
        if lambda <= 0.0 {
            return Err(Error::input(format!("lambda = {lambda} must be positive")));
        }
        Ok(WeightSchedule { mu, lambda, energies: Vec::new(), weights: Vec::new() })
    }

    /// Appends <H>(l) for the next l.
    pub fn record_energy(&mut self, energy: f64) {
        self.energies.push(energy);
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn delta(&self, l: usize) -> f64 {
        self.energies[l - 1] - self.energies[l]
    }
}

/// Computes, records, and returns w(s). The energy history must hold entries
/// 0..s-1. A running mean of exactly zero (a stalled energy) drops the ratio
/// term, shifting weight toward the gradient.
pub fn update_weight(sched: &mut WeightSchedule, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::input("iterations are 1-based"));
    }
    if sched.weights.len() != s - 1 {
        return Err(Error::input(format!(
            "weight for iteration {s} requested but {} weights recorded",
            sched.weights.len()
        )));
    }
    if s == 1 {
        sched.weights.push(0.0);
        return Ok(0.0);
    }
    if sched.energies.len() < s {
        return Err(Error::input(format!(
            "energy history holds {} entries, need {s}",
            sched.energies.len()
        )));
    }
    let prev = sched.weights[s - 2];
    let mean: f64 = (1..s).map(|l| sched.delta(l)).sum::<f64>() / (s - 1) as f64;
    let raw = if mean == 0.0 {
        sched.mu * prev + (1.0 - sched.mu)
    } else {
        sched.mu * prev + (1.0 - sched.mu) * (1.0 - sched.lambda * sched.delta(s - 1) / mean)
    };
    let w = raw.max(prev).min(1.0);
    sched.weights.push(w);
    Ok(w)
}

/// The modified update direction: `w (||phi|| / ||grad||) grad - 2 (1-w) phi`.
/// The scale factor aligns the magnitudes of the two terms.
pub fn awqv_direction(grad: &[f64], phi: &[f64], w: f64) -> Result<Vec<f64>> {
    if grad.len() != phi.len() {
        return Err(Error::input("gradient and phi dimension mismatch"));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::input(format!("weight {w} outside [0, 1]")));
    }
    let grad_norm = l2_norm(grad);
    let phi_norm = l2_norm(phi);
    let grad_scale = if grad_norm < GRAD_NORM_FLOOR { 0.0 } else { w * phi_norm / grad_norm };
    Ok(grad
        .iter()
        .zip(phi)
        .map(|(g, f)| grad_scale * g - 2.0 * (1.0 - w) * f)
        .collect())
}

/// Hyperparameters of one adaptive run.
#[derive(Debug, Clone)]
pub struct AwqvConfig {
    pub eta: f64,
    pub mu: f64,
    pub lambda: f64,
    pub iters: usize,
    /// Sampling budget for the final solution draw.
    pub samples: usize,
    pub seed: u64,
    pub gradient: GradientMethod,
    /// Pins w(s) to a constant; used by the ablation tests.
    pub weight_override: Option<f64>,
}

impl AwqvConfig {
    pub fn new(eta: f64, mu: f64, lambda: f64, iters: usize, samples: usize, seed: u64) -> Self {
        AwqvConfig {
            eta,
            mu,
            lambda,
            iters,
            samples,
            seed,
            gradient: GradientMethod::Adjoint,
            weight_override: None,
        }
    }
}

fn sample_solution(
    prepared: &PreparedInstance,
    spec: &AnsatzSpec,
    psi0: &StateVector,
    trace: &mut RunTrace,
    samples: usize,
    seed: u64,
) -> Result<u64> {
    let psi_best = apply_ansatz(spec, &trace.theta_best, psi0)?;
    let draws = sample(&psi_best, samples, seed)?;
    let mut best = draws[0];
    let mut best_cost = maxcut_cost(prepared.instance(), best);
    for &x in &draws[1..] {
        let c = maxcut_cost(prepared.instance(), x);
        if c < best_cost {
            best = x;
            best_cost = c;
        }
    }
    trace.solutions = draws;
    trace.solution = Some((best, best_cost));
    Ok(best)
}

/// The adaptive weighted run: per iteration, compute the gradient and the
/// imaginary-time direction, blend them with the current weight, update the
/// parameters, and track the best energy; finally sample the best state and
/// return the lowest-cost bitstring.
pub fn awqv_run(
    prepared: &PreparedInstance,
    spec: &AnsatzSpec,
    psi0: &StateVector,
    config: &AwqvConfig,
    opts: &RunOptions,
) -> Result<(u64, RunTrace)> {
    if config.iters == 0 {
        return Err(Error::input("iteration count must be at least 1"));
    }
    if config.samples == 0 {
        return Err(Error::input("sample budget must be at least 1"));
    }
    let mut sched = WeightSchedule::new(config.mu, config.lambda)?;
    let mut theta = vec![0.0f64; spec.parameter_count()];
    let mut psi = psi0.clone();
    let mut prev_energy = expectation_diagonal(prepared.h_diag(), &psi)?;
    sched.record_energy(prev_energy);

    let mut trace = RunTrace::new();
    trace.push(
        TraceRecord::initial(prev_energy, ground_state_probability(&psi, prepared.spectrum())?),
        theta.clone(),
    );

    for s in 1..=config.iters {
        let grad = energy_gradient(spec, &theta, psi0, prepared.h_diag(), config.gradient)?;
        let system = assemble_system_with(&psi, spec.strings(), prepared.h_diag(), opts)?;
        let sol = solve_step(&system, opts.rel_tol)?;
        let w = match config.weight_override {
            Some(fixed) => fixed,
            None => update_weight(&mut sched, s)?,
        };
        let direction = awqv_direction(&grad, &sol.phi, w)?;
        for (t, d) in theta.iter_mut().zip(&direction) {
            *t -= config.eta * d;
        }
        psi = apply_ansatz(spec, &theta, psi0)?;
        let energy = expectation_diagonal(prepared.h_diag(), &psi)?;
        sched.record_energy(energy);
        let rec = TraceRecord {
            step: s,
            energy,
            p_gs: ground_state_probability(&psi, prepared.spectrum())?,
            w,
            delta: prev_energy - energy,
            theta_norm: l2_norm(&theta),
            residual: sol.residual,
            grad_norm: l2_norm(&grad),
            phi_norm: l2_norm(&sol.phi),
        };
        prev_energy = energy;
        trace.push(rec, theta.clone());
    }

    let best = sample_solution(prepared, spec, psi0, &mut trace, config.samples, config.seed)?;
    Ok((best, trace))
}

/// QIV: compressed-evolution updates until the first iteration whose energy
/// exceeds the previous one, then a restart from the best parameters and
/// pure gradient descent for the remaining iterations. The w column of the
/// trace records the phase (0 before the switch, 1 after).
#[allow(clippy::too_many_arguments)]
pub fn qiv_run(
    prepared: &PreparedInstance,
    spec: &AnsatzSpec,
    psi0: &StateVector,
    eta: f64,
    iters: usize,
    samples: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<(u64, RunTrace)> {
    if iters == 0 {
        return Err(Error::input("iteration count must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::input("sample budget must be at least 1"));
    }
    let mut theta = vec![0.0f64; spec.parameter_count()];
    let mut psi = psi0.clone();
    let mut prev_energy = expectation_diagonal(prepared.h_diag(), &psi)?;

    let mut trace = RunTrace::new();
    trace.push(
        TraceRecord::initial(prev_energy, ground_state_probability(&psi, prepared.spectrum())?),
        theta.clone(),
    );

    let mut descending = false;
    for s in 1..=iters {
        let (w, residual, grad_norm, phi_norm) = if !descending {
            let system = assemble_system_with(&psi, spec.strings(), prepared.h_diag(), opts)?;
            let sol = solve_step(&system, opts.rel_tol)?;
            for (t, f) in theta.iter_mut().zip(&sol.phi) {
                *t += 2.0 * eta * f;
            }
            (0.0, sol.residual, 0.0, l2_norm(&sol.phi))
        } else {
            let grad = energy_gradient(spec, &theta, psi0, prepared.h_diag(), GradientMethod::Adjoint)?;
            let gn = l2_norm(&grad);
            for (t, g) in theta.iter_mut().zip(&grad) {
                *t -= eta * g;
            }
            (1.0, 0.0, gn, 0.0)
        };
        psi = apply_ansatz(spec, &theta, psi0)?;
        let energy = expectation_diagonal(prepared.h_diag(), &psi)?;
        let rec = TraceRecord {
            step: s,
            energy,
            p_gs: ground_state_probability(&psi, prepared.spectrum())?,
            w,
            delta: prev_energy - energy,
            theta_norm: l2_norm(&theta),
            residual,
            grad_norm,
            phi_norm,
        };
        let increased = !descending && energy > prev_energy;
        prev_energy = energy;
        trace.push(rec, theta.clone());
        if increased {
            // Switch: discard the failed update and descend from the best
            // parameters seen so far.
            descending = true;
            theta = trace.theta_best.clone();
            psi = apply_ansatz(spec, &theta, psi0)?;
            prev_energy = trace.best_energy;
        }
    }

    let best = sample_solution(prepared, spec, psi0, &mut trace, samples, seed)?;
    Ok((best, trace))
}
