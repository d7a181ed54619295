//! Evaluation metrics: ground-state probability, approximation ratio, the
//! closed-form expected best-of-M ratio, and the failure predicates used for
//! the sampling-budget comparison.

use crate::error::{Error, Result};
use crate::problem::Spectrum;
use crate::statevec::StateVector;

/// Probability mass of a state per distinct cost level, with tail sums.
#[derive(Debug, Clone)]
pub struct LevelDistribution {
    costs: Vec<f64>,
    mass: Vec<f64>,
    /// tail_geq[k] = P(cost >= C_k); tail_gt[k] = P(cost > C_k).
    tail_geq: Vec<f64>,
    tail_gt: Vec<f64>,
}

impl LevelDistribution {
    pub fn new(psi: &StateVector, spectrum: &Spectrum) -> Result<Self> {
        if psi.dim() != spectrum.level_index().len() {
            return Err(Error::input("state dimension does not match spectrum"));
        }
        let k = spectrum.k();
        let mut mass = vec![0.0f64; k];
        for (x, a) in psi.amplitudes().iter().enumerate() {
            mass[spectrum.level(x as u64) as usize] += a.norm_sqr();
        }
        // Tails accumulate from the worst level down so that
        // tail_geq[k] = mass[k] + tail_gt[k] holds exactly.
        let mut tail_geq = vec![0.0f64; k];
        let mut tail_gt = vec![0.0f64; k];
        let mut acc = 0.0;
        for level in (0..k).rev() {
            tail_gt[level] = acc;
            acc += mass[level];
            tail_geq[level] = acc;
        }
        Ok(LevelDistribution {
            costs: spectrum.distinct_costs().to_vec(),
            mass,
            tail_geq,
            tail_gt,
        })
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn tail_geq(&self) -> &[f64] {
        &self.tail_geq
    }

    pub fn tail_gt(&self) -> &[f64] {
        &self.tail_gt
    }
}

/// Total probability mass on the optimal bitstring set.
pub fn ground_state_probability(psi: &StateVector, spectrum: &Spectrum) -> Result<f64> {
    if psi.dim() != spectrum.level_index().len() {
        return Err(Error::input("state dimension does not match spectrum"));
    }
    Ok(spectrum
        .optimal_set()
        .iter()
        .map(|&x| psi.amplitudes()[x as usize].norm_sqr())
        .sum())
}

/// alpha = (cost - C_K) / (C_1 - C_K), in [0, 1]; 1 is optimal. A spectrum
/// with a single level (constant cost) makes every solution optimal, so
/// alpha is defined as 1 there.
pub fn approximation_ratio(cost: f64, spectrum: &Spectrum) -> Result<f64> {
    let best = spectrum.optimum();
    let worst = spectrum.worst();
    if cost < best || cost > worst {
        return Err(Error::input(format!(
            "cost {cost} outside spectrum range [{best}, {worst}]"
        )));
    }
    if spectrum.k() == 1 {
        return Ok(1.0);
    }
    Ok((cost - worst) / (best - worst))
}

/// Closed-form expectation of the best approximation ratio among M
/// independent samples of the state:
///
/// ```text
/// E_M[alpha] = (sum_k C_k [P_geq(C_k)^M - P_gt(C_k)^M] - C_K) / (C_1 - C_K)
/// ```
pub fn expected_best_alpha(psi: &StateVector, spectrum: &Spectrum, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::input("sample budget must be at least 1"));
    }
    let dist = LevelDistribution::new(psi, spectrum)?;
    if spectrum.k() == 1 {
        return Ok(1.0);
    }
    let mi = m as i32;
    let expected_min_cost: f64 = dist
        .costs
        .iter()
        .enumerate()
        .map(|(k, c)| c * (dist.tail_geq[k].powi(mi) - dist.tail_gt[k].powi(mi)))
        .sum();
    let best = spectrum.optimum();
    let worst = spectrum.worst();
    Ok((expected_min_cost - worst) / (best - worst))
}

/// Failure for a sampled state: the budget M is below the expected number of
/// samples needed to see an optimum, i.e. M < 1 / p_gs. A vanishing p_gs
/// fails for every finite M.
pub fn failure_predicate_sampling(p_gs: f64, m: usize) -> bool {
    if p_gs <= 0.0 {
        return true;
    }
    (m as f64) < 1.0 / p_gs
}
