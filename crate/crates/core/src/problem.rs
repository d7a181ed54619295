//! MaxCut instances: representation, random generation, cost evaluation,
//! diagonal Hamiltonian construction, and a brute-force spectrum oracle.
//!
//! Conventions shared by the whole library: vertex 1 maps to the least
//! significant bit of a bitstring index, and edges are stored 0-based with
//! u < v. The cost is the minimization form C(x) = -sum w_ij (x_i - x_j)^2,
//! so lower is better and the best cut has the most negative cost.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense-Hamiltonian limit; configurable per call via the `_with_limit`
/// variants.
pub const DEFAULT_DENSE_LIMIT: usize = 24;

/// How an instance was produced; "er" implies edge weights drawn from the
/// standard normal distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphModel {
    Regular,
    Er,
    Manual,
}

/// A weighted edge, 0-based endpoints with u < v.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// A MaxCut instance: vertex count, edge list, and generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutInstance {
    n: usize,
    edges: Vec<Edge>,
    seed: u64,
    model: GraphModel,
}

impl MaxCutInstance {
    /// Build a hand-made instance from 0-based (u, v, w) triples.
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let edges: Vec<Edge> = edges.iter().map(|&(u, v, w)| Edge { u, v, w }).collect();
        Self::with_metadata(n, edges, 0, GraphModel::Manual)
    }

    fn with_metadata(n: usize, mut edges: Vec<Edge>, seed: u64, model: GraphModel) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("instance needs at least one vertex"));
        }
        for e in &mut edges {
            if e.u == e.v {
                return Err(Error::input(format!("self-loop at vertex {}", e.u + 1)));
            }
            if e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
            if e.v >= n {
                return Err(Error::input(format!(
                    "edge ({}, {}) out of range for n={n}",
                    e.u + 1,
                    e.v + 1
                )));
            }
        }
        edges.sort_by_key(|e| (e.u, e.v));
        if edges.windows(2).any(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::input("duplicate edge"));
        }
        Ok(MaxCutInstance { n, edges, seed, model })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn model(&self) -> GraphModel {
        self.model
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }
}

/// C(x) = -sum over edges of w_ij (x_i - x_j)^2, evaluated on a bitstring
/// packed into `x` (vertex 1 = bit 0).
pub fn maxcut_cost(instance: &MaxCutInstance, x: u64) -> f64 {
    let mut cost = 0.0;
    for e in &instance.edges {
        let bu = (x >> e.u) & 1;
        let bv = (x >> e.v) & 1;
        if bu != bv {
            cost -= e.w;
        }
    }
    cost
}

/// Checked variant for explicit bitstring slices (one entry per vertex,
/// index 0 = vertex 1).
pub fn maxcut_cost_bits(instance: &MaxCutInstance, bits: &[u8]) -> Result<f64> {
    if bits.len() != instance.n {
        return Err(Error::input(format!(
            "bitstring length {} does not match n={}",
            bits.len(),
            instance.n
        )));
    }
    let mut x = 0u64;
    for (i, &b) in bits.iter().enumerate() {
        if b > 1 {
            return Err(Error::input("bitstring entries must be 0 or 1"));
        }
        x |= (b as u64) << i;
    }
    Ok(maxcut_cost(instance, x))
}

/// Diagonal of the cost Hamiltonian: entry x equals `maxcut_cost(instance, x)`.
pub fn hamiltonian_diagonal(instance: &MaxCutInstance) -> Result<Vec<f64>> {
    hamiltonian_diagonal_with_limit(instance, DEFAULT_DENSE_LIMIT)
}

pub fn hamiltonian_diagonal_with_limit(instance: &MaxCutInstance, limit: usize) -> Result<Vec<f64>> {
    if instance.n > limit {
        return Err(Error::capacity(format!(
            "n={} exceeds dense Hamiltonian limit {limit}",
            instance.n
        )));
    }
    let dim = 1usize << instance.n;
    let mut h = vec![0.0f64; dim];
    // Accumulate edge by edge in the fixed sorted edge order so that the sum
    // for x and its complement is bit-identical.
    for e in &instance.edges {
        let mu = 1u64 << e.u;
        let mv = 1u64 << e.v;
        for (x, hx) in h.iter_mut().enumerate() {
            let x = x as u64;
            if ((x & mu) == 0) != ((x & mv) == 0) {
                *hx -= e.w;
            }
        }
    }
    Ok(h)
}

/// Exhaustive spectrum of an instance: sorted distinct costs, the level index
/// of every bitstring, and the full optimal set.
#[derive(Debug, Clone)]
pub struct Spectrum {
    distinct_costs: Vec<f64>,
    level_of: Vec<u32>,
    optimal_set: Vec<u64>,
}

impl Spectrum {
    /// C_1 < C_2 < ... < C_K.
    pub fn distinct_costs(&self) -> &[f64] {
        &self.distinct_costs
    }

    pub fn k(&self) -> usize {
        self.distinct_costs.len()
    }

    /// Best (most negative) cost.
    pub fn optimum(&self) -> f64 {
        self.distinct_costs[0]
    }

    /// Worst cost.
    pub fn worst(&self) -> f64 {
        *self.distinct_costs.last().unwrap()
    }

    /// 0-based level index of a bitstring (0 = optimal level).
    pub fn level(&self, x: u64) -> u32 {
        self.level_of[x as usize]
    }

    pub fn level_index(&self) -> &[u32] {
        &self.level_of
    }

    /// All bitstrings achieving the optimum.
    pub fn optimal_set(&self) -> &[u64] {
        &self.optimal_set
    }

    /// 0-based level of a cost value; errors if the cost is not in the
    /// spectrum.
    pub fn level_of_cost(&self, cost: f64) -> Result<usize> {
        self.distinct_costs
            .binary_search_by(|c| c.partial_cmp(&cost).unwrap())
            .map_err(|_| Error::input(format!("cost {cost} not in spectrum")))
    }
}

/// Enumerates all 2^n bitstrings. Costs are grouped by exact float equality;
/// complement pairs always land in the same group because the per-edge sums
/// are term-for-term identical.
pub fn brute_force_spectrum(instance: &MaxCutInstance) -> Result<Spectrum> {
    if instance.n > DEFAULT_DENSE_LIMIT {
        return Err(Error::capacity(format!(
            "n={} exceeds exhaustive enumeration limit {DEFAULT_DENSE_LIMIT}",
            instance.n
        )));
    }
    let h = hamiltonian_diagonal(instance)?;
    let mut distinct: Vec<f64> = h.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    let level_of: Vec<u32> = h
        .iter()
        .map(|c| {
            distinct
                .binary_search_by(|d| d.partial_cmp(c).unwrap())
                .expect("own cost present") as u32
        })
        .collect();
    let best = distinct[0];
    let optimal_set: Vec<u64> = h
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == best)
        .map(|(x, _)| x as u64)
        .collect();
    Ok(Spectrum { distinct_costs: distinct, level_of, optimal_set })
}

/// Uniform-model random d-regular simple graph via the pairing (configuration)
/// model with rejection of self-loops and multi-edges. Same seed, same graph.
pub fn generate_regular(n: usize, d: usize, seed: u64) -> Result<MaxCutInstance> {
    if d >= n {
        return Err(Error::input(format!("degree {d} must be below vertex count {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::input(format!("n*d = {} must be even", n * d)));
    }
    if d == 0 {
        return MaxCutInstance::with_metadata(n, Vec::new(), seed, GraphModel::Regular);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    const MAX_ATTEMPTS: usize = 100_000;
    'attempt: for _ in 0..MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::with_capacity(n * d / 2);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue 'attempt;
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                continue 'attempt;
            }
            edges.push(Edge { u: key.0, v: key.1, w: 1.0 });
        }
        return MaxCutInstance::with_metadata(n, edges, seed, GraphModel::Regular);
    }
    Err(Error::input(format!(
        "failed to sample a simple {d}-regular graph on {n} vertices"
    )))
}

/// G(n, p) with each present edge weighted by a standard normal draw.
/// Deterministic under the seed.
pub fn generate_er_weighted(n: usize, p: f64, seed: u64) -> Result<MaxCutInstance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("edge probability {p} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::input("instance needs at least one vertex"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = rand_distr::StandardNormal;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                let w: f64 = normal.sample(&mut rng);
                edges.push(Edge { u, v, w });
            }
        }
    }
    MaxCutInstance::with_metadata(n, edges, seed, GraphModel::Er)
}

/// An instance bundled with its dense Hamiltonian diagonal and brute-forced
/// spectrum. Immutable once built; runs of any method share it freely across
/// threads.
#[derive(Debug, Clone)]
pub struct PreparedInstance {
    instance: MaxCutInstance,
    h_diag: Vec<f64>,
    spectrum: Spectrum,
}

impl PreparedInstance {
    pub fn new(instance: MaxCutInstance) -> Result<Self> {
        let h_diag = hamiltonian_diagonal(&instance)?;
        let spectrum = brute_force_spectrum(&instance)?;
        Ok(PreparedInstance { instance, h_diag, spectrum })
    }

    pub fn instance(&self) -> &MaxCutInstance {
        &self.instance
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn h_diag(&self) -> &[f64] {
        &self.h_diag
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }
}

/// On-disk schema: {"n": int, "edges": [[i, j, w], ...], "seed": int,
/// "model": "regular"|"er"|"manual"} with 1-based vertex indices.
#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    seed: u64,
    model: GraphModel,
}

impl MaxCutInstance {
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|e| (e.u + 1, e.v + 1, e.w)).collect(),
            seed: self.seed,
            model: self.model,
        };
        serde_json::to_string(&file).expect("graph serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::input(format!("bad graph file: {e}")))?;
        let edges: Result<Vec<Edge>> = file
            .edges
            .iter()
            .map(|&(i, j, w)| {
                if i == 0 || j == 0 {
                    Err(Error::input("graph files use 1-based vertex indices"))
                } else {
                    Ok(Edge { u: i - 1, v: j - 1, w })
                }
            })
            .collect();
        MaxCutInstance::with_metadata(file.n, edges?, file.seed, file.model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn triangle() -> MaxCutInstance {
        MaxCutInstance::new(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_costs() {
        let t = triangle();
        assert_eq!(maxcut_cost(&t, 0b000), 0.0);
        assert_eq!(maxcut_cost(&t, 0b001), -2.0);
        // Oracle: enumerate all 8 assignments.
        let by_hand = [0.0, -2.0, -2.0, -2.0, -2.0, -2.0, -2.0, 0.0];
        for x in 0..8u64 {
            assert_eq!(maxcut_cost(&t, x), by_hand[x as usize]);
        }
    }

    #[test]
    fn weighted_single_edge() {
        let g = MaxCutInstance::new(2, &[(0, 1, 2.5)]).unwrap();
        assert_eq!(maxcut_cost_bits(&g, &[0, 1]).unwrap(), -2.5);
        assert_eq!(maxcut_cost_bits(&g, &[0, 0]).unwrap(), 0.0);
        assert!(maxcut_cost_bits(&g, &[0, 1, 0]).is_err());
    }

    #[test]
    fn hamiltonian_single_edge() {
        let g = MaxCutInstance::new(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(hamiltonian_diagonal(&g).unwrap(), vec![0.0, -1.0, -1.0, 0.0]);
    }

    #[test]
    fn hamiltonian_empty_graph() {
        let g = MaxCutInstance::new(4, &[]).unwrap();
        assert_eq!(hamiltonian_diagonal(&g).unwrap(), vec![0.0; 16]);
    }

    #[test]
    fn hamiltonian_matches_cost_exhaustively() {
        for seed in 0..4 {
            let g = generate_regular(10, 3, seed).unwrap();
            let h = hamiltonian_diagonal(&g).unwrap();
            for x in 0..(1u64 << 10) {
                assert_eq!(h[x as usize], maxcut_cost(&g, x));
            }
        }
    }

    #[test]
    fn spectrum_triangle() {
        let s = brute_force_spectrum(&triangle()).unwrap();
        assert_eq!(s.distinct_costs(), &[-2.0, 0.0]);
        assert_eq!(s.k(), 2);
        assert_eq!(s.optimal_set().len(), 6);
    }

    #[test]
    fn spectrum_empty_graph() {
        let g = MaxCutInstance::new(3, &[]).unwrap();
        let s = brute_force_spectrum(&g).unwrap();
        assert_eq!(s.k(), 1);
        assert_eq!(s.optimum(), 0.0);
        assert_eq!(s.optimal_set().len(), 8);
    }

    #[test]
    fn spectrum_k4() {
        let g = generate_regular(4, 3, 0).unwrap(); // K4 is the only 3-regular graph on 4 vertices
        assert_eq!(g.edges().len(), 6);
        let s = brute_force_spectrum(&g).unwrap();
        assert_eq!(s.optimum(), -4.0);
    }

    #[test]
    fn regular_generator_counts_and_determinism() {
        let g = generate_regular(16, 3, 42).unwrap();
        assert_eq!(g.edges().len(), 24);
        for v in 0..16 {
            assert_eq!(g.degree(v), 3);
        }
        let g2 = generate_regular(16, 3, 42).unwrap();
        assert_eq!(g, g2);
        let g3 = generate_regular(16, 3, 43).unwrap();
        assert_ne!(g, g3);
    }

    #[test]
    fn regular_generator_rejects_infeasible() {
        assert!(generate_regular(5, 3, 0).is_err()); // odd n*d
        assert!(generate_regular(4, 4, 0).is_err()); // d >= n
    }

    #[test]
    fn er_generator_edges() {
        let empty = generate_er_weighted(8, 0.0, 1).unwrap();
        assert!(empty.edges().is_empty());
        let full = generate_er_weighted(8, 1.0, 1).unwrap();
        assert_eq!(full.edges().len(), 28);
        let a = generate_er_weighted(16, 0.5, 9).unwrap();
        let b = generate_er_weighted(16, 0.5, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.edges().len() <= 120);
    }

    #[test]
    fn er_weights_are_not_unit() {
        let g = generate_er_weighted(16, 0.5, 3).unwrap();
        assert!(g.edges().iter().any(|e| (e.w - 1.0).abs() > 1e-9));
    }

    #[test]
    fn graph_json_round_trip() {
        let g = generate_er_weighted(6, 0.7, 5).unwrap();
        let text = g.to_json();
        let back = MaxCutInstance::from_json(&text).unwrap();
        assert_eq!(g, back);
        // 1-based indices on disk
        assert!(text.contains("\"model\":\"er\""));
        assert!(MaxCutInstance::from_json("{\"n\":2,\"edges\":[[0,1,1.0]],\"seed\":0,\"model\":\"manual\"}").is_err());
    }

    #[test]
    fn duplicate_and_loop_edges_rejected() {
        assert!(MaxCutInstance::new(3, &[(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(MaxCutInstance::new(3, &[(1, 1, 1.0)]).is_err());
        assert!(MaxCutInstance::new(2, &[(0, 2, 1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn cost_symmetric_under_complement(seed in 0u64..30) {
            let g = generate_er_weighted(8, 0.4, seed).unwrap();
            let mask = (1u64 << 8) - 1;
            for x in 0..(1u64 << 8) {
                prop_assert_eq!(maxcut_cost(&g, x), maxcut_cost(&g, x ^ mask));
            }
        }

        #[test]
        fn regular_degrees_exact(seed in 0u64..20, d in 2usize..4) {
            let g = generate_regular(8, d, seed).unwrap();
            for v in 0..8 {
                prop_assert_eq!(g.degree(v), d);
            }
        }

        #[test]
        fn optimal_set_complement_closed(seed in 0u64..20) {
            let g = generate_er_weighted(7, 0.5, seed).unwrap();
            let s = brute_force_spectrum(&g).unwrap();
            prop_assert!(!s.optimal_set().is_empty());
            let mask = (1u64 << 7) - 1;
            for &x in s.optimal_set() {
                prop_assert!(s.optimal_set().contains(&(x ^ mask)));
            }
        }
    }
}
