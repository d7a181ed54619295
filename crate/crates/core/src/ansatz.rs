//! Pauli-set ansatz construction, deterministic gate scheduling, circuit
//! application, and energy gradients.
//!
//! An ansatz is an ordered list of Pauli strings, one rotation parameter per
//! string: U(theta) applies exp(-i theta_k/2 P_k) in list order, first string
//! first. The canonical order is: all single-qubit Y rotations (ascending
//! qubit), then two-qubit strings grouped by round-robin round; within a
//! round ascending (i, j); within a pair the fixed factor order ZY, YZ, XY,
//! YX (whichever subset the variant keeps). Fixing the order makes runs
//! reproducible: strings on overlapping pairs do not commute.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{self, PauliFactor, PauliString};
use crate::statevec::{expectation_diagonal, StateVector};

/// Which Pauli pair-set the ansatz keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzVariant {
    P1a,
    P2a,
    P2aZy,
    P2aXy,
    Custom,
}

impl AnsatzVariant {
    pub fn tag(&self) -> &'static str {
        match self {
            AnsatzVariant::P1a => "p1a",
            AnsatzVariant::P2a => "p2a",
            AnsatzVariant::P2aZy => "p2a-zy",
            AnsatzVariant::P2aXy => "p2a-xy",
            AnsatzVariant::Custom => "custom",
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        match tag.to_ascii_lowercase().as_str() {
            "p1a" => Ok(AnsatzVariant::P1a),
            "p2a" => Ok(AnsatzVariant::P2a),
            "p2a-zy" | "p2azy" => Ok(AnsatzVariant::P2aZy),
            "p2a-xy" | "p2axy" => Ok(AnsatzVariant::P2aXy),
            other => Err(Error::input(format!("unknown ansatz variant {other:?}"))),
        }
    }
}

/// An ordered, scheduled Pauli-string circuit.
#[derive(Debug, Clone)]
pub struct AnsatzSpec {
    n: usize,
    strings: Vec<PauliString>,
    variant: AnsatzVariant,
    schedule: Vec<Vec<(usize, usize)>>,
}

impl AnsatzSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    pub fn variant(&self) -> AnsatzVariant {
        self.variant
    }

    /// Rounds of disjoint qubit pairs covering the two-qubit strings.
    pub fn schedule(&self) -> &[Vec<(usize, usize)>] {
        &self.schedule
    }

    pub fn parameter_count(&self) -> usize {
        self.strings.len()
    }

    /// Ordered textual labels, for audit dumps.
    pub fn labels(&self) -> Vec<String> {
        self.strings.iter().map(|p| p.to_string()).collect()
    }

    /// Escape hatch for experimental string sets; no pair schedule.
    pub fn custom(n: usize, strings: Vec<PauliString>) -> Result<Self> {
        if strings.iter().any(|p| p.n() != n) {
            return Err(Error::input("custom ansatz strings must all act on n qubits"));
        }
        Ok(AnsatzSpec { n, strings, variant: AnsatzVariant::Custom, schedule: Vec::new() })
    }
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return;
    }
    loop {
        f(&idx);
        // Advance the rightmost index that can still move.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All distinct non-identity Pauli strings supported on at most `d` qubits:
/// the strings P_{q1}...P_{qD} over ascending index combinations with factors
/// in {I, X, Y, Z}, after absorbing identity factors and dropping the global
/// identity. Ordered by (weight, support, factors).
pub fn build_full_set(n: usize, d: usize) -> Result<Vec<PauliString>> {
    if d == 0 || d > n {
        return Err(Error::input(format!("domain size {d} outside 1..={n}")));
    }
    let non_identity = [PauliFactor::X, PauliFactor::Y, PauliFactor::Z];
    let mut out = Vec::new();
    for w in 1..=d {
        for_each_combination(n, w, |combo| {
            // Odometer over the 3^w factor assignments, leftmost fastest.
            let mut digits = vec![0usize; w];
            loop {
                let factors: Vec<(usize, PauliFactor)> = combo
                    .iter()
                    .zip(&digits)
                    .map(|(&q, &f)| (q, non_identity[f]))
                    .collect();
                out.push(PauliString::from_factors(n, &factors).expect("valid factors"));
                let mut i = 0;
                loop {
                    digits[i] += 1;
                    if digits[i] < 3 {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                    if i == w {
                        return;
                    }
                }
            }
        });
    }
    Ok(out)
}

/// `build_full_set` restricted to strings with an odd number of Y factors;
/// these are the only strings with nonzero imaginary-time coefficients on a
/// computational-basis Hamiltonian.
pub fn build_reduced_set(n: usize, d: usize) -> Result<Vec<PauliString>> {
    Ok(build_full_set(n, d)?.into_iter().filter(|p| p.is_odd_y()).collect())
}

/// Circle-method tournament schedule: every unordered pair of 0..n appears in
/// exactly one round, and pairs within a round are disjoint. n even gives
/// n-1 rounds of n/2 pairs; n odd gives n rounds with one idle qubit each.
pub fn round_robin_schedule(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n < 2 {
        return Vec::new();
    }
    let m = if n.is_multiple_of(2) { n } else { n + 1 }; // m-1 is a dummy slot when n is odd
    let rounds = m - 1;
    let mut out = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let mut round = Vec::with_capacity(m / 2);
        let pin = m - 1;
        let other = r;
        if pin < n && other < n {
            round.push((other.min(pin), other.max(pin)));
        }
        for k in 1..m / 2 {
            let a = (r + k) % (m - 1);
            let b = (r + m - 1 - k) % (m - 1);
            if a < n && b < n {
                round.push((a.min(b), a.max(b)));
            }
        }
        round.sort_unstable();
        out.push(round);
    }
    out
}

/// Builds one of the named ansatz circuits with the canonical gate order.
pub fn build_ansatz(n: usize, variant: AnsatzVariant) -> Result<AnsatzSpec> {
    if n == 0 {
        return Err(Error::input("ansatz needs at least one qubit"));
    }
    let y = |q: usize| PauliString::from_factors(n, &[(q, PauliFactor::Y)]).expect("Y factor");
    let pair = |i: usize, j: usize, fi: PauliFactor, fj: PauliFactor| {
        PauliString::from_factors(n, &[(i, fi), (j, fj)]).expect("pair factors")
    };

    let pair_kinds: &[(PauliFactor, PauliFactor)] = match variant {
        AnsatzVariant::P1a => &[],
        AnsatzVariant::P2a => &[
            (PauliFactor::Z, PauliFactor::Y),
            (PauliFactor::Y, PauliFactor::Z),
            (PauliFactor::X, PauliFactor::Y),
            (PauliFactor::Y, PauliFactor::X),
        ],
        AnsatzVariant::P2aZy => &[(PauliFactor::Z, PauliFactor::Y), (PauliFactor::Y, PauliFactor::Z)],
        AnsatzVariant::P2aXy => &[(PauliFactor::X, PauliFactor::Y), (PauliFactor::Y, PauliFactor::X)],
        AnsatzVariant::Custom => {
            return Err(Error::input("custom variant requires AnsatzSpec::custom"))
        }
    };

    let mut strings: Vec<PauliString> = (0..n).map(y).collect();
    let schedule = if pair_kinds.is_empty() || n < 2 {
        Vec::new()
    } else {
        round_robin_schedule(n)
    };
    for round in &schedule {
        for &(i, j) in round {
            for &(fi, fj) in pair_kinds {
                strings.push(pair(i, j, fi, fj));
            }
        }
    }
    Ok(AnsatzSpec { n, strings, variant, schedule })
}

/// U(theta)|psi0>: rotations applied in spec order; theta = 0 returns psi0
/// bit-exactly.
pub fn apply_ansatz(spec: &AnsatzSpec, theta: &[f64], psi0: &StateVector) -> Result<StateVector> {
    if theta.len() != spec.parameter_count() {
        return Err(Error::input(format!(
            "theta length {} does not match parameter count {}",
            theta.len(),
            spec.parameter_count()
        )));
    }
    if psi0.n() != spec.n {
        return Err(Error::input("initial state qubit count does not match ansatz"));
    }
    let mut amps = psi0.amplitudes().to_vec();
    for (p, &t) in spec.strings.iter().zip(theta) {
        if t != 0.0 {
            pauli::rotate_in_place(p, t, &mut amps);
        }
    }
    StateVector::from_amplitudes_unchecked(spec.n, amps)
}

/// <psi(theta)|H|psi(theta)> for a diagonal Hamiltonian.
pub fn ansatz_energy(spec: &AnsatzSpec, theta: &[f64], psi0: &StateVector, h_diag: &[f64]) -> Result<f64> {
    let psi = apply_ansatz(spec, theta, psi0)?;
    expectation_diagonal(h_diag, &psi)
}

/// Gradient evaluation strategy. Adjoint is exact and costs O(#params)
/// amplitude passes; parameter-shift is what hardware would run and is kept
/// for validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientMethod {
    Adjoint,
    ParameterShift,
}

/// Gradient of the energy with respect to every rotation angle.
pub fn energy_gradient(
    spec: &AnsatzSpec,
    theta: &[f64],
    psi0: &StateVector,
    h_diag: &[f64],
    method: GradientMethod,
) -> Result<Vec<f64>> {
    if theta.len() != spec.parameter_count() {
        return Err(Error::input(format!(
            "theta length {} does not match parameter count {}",
            theta.len(),
            spec.parameter_count()
        )));
    }
    if h_diag.len() != psi0.dim() || psi0.n() != spec.n {
        return Err(Error::input("dimension mismatch in gradient evaluation"));
    }
    match method {
        GradientMethod::Adjoint => adjoint_gradient(spec, theta, psi0, h_diag),
        GradientMethod::ParameterShift => shift_gradient(spec, theta, psi0, h_diag),
    }
}

/// Reverse pass: with k_j the state after the first j gates and
/// lambda_j = U_{j+1}^dag ... U_N^dag H psi, the j-th component is
/// Im <lambda_j | P_j | k_j>.
fn adjoint_gradient(
    spec: &AnsatzSpec,
    theta: &[f64],
    psi0: &StateVector,
    h_diag: &[f64],
) -> Result<Vec<f64>> {
    let mut ket = apply_ansatz(spec, theta, psi0)?.amplitudes().to_vec();
    let mut bra: Vec<Complex64> = ket
        .iter()
        .zip(h_diag)
        .map(|(a, &h)| a * h)
        .collect();
    let mut grad = vec![0.0f64; theta.len()];
    for j in (0..theta.len()).rev() {
        let p = &spec.strings[j];
        // Im <bra | P | ket> without materializing P|ket>.
        let c = p.phase_constant();
        let m = p.x_mask();
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, b) in bra.iter().enumerate() {
            let src = (x as u64) ^ m;
            acc += b.conj() * (c * p.sign_on(src) * ket[src as usize]);
        }
        grad[j] = acc.im;
        pauli::rotate_in_place(p, -theta[j], &mut ket);
        pauli::rotate_in_place(p, -theta[j], &mut bra);
    }
    Ok(grad)
}

/// Component j is [E(theta + (pi/2) e_j) - E(theta - (pi/2) e_j)] / 2, valid
/// for exp(-i theta/2 P) gates. Shifted energies are evaluated in parallel;
/// each lands in its own slot so results are order-independent.
fn shift_gradient(
    spec: &AnsatzSpec,
    theta: &[f64],
    psi0: &StateVector,
    h_diag: &[f64],
) -> Result<Vec<f64>> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    (0..theta.len())
        .into_par_iter()
        .map(|j| {
            let mut plus = theta.to_vec();
            plus[j] += half_pi;
            let mut minus = theta.to_vec();
            minus[j] -= half_pi;
            let ep = ansatz_energy(spec, &plus, psi0, h_diag)?;
            let em = ansatz_energy(spec, &minus, psi0, h_diag)?;
            Ok((ep - em) / 2.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::apply_pauli_rotation;
    use crate::problem;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Independent oracle: literal enumeration over ascending D-combinations
    /// with factors in {I,X,Y,Z}^D, identity dropped, deduplicated.
    fn full_set_oracle(n: usize, d: usize) -> BTreeSet<PauliString> {
        let factors = [PauliFactor::I, PauliFactor::X, PauliFactor::Y, PauliFactor::Z];
        let mut combos: Vec<Vec<usize>> = Vec::new();
        fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == d {
                out.push(cur.clone());
                return;
            }
            for q in start..n {
                cur.push(q);
                rec(q + 1, n, d, cur, out);
                cur.pop();
            }
        }
        rec(0, n, d, &mut Vec::new(), &mut combos);
        let mut set = BTreeSet::new();
        for combo in &combos {
            for code in 0..4usize.pow(d as u32) {
                let mut c = code;
                let assignment: Vec<(usize, PauliFactor)> = combo
                    .iter()
                    .map(|&q| {
                        let f = factors[c % 4];
                        c /= 4;
                        (q, f)
                    })
                    .collect();
                let p = PauliString::from_factors(n, &assignment).unwrap();
                if !p.is_identity() {
                    set.insert(p);
                }
            }
        }
        set
    }

    #[test]
    fn full_set_small_sizes() {
        assert_eq!(build_full_set(2, 1).unwrap().len(), 6);
        assert_eq!(build_full_set(2, 2).unwrap().len(), 15);
        // Frozen from the enumeration oracle below: 9 singles + 27 pair strings.
        assert_eq!(build_full_set(3, 2).unwrap().len(), 36);
    }

    #[test]
    fn full_set_matches_enumeration_oracle() {
        for (n, d) in [(2, 1), (2, 2), (3, 2), (4, 2), (4, 3)] {
            let built: BTreeSet<PauliString> = build_full_set(n, d).unwrap().into_iter().collect();
            let oracle = full_set_oracle(n, d);
            assert_eq!(built, oracle, "mismatch at n={n} d={d}");
        }
    }

    #[test]
    fn reduced_set_rules() {
        for n in 1..=6 {
            let singles = build_reduced_set(n, 1).unwrap();
            assert_eq!(singles.len(), n);
            for (q, p) in singles.iter().enumerate() {
                assert_eq!(p.to_string(), format!("Y{}", q + 1));
            }
        }
        let set = build_reduced_set(3, 2).unwrap();
        assert_eq!(set.len(), 15); // 3 singles + 4 strings on each of 3 pairs
        let yy = PauliString::from_factors(3, &[(0, PauliFactor::Y), (1, PauliFactor::Y)]).unwrap();
        assert!(!set.contains(&yy), "even-Y strings must be filtered");
        assert!(set.iter().all(|p| p.is_odd_y()));
    }

    #[test]
    fn ansatz_parameter_counts() {
        assert_eq!(build_ansatz(16, AnsatzVariant::P2a).unwrap().parameter_count(), 496);
        assert_eq!(build_ansatz(16, AnsatzVariant::P2aZy).unwrap().parameter_count(), 256);
        assert_eq!(build_ansatz(16, AnsatzVariant::P2aXy).unwrap().parameter_count(), 256);
        let p1a = build_ansatz(5, AnsatzVariant::P1a).unwrap();
        assert_eq!(p1a.parameter_count(), 5);
        assert!(p1a.schedule().is_empty());
    }

    proptest! {
        #[test]
        fn parameter_count_formulas(n in 2usize..9) {
            let pairs = n * (n - 1) / 2;
            prop_assert_eq!(build_ansatz(n, AnsatzVariant::P1a).unwrap().parameter_count(), n);
            prop_assert_eq!(build_ansatz(n, AnsatzVariant::P2a).unwrap().parameter_count(), n + 4 * pairs);
            prop_assert_eq!(build_ansatz(n, AnsatzVariant::P2aZy).unwrap().parameter_count(), n + 2 * pairs);
            prop_assert_eq!(build_ansatz(n, AnsatzVariant::P2aXy).unwrap().parameter_count(), n + 2 * pairs);
        }

        #[test]
        fn round_robin_partitions_pairs(n in 2usize..13) {
            let rounds = round_robin_schedule(n);
            let mut seen = BTreeSet::new();
            for round in &rounds {
                let mut touched = BTreeSet::new();
                for &(a, b) in round {
                    prop_assert!(a < b && b < n);
                    prop_assert!(touched.insert(a), "qubit reused within a round");
                    prop_assert!(touched.insert(b), "qubit reused within a round");
                    prop_assert!(seen.insert((a, b)), "pair repeated across rounds");
                }
            }
            prop_assert_eq!(seen.len(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn round_robin_shapes() {
        let r4 = round_robin_schedule(4);
        assert_eq!(r4.len(), 3);
        assert!(r4.iter().all(|r| r.len() == 2));

        let r16 = round_robin_schedule(16);
        assert_eq!(r16.len(), 15);
        assert!(r16.iter().all(|r| r.len() == 8));

        let r5 = round_robin_schedule(5);
        assert_eq!(r5.len(), 5);
        assert!(r5.iter().all(|r| r.len() == 2));
    }

    #[test]
    fn p2a_equals_reduced_set_as_set() {
        for n in 2..=6 {
            let spec = build_ansatz(n, AnsatzVariant::P2a).unwrap();
            let from_spec: BTreeSet<PauliString> = spec.strings().iter().copied().collect();
            let reduced: BTreeSet<PauliString> = build_reduced_set(n, 2).unwrap().into_iter().collect();
            assert_eq!(from_spec, reduced);
            assert_eq!(from_spec.len(), spec.parameter_count(), "strings must be distinct");
        }
    }

    #[test]
    fn canonical_order_starts_with_singles() {
        let spec = build_ansatz(4, AnsatzVariant::P2aZy).unwrap();
        let labels = spec.labels();
        assert_eq!(&labels[..4], &["Y1", "Y2", "Y3", "Y4"]);
        // Each pair contributes Z_i Y_j then Y_i Z_j.
        let first_pair = spec.schedule()[0][0];
        assert_eq!(labels[4], format!("Z{}Y{}", first_pair.0 + 1, first_pair.1 + 1));
        assert_eq!(labels[5], format!("Y{}Z{}", first_pair.0 + 1, first_pair.1 + 1));
    }

    #[test]
    fn apply_ansatz_identity_and_determinism() {
        let spec = build_ansatz(4, AnsatzVariant::P2aZy).unwrap();
        let psi0 = StateVector::plus_state(4).unwrap();
        let zero = vec![0.0; spec.parameter_count()];
        let out = apply_ansatz(&spec, &zero, &psi0).unwrap();
        assert_eq!(out.amplitudes(), psi0.amplitudes());

        let theta: Vec<f64> = (0..spec.parameter_count()).map(|k| 0.01 * k as f64).collect();
        let a = apply_ansatz(&spec, &theta, &psi0).unwrap();
        let b = apply_ansatz(&spec, &theta, &psi0).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn single_string_spec_matches_direct_rotation() {
        let p = PauliString::from_factors(3, &[(1, PauliFactor::Y)]).unwrap();
        let spec = AnsatzSpec::custom(3, vec![p]).unwrap();
        let psi0 = StateVector::random(3, 4).unwrap();
        let theta = 0.9;
        let via_spec = apply_ansatz(&spec, &[theta], &psi0).unwrap();
        let direct = apply_pauli_rotation(&p, theta, &psi0).unwrap();
        assert_eq!(via_spec.amplitudes(), direct.amplitudes());
    }

    #[test]
    fn real_initial_states_stay_real() {
        for variant in [AnsatzVariant::P1a, AnsatzVariant::P2a, AnsatzVariant::P2aZy, AnsatzVariant::P2aXy] {
            let spec = build_ansatz(5, variant).unwrap();
            let psi0 = StateVector::plus_state(5).unwrap();
            let theta: Vec<f64> = (0..spec.parameter_count())
                .map(|k| (k as f64 * 0.37).sin())
                .collect();
            let out = apply_ansatz(&spec, &theta, &psi0).unwrap();
            assert!(out.is_real(), "variant {variant:?} left the real subspace");
            assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
        }
    }

    /// Central finite differences; the independent oracle for both gradient
    /// implementations.
    fn fd_gradient(spec: &AnsatzSpec, theta: &[f64], psi0: &StateVector, h: &[f64], eps: f64) -> Vec<f64> {
        (0..theta.len())
            .map(|j| {
                let mut plus = theta.to_vec();
                plus[j] += eps;
                let mut minus = theta.to_vec();
                minus[j] -= eps;
                let ep = ansatz_energy(spec, &plus, psi0, h).unwrap();
                let em = ansatz_energy(spec, &minus, psi0, h).unwrap();
                (ep - em) / (2.0 * eps)
            })
            .collect()
    }

    #[test]
    fn gradient_methods_agree() {
        let g = problem::generate_regular(6, 3, 17).unwrap();
        let h = problem::hamiltonian_diagonal(&g).unwrap();
        let spec = build_ansatz(6, AnsatzVariant::P2aZy).unwrap();
        let psi0 = StateVector::plus_state(6).unwrap();
        let theta: Vec<f64> = (0..spec.parameter_count())
            .map(|k| ((k * 37 + 11) as f64 * 0.0173).sin() * 0.8)
            .collect();

        let adj = energy_gradient(&spec, &theta, &psi0, &h, GradientMethod::Adjoint).unwrap();
        let shift = energy_gradient(&spec, &theta, &psi0, &h, GradientMethod::ParameterShift).unwrap();
        let fd = fd_gradient(&spec, &theta, &psi0, &h, 1e-5);
        for j in 0..theta.len() {
            assert_abs_diff_eq!(adj[j], shift[j], epsilon = 1e-8);
            assert_abs_diff_eq!(adj[j], fd[j], epsilon = 1e-6);
        }
    }

    #[test]
    fn zero_hamiltonian_gives_zero_gradient() {
        let spec = build_ansatz(4, AnsatzVariant::P2aXy).unwrap();
        let psi0 = StateVector::plus_state(4).unwrap();
        let theta = vec![0.3; spec.parameter_count()];
        let h = vec![0.0; 16];
        for method in [GradientMethod::Adjoint, GradientMethod::ParameterShift] {
            let g = energy_gradient(&spec, &theta, &psi0, &h, method).unwrap();
            assert!(g.iter().all(|&v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn variant_tags_round_trip() {
        for v in [AnsatzVariant::P1a, AnsatzVariant::P2a, AnsatzVariant::P2aZy, AnsatzVariant::P2aXy] {
            assert_eq!(AnsatzVariant::parse(v.tag()).unwrap(), v);
        }
        assert!(AnsatzVariant::parse("p3a").is_err());
    }
}
