//! Dense statevector container: initial states, diagonal expectations,
//! inner products, seeded sampling.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense cap: 2^24 amplitudes (256 MiB) matches the largest instances this
/// library targets.
pub const DENSE_QUBIT_LIMIT: usize = 24;

/// A normalized n-qubit state, 2^n complex amplitudes. Qubit 1 is the least
/// significant bit of the amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_capacity(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::input("state needs at least one qubit"));
    }
    if n > DENSE_QUBIT_LIMIT {
        return Err(Error::capacity(format!(
            "n={n} exceeds dense statevector limit {DENSE_QUBIT_LIMIT}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// |+>^{(x)n}: uniform amplitudes 2^{-n/2}.
    pub fn plus_state(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let dim = 1usize << n;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(StateVector { n, amps: vec![a; dim] })
    }

    /// |0> on qubit 1, |+> on the rest: amplitude 2^{-(n-1)/2} where the
    /// least significant bit is 0, zero elsewhere.
    pub fn zero_plus_state(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let dim = 1usize << n;
        let a = Complex64::new(((dim / 2).max(1) as f64).sqrt().recip(), 0.0);
        let amps = (0..dim)
            .map(|x| if x & 1 == 0 { a } else { Complex64::new(0.0, 0.0) })
            .collect();
        Ok(StateVector { n, amps })
    }

    /// Computational basis state |x>.
    pub fn basis_state(n: usize, x: u64) -> Result<Self> {
        check_capacity(n)?;
        let dim = 1usize << n;
        if x >= dim as u64 {
            return Err(Error::input(format!("basis index {x} out of range for n={n}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[x as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Normalized state with seeded Gaussian amplitudes. Handy for tests and
    /// oracle runs; deterministic under the seed.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        use rand_distr::Distribution;
        check_capacity(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = rand_distr::StandardNormal;
        let dim = 1usize << n;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Ok(StateVector { n, amps })
    }

    /// Wrap amplitudes, enforcing the unit-norm invariant.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_capacity(n)?;
        if amps.len() != 1usize << n {
            return Err(Error::input(format!(
                "expected {} amplitudes, got {}",
                1usize << n,
                amps.len()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::input(format!("state norm^2 = {norm_sq}, not 1")));
        }
        Ok(StateVector { n, amps })
    }

    /// Internal constructor for operations that preserve the norm by
    /// construction (Pauli actions, rotations).
    pub(crate) fn from_amplitudes_unchecked(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        debug_assert_eq!(amps.len(), 1usize << n);
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when every imaginary part is exactly zero. Real product states
    /// stay exactly real under odd-Y rotations, so this is a reliable fast-path
    /// switch rather than a tolerance check.
    pub fn is_real(&self) -> bool {
        self.amps.iter().all(|a| a.im == 0.0)
    }

    /// Debug dump: amplitudes as a JSON array of [re, im] pairs. Traces never
    /// serialize raw amplitudes; this is for ad-hoc inspection only.
    pub fn to_debug_json(&self) -> String {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        serde_json::to_string(&pairs).expect("amplitude dump")
    }
}

/// <psi|H|psi> for a diagonal Hamiltonian given as its diagonal.
pub fn expectation_diagonal(h: &[f64], psi: &StateVector) -> Result<f64> {
    if h.len() != psi.dim() {
        return Err(Error::input(format!(
            "diagonal length {} does not match state dimension {}",
            h.len(),
            psi.dim()
        )));
    }
    Ok(h.iter()
        .zip(psi.amplitudes())
        .map(|(hx, a)| hx * a.norm_sqr())
        .sum())
}

/// <a|b> with conjugation on `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.n() != b.n() {
        return Err(Error::input("inner product of states with different qubit counts"));
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Draws `m` bitstrings i.i.d. from |a_x|^2 by inverse-CDF over the cumulative
/// probability array. Deterministic under the seed.
pub fn sample(psi: &StateVector, m: usize, seed: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::input("sample count must be at least 1"));
    }
    let mut cum = Vec::with_capacity(psi.dim());
    let mut acc = 0.0f64;
    for a in psi.amplitudes() {
        acc += a.norm_sqr();
        cum.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        let u: f64 = rng.random::<f64>() * total;
        // First index with cum[i] > u.
        let idx = match cum.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        out.push(idx.min(psi.dim() - 1) as u64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn plus_state_amplitudes() {
        let s = StateVector::plus_state(1).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitudes()[0].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, r, epsilon = 1e-15);

        let s3 = StateVector::plus_state(3).unwrap();
        for a in s3.amplitudes() {
            assert_abs_diff_eq!(a.re, 1.0 / 8f64.sqrt(), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(s3.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_plus_state_layout() {
        let s = StateVector::zero_plus_state(2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let amps = s.amplitudes();
        assert_abs_diff_eq!(amps[0].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[1].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[2].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[3].norm(), 0.0, epsilon = 1e-15);

        let s1 = StateVector::zero_plus_state(1).unwrap();
        assert_abs_diff_eq!(s1.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s1.amplitudes()[1].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_plus_overlap_with_plus() {
        for n in 1..=6 {
            let a = StateVector::zero_plus_state(n).unwrap();
            let b = StateVector::plus_state(n).unwrap();
            let ov = inner(&a, &b).unwrap();
            assert_abs_diff_eq!(ov.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
            assert_abs_diff_eq!(ov.im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn expectation_diagonal_cases() {
        // Triangle Hamiltonian over |+>^3: (6*(-2) + 2*0)/8 = -1.5
        let h = vec![0.0, -2.0, -2.0, -2.0, -2.0, -2.0, -2.0, 0.0];
        let psi = StateVector::plus_state(3).unwrap();
        assert_abs_diff_eq!(expectation_diagonal(&h, &psi).unwrap(), -1.5, epsilon = 1e-12);

        let basis = StateVector::basis_state(3, 5).unwrap();
        assert_abs_diff_eq!(expectation_diagonal(&h, &basis).unwrap(), h[5], epsilon = 1e-15);

        let zeros = vec![0.0; 8];
        assert_abs_diff_eq!(expectation_diagonal(&zeros, &psi).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn inner_product_conventions() {
        let psi = StateVector::random(3, 42).unwrap();
        let ip = inner(&psi, &psi).unwrap();
        assert_abs_diff_eq!(ip.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ip.im, 0.0, epsilon = 1e-12);

        let zero = StateVector::basis_state(1, 0).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();
        assert_eq!(inner(&zero, &one).unwrap(), Complex64::new(0.0, 0.0));

        // inner(|0>, i|0>) = i: conjugation is on the left argument.
        let i_zero = StateVector::from_amplitudes(
            1,
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        let ip = inner(&zero, &i_zero).unwrap();
        assert_abs_diff_eq!(ip.im, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ip.re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sampling_basis_state_is_constant() {
        let psi = StateVector::basis_state(4, 9).unwrap();
        let draws = sample(&psi, 32, 5).unwrap();
        assert!(draws.iter().all(|&x| x == 9));
    }

    #[test]
    fn sampling_frequency_within_three_sigma() {
        let psi = StateVector::plus_state(1).unwrap();
        let m = 100_000;
        let draws = sample(&psi, m, 123).unwrap();
        let zeros = draws.iter().filter(|&&x| x == 0).count() as f64;
        let freq = zeros / m as f64;
        // Binomial(m, 1/2): sigma of the frequency is 0.5/sqrt(m).
        let sigma = 0.5 / (m as f64).sqrt();
        assert!((freq - 0.5).abs() <= 3.0 * sigma, "freq {freq} outside 3 sigma");
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let psi = StateVector::random(5, 8).unwrap();
        let a = sample(&psi, 100, 77).unwrap();
        let b = sample(&psi, 100, 77).unwrap();
        assert_eq!(a, b);
        let c = sample(&psi, 100, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn capacity_and_input_errors() {
        assert!(matches!(StateVector::plus_state(0), Err(Error::Input(_))));
        assert!(matches!(StateVector::plus_state(25), Err(Error::Capacity(_))));
        assert!(matches!(
            expectation_diagonal(&[0.0; 4], &StateVector::plus_state(3).unwrap()),
            Err(Error::Input(_))
        ));
        let bad = StateVector::from_amplitudes(1, vec![Complex64::new(1.0, 0.0); 2]);
        assert!(matches!(bad, Err(Error::Input(_))));
    }

    #[test]
    fn debug_dump_is_re_im_pairs() {
        let s = StateVector::basis_state(1, 1).unwrap();
        assert_eq!(s.to_debug_json(), "[[0.0,0.0],[1.0,0.0]]");
    }

    #[test]
    fn expectation_invariant_under_global_phase() {
        let psi = StateVector::random(4, 21).unwrap();
        let phase = Complex64::from_polar(1.0, 1.234);
        let rotated = StateVector::from_amplitudes(
            4,
            psi.amplitudes().iter().map(|a| a * phase).collect(),
        )
        .unwrap();
        let h: Vec<f64> = (0..16).map(|x| (x as f64) - 7.5).collect();
        assert_abs_diff_eq!(
            expectation_diagonal(&h, &psi).unwrap(),
            expectation_diagonal(&h, &rotated).unwrap(),
            epsilon = 1e-12
        );
    }
}
