//! Sparse Pauli strings in bitmask form and their action on statevectors.
//!
//! A string is stored as a pair of qubit masks: `x_mask` marks qubits whose
//! factor flips the basis bit (X or Y), `z_mask` marks qubits whose factor
//! applies a sign (Z or Y). Y qubits are the intersection. On a basis state,
//!
//! ```text
//! P|x> = i^{y_count} * (-1)^{popcount(x & z_mask)} * |x ^ x_mask>
//! ```
//!
//! which fixes the sign convention Y|0> = i|1>, Y|1> = -i|0>. All tests
//! compare full complex amplitudes; nothing is "up to global phase".

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::StateVector;

/// Maximum qubit count representable by the `u64` masks.
pub const MAX_QUBITS: usize = 64;

/// A sparse n-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x_mask: u64,
    z_mask: u64,
}

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliFactor {
    I,
    X,
    Y,
    Z,
}

impl PauliString {
    /// Build from explicit masks. Bit q of a mask refers to qubit q+1
    /// (qubit 1 is the least significant bit, shared with the vertex
    /// convention of the problem module).
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::input(format!("qubit count {n} out of range 1..={MAX_QUBITS}")));
        }
        let valid = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if x_mask & !valid != 0 || z_mask & !valid != 0 {
            return Err(Error::input("mask bits outside qubit range"));
        }
        Ok(PauliString { n, x_mask, z_mask })
    }

    /// Build from per-qubit factors on the given (0-based) qubit indices.
    pub fn from_factors(n: usize, factors: &[(usize, PauliFactor)]) -> Result<Self> {
        let mut x_mask = 0u64;
        let mut z_mask = 0u64;
        for &(q, f) in factors {
            if q >= n {
                return Err(Error::input(format!("qubit index {q} out of range for n={n}")));
            }
            let bit = 1u64 << q;
            match f {
                PauliFactor::I => {}
                PauliFactor::X => x_mask |= bit,
                PauliFactor::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                }
                PauliFactor::Z => z_mask |= bit,
            }
        }
        PauliString::from_masks(n, x_mask, z_mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    /// Qubits carrying a Y factor.
    pub fn y_mask(&self) -> u64 {
        self.x_mask & self.z_mask
    }

    /// Number of non-identity qubits.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    pub fn y_count(&self) -> u32 {
        self.y_mask().count_ones()
    }

    /// True when the string contains an odd number of Y factors.
    pub fn is_odd_y(&self) -> bool {
        self.y_count() % 2 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Factor on a (0-based) qubit.
    pub fn factor(&self, q: usize) -> PauliFactor {
        let bit = 1u64 << q;
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => PauliFactor::I,
            (true, false) => PauliFactor::X,
            (true, true) => PauliFactor::Y,
            (false, true) => PauliFactor::Z,
        }
    }

    /// i^{y_count}: the constant part of the basis-action phase.
    pub fn phase_constant(&self) -> Complex64 {
        match self.y_count() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Sign of the basis action on |x>: (-1)^{popcount(x & z_mask)}.
    #[inline]
    pub fn sign_on(&self, x: u64) -> f64 {
        if (x & self.z_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Returns P|psi>.
pub fn apply_pauli(p: &PauliString, psi: &StateVector) -> Result<StateVector> {
    if p.n() != psi.n() {
        return Err(Error::input(format!(
            "pauli acts on {} qubits, state has {}",
            p.n(),
            psi.n()
        )));
    }
    let amps = psi.amplitudes();
    let c = p.phase_constant();
    let m = p.x_mask();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    // (P psi)[x] = phase(x ^ m) * psi[x ^ m]
    for (x, slot) in out.iter_mut().enumerate() {
        let src = (x as u64) ^ m;
        *slot = c * p.sign_on(src) * amps[src as usize];
    }
    StateVector::from_amplitudes_unchecked(psi.n(), out)
}

/// Returns exp(-i theta/2 P)|psi> = cos(theta/2)|psi> - i sin(theta/2) P|psi>,
/// valid because P^2 = I. One pass pairing index x with x ^ x_mask.
pub fn apply_pauli_rotation(p: &PauliString, theta: f64, psi: &StateVector) -> Result<StateVector> {
    if p.n() != psi.n() {
        return Err(Error::input(format!(
            "pauli acts on {} qubits, state has {}",
            p.n(),
            psi.n()
        )));
    }
    let mut out = psi.amplitudes().to_vec();
    rotate_in_place(p, theta, &mut out);
    StateVector::from_amplitudes_unchecked(psi.n(), out)
}

/// In-place rotation kernel shared by the ansatz and QITE loops.
pub(crate) fn rotate_in_place(p: &PauliString, theta: f64, amps: &mut [Complex64]) {
    let half = 0.5 * theta;
    let (s, c) = half.sin_cos();
    // -i * sin * i^{y_count}
    let mis = Complex64::new(0.0, -s) * p.phase_constant();
    let m = p.x_mask();
    if m == 0 {
        // Pure-Z string: diagonal action, no pairing.
        for (x, a) in amps.iter_mut().enumerate() {
            let sign = p.sign_on(x as u64);
            *a = c * *a + mis * sign * *a;
        }
        return;
    }
    for x in 0..amps.len() as u64 {
        let y = x ^ m;
        if x < y {
            let ax = amps[x as usize];
            let ay = amps[y as usize];
            // (P psi)[x] picks up the phase evaluated at the source index.
            amps[x as usize] = c * ax + mis * p.sign_on(y) * ay;
            amps[y as usize] = c * ay + mis * p.sign_on(x) * ax;
        }
    }
}

impl fmt::Display for PauliString {
    /// Textual label: factor letter + 1-based qubit index, ascending, e.g. "Z1Y4".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        for q in 0..self.n {
            match self.factor(q) {
                PauliFactor::I => {}
                PauliFactor::X => write!(f, "X{}", q + 1)?,
                PauliFactor::Y => write!(f, "Y{}", q + 1)?,
                PauliFactor::Z => write!(f, "Z{}", q + 1)?,
            }
        }
        Ok(())
    }
}

/// Parses labels of the form "Y3", "Z1Y4", "X2Y7". The qubit count is taken
/// as the largest index mentioned; use [`PauliString::from_factors`] when the
/// register is wider.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors: Vec<(usize, PauliFactor)> = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(ch) = chars.next() {
            let f = match ch {
                'X' | 'x' => PauliFactor::X,
                'Y' | 'y' => PauliFactor::Y,
                'Z' | 'z' => PauliFactor::Z,
                'I' | 'i' => PauliFactor::I,
                _ => return Err(Error::input(format!("unexpected character {ch:?} in pauli label"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            if f == PauliFactor::I && digits.is_empty() {
                continue; // bare "I" label
            }
            let idx: usize = digits
                .parse()
                .map_err(|_| Error::input(format!("missing qubit index after {ch:?}")))?;
            if idx == 0 {
                return Err(Error::input("pauli labels use 1-based qubit indices"));
            }
            if factors.iter().any(|&(q, _)| q == idx - 1) {
                return Err(Error::input(format!("duplicate qubit {idx} in pauli label")));
            }
            factors.push((idx - 1, f));
        }
        let n = factors.iter().map(|&(q, _)| q + 1).max().unwrap_or(1);
        PauliString::from_factors(n, &factors)
    }
}
