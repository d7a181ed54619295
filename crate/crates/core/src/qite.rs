//! Imaginary-time evolution machinery: assembly of the linear system
//! S phi = b, its minimum-norm least-squares solution, the compressed and
//! Trotterized evolution loops, and the exact normalized-evolution oracle.
//!
//! For an ordered string list {P}, a state psi, and a diagonal Hamiltonian H:
//!
//! ```text
//! S_PP' = Re <P psi | P' psi>        (P is Hermitian, so P-dagger = P)
//! b_P   = Im <P psi | H psi>
//! ```
//!
//! Every P|psi> is a signed permutation of psi times i^{y_count}. On a
//! real-amplitude state each column is therefore a real vector times a unit
//! phase in {1, i, -1, -i}, and the Gram matrix collapses to a real
//! matrix-matrix product with a +1/0/-1 phase mask. That product is the hot
//! loop of every run; it goes through `matrixmultiply::dgemm` over column
//! panels, parallelized with rayon. Panels are recomputed in blocked passes
//! when caching all columns would exceed the memory budget.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::ansatz::{apply_ansatz, AnsatzSpec};
use crate::error::{Error, Result};
use crate::metrics::ground_state_probability;
use crate::pauli::{self, PauliString};
use crate::problem::PreparedInstance;
use crate::statevec::{expectation_diagonal, StateVector};
use crate::trace::{l2_norm, RunTrace, TraceRecord};

/// Default pseudo-inverse truncation: singular values below
/// `rel_tol * sigma_max` are dropped. S is singular whenever the P|psi>
/// vectors are linearly dependent, which is routine at theta = 0 on
/// symmetric states.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Default cache budget for P|psi> columns: 2 GiB.
pub const DEFAULT_BUDGET_BYTES: usize = 2 * 1024 * 1024 * 1024;

/// Knobs shared by the assembly and the evolution loops.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub rel_tol: f64,
    pub budget_bytes: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { rel_tol: DEFAULT_REL_TOL, budget_bytes: DEFAULT_BUDGET_BYTES }
    }
}

/// The assembled linear system; string order matches the input list.
#[derive(Debug, Clone)]
pub struct QiteSystem {
    s: DMatrix<f64>,
    b: DVector<f64>,
}

impl QiteSystem {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }
}

/// Minimum-norm least-squares solution and its residual.
#[derive(Debug, Clone)]
pub struct QiteSolution {
    pub phi: Vec<f64>,
    pub residual: f64,
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

/// Re(i^d) for d = (y_count' - y_count) mod 4: the phase mask entry of a
/// string pair.
#[inline]
fn phase_re(d: u32) -> f64 {
    match d % 4 {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    }
}

/// Writes the real carrier of P|psi> for a real state: column[x] =
/// sign(x ^ m) * psi[x ^ m], with P|psi> = i^{y_count} * column.
fn fill_real_column(p: &PauliString, psi_re: &[f64], col: &mut [f64]) {
    let m = p.x_mask();
    let z = p.z_mask();
    for (x, slot) in col.iter_mut().enumerate() {
        let src = (x as u64) ^ m;
        let sign = 1.0 - 2.0 * ((src & z).count_ones() & 1) as f64;
        *slot = sign * psi_re[src as usize];
    }
}

/// C (wi x wj) = A_I^T * A_J for column-major panels with leading dimension
/// `dim`.
fn gram_block(cols_i: &[f64], wi: usize, cols_j: &[f64], wj: usize, dim: usize, out: &mut [f64]) {
    debug_assert_eq!(cols_i.len(), wi * dim);
    debug_assert_eq!(cols_j.len(), wj * dim);
    debug_assert_eq!(out.len(), wi * wj);
    if wi == 0 || wj == 0 {
        return;
    }
    unsafe {
        matrixmultiply::dgemm(
            wi,
            dim,
            wj,
            1.0,
            cols_i.as_ptr(),
            dim as isize, // row stride of A_I^T = column stride of the panel
            1,
            cols_j.as_ptr(),
            1,
            dim as isize,
            0.0,
            out.as_mut_ptr(),
            wj as isize,
            1,
        );
    }
}

/// Assembles S and b with the default 2 GiB column budget.
pub fn assemble_system(
    psi: &StateVector,
    strings: &[PauliString],
    h_diag: &[f64],
) -> Result<QiteSystem> {
    assemble_system_with(psi, strings, h_diag, &RunOptions::default())
}

pub fn assemble_system_with(
    psi: &StateVector,
    strings: &[PauliString],
    h_diag: &[f64],
    opts: &RunOptions,
) -> Result<QiteSystem> {
    if h_diag.len() != psi.dim() {
        return Err(Error::input("Hamiltonian diagonal does not match state dimension"));
    }
    if strings.iter().any(|p| p.n() != psi.n()) {
        return Err(Error::input("string qubit count does not match state"));
    }
    if psi.is_real() {
        assemble_real(psi, strings, h_diag, opts)
    } else {
        assemble_complex(psi, strings, h_diag)
    }
}

fn assemble_real(
    psi: &StateVector,
    strings: &[PauliString],
    h_diag: &[f64],
    opts: &RunOptions,
) -> Result<QiteSystem> {
    let p = strings.len();
    let dim = psi.dim();
    let psi_re: Vec<f64> = psi.amplitudes().iter().map(|a| a.re).collect();
    let h_psi: Vec<f64> = psi_re.iter().zip(h_diag).map(|(a, h)| a * h).collect();
    let phases: Vec<u32> = strings.iter().map(|s| s.y_count() % 4).collect();

    let mut s = vec![0.0f64; p * p];
    let mut b = vec![0.0f64; p];

    let col_bytes = dim * std::mem::size_of::<f64>();
    if p * col_bytes <= opts.budget_bytes {
        // Cache every column, then take panel products in parallel.
        let mut cols = vec![0.0f64; p * dim];
        cols.par_chunks_mut(dim).zip(strings.par_iter()).for_each(|(col, st)| {
            fill_real_column(st, &psi_re, col);
        });

        b.par_iter_mut().enumerate().for_each(|(i, bi)| {
            let t: f64 = cols[i * dim..(i + 1) * dim]
                .iter()
                .zip(&h_psi)
                .map(|(c, h)| c * h)
                .sum();
            // Im(i^{-k}) is -1 for one Y, +1 for three, 0 for even counts.
            *bi = match phases[i] {
                1 => -t,
                3 => t,
                _ => 0.0,
            };
        });

        const PANEL: usize = 64;
        let panels: Vec<(usize, usize)> = {
            let starts: Vec<usize> = (0..p).step_by(PANEL).collect();
            let mut pairs = Vec::new();
            for (a, &i0) in starts.iter().enumerate() {
                for &j0 in &starts[a..] {
                    pairs.push((i0, j0));
                }
            }
            pairs
        };
        let blocks: Vec<(usize, usize, Vec<f64>)> = panels
            .into_par_iter()
            .map(|(i0, j0)| {
                let wi = PANEL.min(p - i0);
                let wj = PANEL.min(p - j0);
                let mut block = vec![0.0f64; wi * wj];
                gram_block(
                    &cols[i0 * dim..(i0 + wi) * dim],
                    wi,
                    &cols[j0 * dim..(j0 + wj) * dim],
                    wj,
                    dim,
                    &mut block,
                );
                (i0, j0, block)
            })
            .collect();
        for (i0, j0, block) in blocks {
            let wi = PANEL.min(p - i0);
            let wj = PANEL.min(p - j0);
            for a in 0..wi {
                for c in 0..wj {
                    let (i, j) = (i0 + a, j0 + c);
                    if j < i {
                        continue;
                    }
                    let val = phase_re((4 + phases[j] - phases[i]) % 4) * block[a * wj + c];
                    s[i * p + j] = val;
                    s[j * p + i] = val;
                }
            }
        }
    } else {
        // Blocked recompute: two panels at a time, sequential sweeps.
        let panel = (opts.budget_bytes / (2 * col_bytes)).clamp(1, p.max(1));
        let mut cols_i = vec![0.0f64; panel * dim];
        let mut cols_j = vec![0.0f64; panel * dim];
        let mut i0 = 0;
        while i0 < p {
            let wi = panel.min(p - i0);
            cols_i[..wi * dim]
                .par_chunks_mut(dim)
                .zip(strings[i0..i0 + wi].par_iter())
                .for_each(|(col, st)| fill_real_column(st, &psi_re, col));
            for (a, bi) in b[i0..i0 + wi].iter_mut().enumerate() {
                let t: f64 = cols_i[a * dim..(a + 1) * dim]
                    .iter()
                    .zip(&h_psi)
                    .map(|(c, h)| c * h)
                    .sum();
                *bi = match phases[i0 + a] {
                    1 => -t,
                    3 => t,
                    _ => 0.0,
                };
            }
            let mut j0 = i0;
            while j0 < p {
                let wj = panel.min(p - j0);
                let block_cols: &[f64] = if j0 == i0 {
                    &cols_i[..wj * dim]
                } else {
                    cols_j[..wj * dim]
                        .par_chunks_mut(dim)
                        .zip(strings[j0..j0 + wj].par_iter())
                        .for_each(|(col, st)| fill_real_column(st, &psi_re, col));
                    &cols_j[..wj * dim]
                };
                let mut block = vec![0.0f64; wi * wj];
                gram_block(&cols_i[..wi * dim], wi, block_cols, wj, dim, &mut block);
                for a in 0..wi {
                    for c in 0..wj {
                        let (i, j) = (i0 + a, j0 + c);
                        if j < i {
                            continue;
                        }
                        let val = phase_re((4 + phases[j] - phases[i]) % 4) * block[a * wj + c];
                        s[i * p + j] = val;
                        s[j * p + i] = val;
                    }
                }
                j0 += wj;
            }
            i0 += wi;
        }
    }

    Ok(QiteSystem {
        s: DMatrix::from_row_slice(p, p, &s),
        b: DVector::from_vec(b),
    })
}

/// General path for states with nonzero imaginary parts: unoptimized column
/// store split into re/im planes, Gram = re^T re + im^T im.
fn assemble_complex(
    psi: &StateVector,
    strings: &[PauliString],
    h_diag: &[f64],
) -> Result<QiteSystem> {
    let p = strings.len();
    let dim = psi.dim();
    let amps = psi.amplitudes();
    let h_psi: Vec<Complex64> = amps.iter().zip(h_diag).map(|(a, h)| a * h).collect();

    let cols: Vec<Vec<Complex64>> = strings
        .par_iter()
        .map(|st| {
            let m = st.x_mask();
            let c = st.phase_constant();
            (0..dim)
                .map(|x| {
                    let src = (x as u64) ^ m;
                    c * st.sign_on(src) * amps[src as usize]
                })
                .collect()
        })
        .collect();

    let mut s = DMatrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let re: f64 = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.re * b.re + a.im * b.im)
                .sum();
            s[(i, j)] = re;
            s[(j, i)] = re;
        }
    }
    let b: Vec<f64> = cols
        .iter()
        .map(|col| {
            col.iter()
                .zip(&h_psi)
                .map(|(a, h)| a.re * h.im - a.im * h.re)
                .sum()
        })
        .collect();
    Ok(QiteSystem { s, b: DVector::from_vec(b) })
}

// ---------------------------------------------------------------------------
// Solve
// ---------------------------------------------------------------------------

/// Minimum-norm least-squares solution of S phi = b via a symmetric
/// eigendecomposition pseudo-inverse, truncating eigenvalues below
/// `rel_tol * max |eigenvalue|`.
pub fn solve_step(system: &QiteSystem, rel_tol: f64) -> Result<QiteSolution> {
    let p = system.dim();
    if p == 0 {
        return Ok(QiteSolution { phi: Vec::new(), residual: 0.0 });
    }
    if system.s.iter().any(|v| !v.is_finite()) || system.b.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("non-finite entries in the linear system"));
    }
    let eigen = system.s.clone().symmetric_eigen();
    let max_abs = eigen.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut phi = DVector::zeros(p);
    if max_abs > 0.0 {
        let thresh = rel_tol * max_abs;
        // phi = sum over kept modes of (q . b / lambda) q
        let qtb = eigen.eigenvectors.transpose() * &system.b;
        for (k, &lambda) in eigen.eigenvalues.iter().enumerate() {
            if lambda.abs() > thresh {
                phi += eigen.eigenvectors.column(k) * (qtb[k] / lambda);
            }
        }
    }
    let residual = (&system.s * &phi - &system.b).norm();
    Ok(QiteSolution { phi: phi.iter().copied().collect(), residual })
}

// ---------------------------------------------------------------------------
// Evolution loops
// ---------------------------------------------------------------------------

fn record_step(
    prepared: &PreparedInstance,
    psi: &StateVector,
    step: usize,
    delta: f64,
    theta: &[f64],
    residual: f64,
    phi_norm: f64,
) -> Result<TraceRecord> {
    let energy = expectation_diagonal(prepared.h_diag(), psi)?;
    let p_gs = ground_state_probability(psi, prepared.spectrum())?;
    Ok(TraceRecord {
        step,
        energy,
        p_gs,
        w: 0.0,
        delta,
        theta_norm: l2_norm(theta),
        residual,
        grad_norm: 0.0,
        phi_norm,
    })
}

/// Compressed evolution: one fixed-depth circuit, parameters updated by
/// theta += 2 dtau phi-hat per step, phi-hat solved at the current state.
pub fn cqite_run(
    prepared: &PreparedInstance,
    spec: &AnsatzSpec,
    psi0: &StateVector,
    dtau: f64,
    steps: usize,
    opts: &RunOptions,
) -> Result<RunTrace> {
    if steps == 0 {
        return Err(Error::input("step count must be at least 1"));
    }
    let mut trace = RunTrace::new();
    let mut theta = vec![0.0f64; spec.parameter_count()];
    let mut psi = psi0.clone();
    let mut prev_energy = expectation_diagonal(prepared.h_diag(), &psi)?;
    trace.push(record_step(prepared, &psi, 0, 0.0, &theta, 0.0, 0.0)?, theta.clone());

    for s in 1..=steps {
        let system = assemble_system_with(&psi, spec.strings(), prepared.h_diag(), opts)?;
        let sol = solve_step(&system, opts.rel_tol)?;
        for (t, f) in theta.iter_mut().zip(&sol.phi) {
            *t += 2.0 * dtau * f;
        }
        psi = apply_ansatz(spec, &theta, psi0)?;
        let mut rec = record_step(
            prepared,
            &psi,
            s,
            0.0,
            &theta,
            sol.residual,
            l2_norm(&sol.phi),
        )?;
        rec.delta = prev_energy - rec.energy;
        prev_energy = rec.energy;
        trace.push(rec, theta.clone());
    }
    Ok(trace)
}

/// Full Trotterized evolution: the state itself grows by the new rotations
/// at every step (a depth-N circuit). Uses the same string order as
/// `cqite_run`; the recorded theta is the accumulated angle sum. Returns the
/// trace together with the final evolved state, which is the prepared state
/// this method is judged on (there is no fixed circuit to rebuild it from).
pub fn qite_run(
    prepared: &PreparedInstance,
    strings: &[PauliString],
    psi0: &StateVector,
    dtau: f64,
    steps: usize,
    opts: &RunOptions,
) -> Result<(RunTrace, StateVector)> {
    if steps == 0 {
        return Err(Error::input("step count must be at least 1"));
    }
    let mut trace = RunTrace::new();
    let mut theta_cum = vec![0.0f64; strings.len()];
    let mut psi = psi0.clone();
    let mut prev_energy = expectation_diagonal(prepared.h_diag(), &psi)?;
    trace.push(record_step(prepared, &psi, 0, 0.0, &theta_cum, 0.0, 0.0)?, theta_cum.clone());

    for s in 1..=steps {
        let system = assemble_system_with(&psi, strings, prepared.h_diag(), opts)?;
        let sol = solve_step(&system, opts.rel_tol)?;
        let mut amps = psi.amplitudes().to_vec();
        for (p, &f) in strings.iter().zip(&sol.phi) {
            let angle = 2.0 * dtau * f;
            if angle != 0.0 {
                pauli::rotate_in_place(p, angle, &mut amps);
            }
        }
        psi = StateVector::from_amplitudes_unchecked(psi0.n(), amps)?;
        for (t, f) in theta_cum.iter_mut().zip(&sol.phi) {
            *t += 2.0 * dtau * f;
        }
        let mut rec = record_step(
            prepared,
            &psi,
            s,
            0.0,
            &theta_cum,
            sol.residual,
            l2_norm(&sol.phi),
        )?;
        rec.delta = prev_energy - rec.energy;
        prev_energy = rec.energy;
        trace.push(rec, theta_cum.clone());
    }
    Ok((trace, psi))
}

/// One step of exact normalized imaginary-time evolution:
/// amplitudes scaled by exp(-dtau h[x]) and renormalized. The reference
/// oracle for evolution quality. Exponents are shifted by min h to avoid
/// overflow; the shift cancels in the normalization.
pub fn exact_ite_step(psi: &StateVector, h_diag: &[f64], dtau: f64) -> Result<StateVector> {
    if dtau <= 0.0 {
        return Err(Error::input("dtau must be positive"));
    }
    if h_diag.len() != psi.dim() {
        return Err(Error::input("Hamiltonian diagonal does not match state dimension"));
    }
    let h_min = h_diag.iter().copied().fold(f64::INFINITY, f64::min);
    let mut amps: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(h_diag)
        .map(|(a, &h)| a * (-dtau * (h - h_min)).exp())
        .collect();
    let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if !norm_sq.is_finite() || norm_sq <= 0.0 {
        return Err(Error::numeric("state norm collapsed during imaginary-time step"));
    }
    let inv = norm_sq.sqrt().recip();
    for a in &mut amps {
        *a *= inv;
    }
    StateVector::from_amplitudes_unchecked(psi.n(), amps)
}
