//! Numerical equivalence of circuit unitaries.
//!
//! Unitaries are never stored: both circuits are applied to each
//! computational basis state in turn and only per-column quantities are kept.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::math::{cis, ZERO};
use crate::native::LocalCorrection;
use crate::state::QuantumState;

/// Largest register accepted by the checker.
pub const MAX_EQUIV_QUBITS: usize = 12;

/// Decision threshold on the entry-wise distance.
pub const EQUIV_TOLERANCE: f64 = 1e-9;

/// Freedom allowed when comparing two unitaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivClass {
    Exact,
    GlobalPhase,
    /// A product of single-qubit `RZ` gates on either side, plus a global phase.
    LocalRzGlobalPhase,
}

/// Where a fitted local correction acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Applied to `a`'s output: `U_b = e^{iγ} D U_a`.
    Output,
    /// Applied to `a`'s input: `U_b = e^{iγ} U_a D`.
    Input,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// Largest entry-wise deviation after the best allowed correction.
    pub distance: f64,
    /// Correction taking `a` to `b`; the identity for [`EquivClass::Exact`].
    pub correction: LocalCorrection,
    pub side: Side,
}

fn columns(a: &Circuit, b: &Circuit, mut f: impl FnMut(usize, &[Complex64], &[Complex64])) -> Result<()> {
    for j in 0..1usize << a.n_qubits() {
        let basis = QuantumState::basis(a.n_qubits(), j);
        let ua = a.evolve(&basis)?;
        let ub = b.evolve(&basis)?;
        f(j, ua.amplitudes(), ub.amplitudes());
    }
    Ok(())
}

/// Phases `Σ_q bit_q(i)·α_q − Σ_q α_q/2` of `⊗_q RZ(α_q)` on basis state `i`.
fn rz_phase(alphas: &[f64], i: usize) -> f64 {
    alphas
        .iter()
        .enumerate()
        .map(|(q, a)| if i >> q & 1 == 1 { a / 2.0 } else { -a / 2.0 })
        .sum()
}

/// Fits `r_i ≈ |r_i| e^{i(γ + phase(α, i))}` for a diagonal of local `RZ` gates.
fn fit_diagonal(r: &[Complex64], n: usize) -> LocalCorrection {
    let alphas: Vec<f64> = (0..n)
        .map(|q| {
            let mask = 1usize << q;
            let acc: Complex64 = (0..r.len())
                .filter(|i| i & mask != 0)
                .map(|i| r[i] * r[i ^ mask].conj())
                .sum();
            acc.arg()
        })
        .collect();
    let g: Complex64 = r
        .iter()
        .enumerate()
        .map(|(i, x)| x * cis(-rz_phase(&alphas, i)))
        .sum();
    LocalCorrection::from_parts(alphas, g.arg())
}

/// Compares the unitaries of `a` and `b` modulo `class`.
pub fn equivalence(a: &Circuit, b: &Circuit, class: EquivClass) -> Result<Equivalence> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::SizeMismatch {
            expected: a.n_qubits(),
            found: b.n_qubits(),
        });
    }
    let n = a.n_qubits();
    if n > MAX_EQUIV_QUBITS {
        return Err(Error::SizeOverflow {
            n_qubits: n,
            limit: MAX_EQUIV_QUBITS,
        });
    }
    let dim = 1usize << n;

    let mut candidates = vec![(LocalCorrection::identity(n), Side::Output)];
    if class != EquivClass::Exact {
        // rows: r_i = Σ_j conj(Ua_ij) Ub_ij, columns: c_j = ⟨Ua e_j|Ub e_j⟩
        let mut rows = vec![ZERO; dim];
        let mut cols = vec![ZERO; dim];
        columns(a, b, |j, ua, ub| {
            let mut c = ZERO;
            for (i, (x, y)) in ua.iter().zip(ub).enumerate() {
                let t = x.conj() * y;
                rows[i] += t;
                c += t;
            }
            cols[j] = c;
        })?;
        let trace: Complex64 = cols.iter().sum();
        candidates.push((LocalCorrection::from_parts(vec![0.0; n], trace.arg()), Side::Output));
        if class == EquivClass::LocalRzGlobalPhase {
            candidates.push((fit_diagonal(&rows, n), Side::Output));
            candidates.push((fit_diagonal(&cols, n), Side::Input));
        }
    }

    let mut worst = vec![0.0f64; candidates.len()];
    let diag: Vec<Vec<Complex64>> = candidates
        .iter()
        .map(|(c, _)| {
            (0..dim)
                .map(|i| cis(c.global_phase() + rz_phase(c.rz(), i)))
                .collect()
        })
        .collect();
    columns(a, b, |j, ua, ub| {
        for (k, (_, side)) in candidates.iter().enumerate() {
            let d = &diag[k];
            let mut m = worst[k];
            for (i, (x, y)) in ua.iter().zip(ub).enumerate() {
                let phase = match side {
                    Side::Output => d[i],
                    Side::Input => d[j],
                };
                m = m.max((x * phase - y).norm());
            }
            worst[k] = m;
        }
    })?;

    let best = (0..candidates.len())
        .min_by(|&x, &y| worst[x].total_cmp(&worst[y]))
        .unwrap_or(0);
    let (correction, side) = candidates.swap_remove(best);
    Ok(Equivalence {
        equivalent: worst[best] < EQUIV_TOLERANCE,
        distance: worst[best],
        correction,
        side,
    })
}

/// `(equivalent, distance)` for `a` and `b` modulo `class`.
pub fn unitary_equiv(a: &Circuit, b: &Circuit, class: EquivClass) -> Result<(bool, f64)> {
    equivalence(a, b, class).map(|e| (e.equivalent, e.distance))
}
