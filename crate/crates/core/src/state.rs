//! Dense state vectors: gate application, measurement and post-selection.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::gate::{Gate, GateKind, GateMatrix, Matrix2, Matrix4};
use crate::math::{cis, ONE, ZERO};
use crate::rng::uniform;

/// Branches whose Born weight falls below this are treated as impossible.
pub const IMPOSSIBLE_BRANCH: f64 = 1e-15;

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 28;

/// Amplitudes of an `n`-qubit pure state, little-endian in the qubit index.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

#[inline]
fn insert_zero_bit(value: usize, bit: usize) -> usize {
    let low = value & ((1 << bit) - 1);
    let high = (value >> bit) << (bit + 1);
    high | low
}

impl QuantumState {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> QuantumState {
        QuantumState::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> QuantumState {
        assert!(n_qubits <= MAX_QUBITS, "register too large");
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        QuantumState { n_qubits, amps }
    }

    /// Builds a state from raw amplitudes and normalizes it.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<QuantumState> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::LengthMismatch {
                expected: len.next_power_of_two().max(1),
                found: len,
            });
        }
        let mut state = QuantumState {
            n_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sqr();
        if !(norm > IMPOSSIBLE_BRANCH) || !norm.is_finite() {
            return Err(Error::ImpossibleBranch { probability: norm });
        }
        state.scale(1.0 / norm.sqrt());
        Ok(state)
    }

    /// Wraps amplitudes without normalizing; `None` when every amplitude is zero.
    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Complex64>) -> Option<QuantumState> {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        if amps.iter().all(|a| *a == ZERO) {
            return None;
        }
        Some(QuantumState { n_qubits, amps })
    }

    /// Tensor product of single-qubit states; `factors[q]` is qubit `q`.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<QuantumState> {
        let mut amps = vec![ONE];
        for f in factors.iter().rev() {
            let mut next = Vec::with_capacity(amps.len() * 2);
            for a in &amps {
                next.push(*a * f[0]);
                next.push(*a * f[1]);
            }
            amps = next;
        }
        QuantumState::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Index of the single non-zero amplitude, if this is a computational
    /// basis state up to a phase.
    pub fn as_basis_state(&self) -> Option<usize> {
        let mut found = None;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > 1e-24 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Applies a unitary gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.check(self.n_qubits)?;
        let q = gate.qubits();
        match gate.kind() {
            GateKind::Measure => return Err(Error::MeasureInUnitaryPath),
            GateKind::Rz => {
                let a = gate.angle().unwrap_or_default();
                self.apply_diagonal_1q(q[0], cis(-a / 2.0), cis(a / 2.0));
            }
            GateKind::Cphase => self.apply_phase_11(q[0], q[1], cis(gate.angle().unwrap_or_default())),
            GateKind::Cz => self.apply_phase_11(q[0], q[1], -ONE),
            GateKind::Swap => self.apply_swap(q[0], q[1]),
            _ => match gate.matrix()? {
                GateMatrix::One(m) => self.apply_matrix_1q(q[0], &m),
                GateMatrix::Two(m) => self.apply_matrix_2q(q[0], q[1], &m),
            },
        }
        Ok(())
    }

    /// Functional form of [`QuantumState::apply`].
    pub fn applied(mut self, gate: &Gate) -> Result<QuantumState> {
        self.apply(gate)?;
        Ok(self)
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    pub fn apply_matrix_1q(&mut self, q: usize, m: &Matrix2) {
        let stride = 1usize << q;
        for base in 0..self.dim() / 2 {
            let i = insert_zero_bit(base, q);
            let j = i | stride;
            let (a, b) = (self.amps[i], self.amps[j]);
            self.amps[i] = m[0][0] * a + m[0][1] * b;
            self.amps[j] = m[1][0] * a + m[1][1] * b;
        }
    }

    /// `m` is indexed by `bit(q0) + 2·bit(q1)`.
    pub fn apply_matrix_2q(&mut self, q0: usize, q1: usize, m: &Matrix4) {
        let (lo, hi) = if q0 < q1 { (q0, q1) } else { (q1, q0) };
        let (b0, b1) = (1usize << q0, 1usize << q1);
        for base in 0..self.dim() / 4 {
            let i = insert_zero_bit(insert_zero_bit(base, lo), hi);
            let idx = [i, i | b0, i | b1, i | b0 | b1];
            let v = idx.map(|k| self.amps[k]);
            for (r, &k) in idx.iter().enumerate() {
                self.amps[k] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            }
        }
    }

    fn apply_diagonal_1q(&mut self, q: usize, d0: Complex64, d1: Complex64) {
        let mask = 1usize << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= if i & mask == 0 { d0 } else { d1 };
        }
    }

    fn apply_phase_11(&mut self, a: usize, b: usize, phase: Complex64) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= phase;
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (1usize << a, 1usize << b);
        for i in 0..self.dim() {
            if i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, (i & !ma) | mb);
            }
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::InvalidQubit {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Born probability of reading `1` on qubit `q`.
    pub fn prob_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projects qubit `q` onto `bit` and renormalizes. Deterministic.
    ///
    /// Returns the Born probability of the branch together with the collapsed
    /// state on the full register.
    pub fn postselect(&self, q: usize, bit: u8) -> Result<(f64, QuantumState)> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        let want = if bit == 0 { 0 } else { mask };
        let mut amps = self.amps.clone();
        let mut p = 0.0;
        for (i, a) in amps.iter_mut().enumerate() {
            if i & mask == want {
                p += a.norm_sqr();
            } else {
                *a = ZERO;
            }
        }
        if p < IMPOSSIBLE_BRANCH {
            return Err(Error::ImpossibleBranch { probability: p });
        }
        let mut out = QuantumState {
            n_qubits: self.n_qubits,
            amps,
        };
        out.scale(1.0 / p.sqrt());
        Ok((p, out))
    }

    /// Projective Z measurement of qubit `q` with Born-rule sampling.
    pub fn measure_qubit<R: RngCore>(&self, q: usize, rng: &mut R) -> Result<(u8, QuantumState)> {
        let p1 = self.prob_one(q)?;
        let bit = u8::from(uniform(rng) < p1);
        let (_, state) = self.postselect(q, bit)?;
        Ok((bit, state))
    }

    /// Restricts to the qubits in `keep` (in that order) after fixing every
    /// other qubit to the value given in `fixed`. The result is renormalized;
    /// amplitudes inconsistent with `fixed` are dropped.
    pub fn restrict(&self, keep: &[usize], fixed: &[(usize, u8)]) -> Result<QuantumState> {
        if keep.len() + fixed.len() != self.n_qubits {
            return Err(Error::LengthMismatch {
                expected: self.n_qubits,
                found: keep.len() + fixed.len(),
            });
        }
        let mut seen = 0usize;
        for &q in keep.iter().chain(fixed.iter().map(|(q, _)| q)) {
            self.check_qubit(q)?;
            if seen & (1 << q) != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            seen |= 1 << q;
        }
        let offset: usize = fixed
            .iter()
            .filter(|(_, b)| *b != 0)
            .map(|(q, _)| 1usize << q)
            .sum();
        let mut amps = Vec::with_capacity(1 << keep.len());
        for sub in 0..(1usize << keep.len()) {
            let mut full = offset;
            for (k, &q) in keep.iter().enumerate() {
                if sub >> k & 1 == 1 {
                    full |= 1 << q;
                }
            }
            amps.push(self.amps[full]);
        }
        QuantumState::from_amplitudes(amps)
    }

    /// Renormalizes in place; errors if the norm vanished.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if n < IMPOSSIBLE_BRANCH {
            return Err(Error::ImpossibleBranch { probability: n });
        }
        self.scale(1.0 / n.sqrt());
        Ok(())
    }

    /// Keeps amplitudes whose index satisfies `keep`, renormalizes, and
    /// returns the retained probability.
    pub fn project_onto(&self, keep: impl Fn(usize) -> bool) -> Result<(f64, QuantumState)> {
        let mut amps = self.amps.clone();
        let mut p = 0.0;
        for (i, a) in amps.iter_mut().enumerate() {
            if keep(i) {
                p += a.norm_sqr();
            } else {
                *a = ZERO;
            }
        }
        if p < IMPOSSIBLE_BRANCH {
            return Err(Error::ImpossibleBranch { probability: p });
        }
        let mut out = QuantumState {
            n_qubits: self.n_qubits,
            amps,
        };
        out.scale(1.0 / p.sqrt());
        Ok((p, out))
    }
}

/// Functional gate application.
pub fn apply_gate(state: &QuantumState, gate: &Gate) -> Result<QuantumState> {
    state.clone().applied(gate)
}
