//! Readout errors: a per-qubit confusion model, its forward action on
//! histograms, calibration from alternating bitstrings, and mitigation by the
//! factor-wise inverse.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;


use num_traits::Float;

use crate::error::{Error, Result};
use crate::histogram::OutcomeHistogram;
use crate::rng::{derive_seed, stream, uniform};

/// Readout fidelities of one qubit: `P(read 0 | prepared 0)` and
/// `P(read 1 | prepared 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReadoutError {
    pub p00: f64,
    pub p11: f64,
}

impl ReadoutError {
    pub const PERFECT: ReadoutError = ReadoutError { p00: 1.0, p11: 1.0 };

    pub fn new(p00: f64, p11: f64) -> Result<ReadoutError> {
        for p in [p00, p11] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(ReadoutError { p00, p11 })
    }

    /// Column-stochastic matrix `A[read][prepared]`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.p00, 1.0 - self.p11], [1.0 - self.p00, self.p11]]
    }

    pub fn determinant(&self) -> f64 {
        self.p00 + self.p11 - 1.0
    }

    fn inverse(&self, qubit: usize) -> Result<[[f64; 2]; 2]> {
        let det = self.determinant();
        if det.abs() < 1e-12 {
            return Err(Error::SingularReadout { qubit });
        }
        Ok([
            [self.p11 / det, -(1.0 - self.p11) / det],
            [-(1.0 - self.p00) / det, self.p00 / det],
        ])
    }
}

/// Tensor product of independent per-qubit readout errors; entry `k` acts on
/// classical slot `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfusionModel {
    qubits: Vec<ReadoutError>,
}

impl ConfusionModel {
    pub fn new(qubits: Vec<ReadoutError>) -> ConfusionModel {
        ConfusionModel { qubits }
    }

    pub fn identity(n: usize) -> ConfusionModel {
        ConfusionModel::new(vec![ReadoutError::PERFECT; n])
    }

    pub fn uniform(n: usize, p00: f64, p11: f64) -> Result<ConfusionModel> {
        Ok(ConfusionModel::new(vec![ReadoutError::new(p00, p11)?; n]))
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[ReadoutError] {
        &self.qubits
    }

    /// Copy with perfect readout on `slots`.
    pub fn with_identity_on(&self, slots: &[usize]) -> ConfusionModel {
        let mut out = self.clone();
        for &s in slots {
            if let Some(q) = out.qubits.get_mut(s) {
                *q = ReadoutError::PERFECT;
            }
        }
        out
    }

    fn check(&self, hist: &OutcomeHistogram) -> Result<()> {
        if hist.n_bits() != self.n_qubits() {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits(),
                found: hist.n_bits(),
            });
        }
        Ok(())
    }
}

fn dense(hist: &OutcomeHistogram) -> Vec<f64> {
    let mut v = vec![0.0; 1 << hist.n_bits()];
    for (&k, &w) in hist.entries() {
        v[k as usize] += w;
    }
    v
}

fn apply_factor(v: &mut [f64], q: usize, m: &[[f64; 2]; 2]) {
    let bit = 1usize << q;
    for i in 0..v.len() {
        if i & bit == 0 {
            let (a, b) = (v[i], v[i | bit]);
            v[i] = m[0][0] * a + m[0][1] * b;
            v[i | bit] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn rebuild(like: &OutcomeHistogram, v: &[f64], mitigated: bool) -> Result<OutcomeHistogram> {
    let entries: BTreeMap<u64, f64> = v
        .iter()
        .enumerate()
        .filter(|(_, w)| **w != 0.0)
        .map(|(k, w)| (k as u64, *w))
        .collect();
    OutcomeHistogram::from_parts(like.n_bits(), entries, like.shots(), like.seed(), mitigated)
}

/// Expected histogram after readout noise: weights multiplied by `⊗_q A_q`.
pub fn apply_readout_noise(hist: &OutcomeHistogram, model: &ConfusionModel) -> Result<OutcomeHistogram> {
    model.check(hist)?;
    let mut v = dense(hist);
    for (q, e) in model.qubits.iter().enumerate() {
        apply_factor(&mut v, q, &e.matrix());
    }
    rebuild(hist, &v, hist.is_mitigated())
}

/// Flips the bits of every recorded shot independently. Shots are visited in
/// outcome order; shot `k` draws from stream `k` of `seed`.
pub fn sample_readout_noise(hist: &OutcomeHistogram, model: &ConfusionModel, seed: u64) -> Result<OutcomeHistogram> {
    model.check(hist)?;
    if hist.is_exact() {
        return Err(Error::InvalidArgument(
            "sampled readout noise needs a shot histogram".into(),
        ));
    }
    let mut counts = BTreeMap::new();
    let mut shot = 0u64;
    for (&k, &w) in hist.entries() {
        for _ in 0..w.round() as u64 {
            let mut rng = stream(seed, shot);
            shot += 1;
            *counts.entry(flip_bits(k, model, &mut rng)).or_insert(0u64) += 1;
        }
    }
    Ok(OutcomeHistogram::from_counts(hist.n_bits(), counts, Some(seed)))
}

fn flip_bits(prepared: u64, model: &ConfusionModel, rng: &mut impl rand_core::RngCore) -> u64 {
    let mut read = prepared;
    for (q, e) in model.qubits.iter().enumerate() {
        let one = prepared >> q & 1 == 1;
        let keep = if one { e.p11 } else { e.p00 };
        if uniform(rng) >= keep {
            read ^= 1 << q;
        }
    }
    read
}

/// Applies `⊗_q A_q⁻¹` factor by factor. Negative quasi-probabilities are
/// kept; the result is flagged as mitigated.
pub fn mitigate(hist: &OutcomeHistogram, model: &ConfusionModel) -> Result<OutcomeHistogram> {
    model.check(hist)?;
    let inverses = model
        .qubits
        .iter()
        .enumerate()
        .map(|(q, e)| e.inverse(q))
        .collect::<Result<Vec<_>>>()?;
    let mut v = dense(hist);
    for (q, m) in inverses.iter().enumerate() {
        apply_factor(&mut v, q, m);
    }
    rebuild(hist, &v, true)
}

/// A device that can be asked for readouts of prepared bitstrings.
pub trait ReadoutDevice {
    fn n_qubits(&self) -> usize;

    /// `shots` readouts of computational basis state `prepared`.
    fn sample(&self, prepared: u64, shots: u64, seed: u64) -> Result<OutcomeHistogram>;
}

/// Perfect preparation followed by the readout errors of `model`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulatedDevice {
    pub model: ConfusionModel,
}

impl ReadoutDevice for SimulatedDevice {
    fn n_qubits(&self) -> usize {
        self.model.n_qubits()
    }

    fn sample(&self, prepared: u64, shots: u64, seed: u64) -> Result<OutcomeHistogram> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let mut counts = BTreeMap::new();
        for k in 0..shots {
            let mut rng = stream(seed, k);
            *counts.entry(flip_bits(prepared, &self.model, &mut rng)).or_insert(0u64) += 1;
        }
        Ok(OutcomeHistogram::from_counts(self.n_qubits(), counts, Some(seed)))
    }
}

/// The two alternating bitstrings `0101…` and `1010…` (slot 0 first).
pub fn calibration_states(n: usize) -> [u64; 2] {
    let odd: u64 = (0..n).filter(|q| q % 2 == 1).map(|q| 1u64 << q).sum();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    [odd, all & !odd]
}

/// Estimates each qubit's `p00` and `p11` from `shots` readouts of each
/// alternating bitstring. Every qubit is prepared in `0` in one state and in
/// `1` in the other.
pub fn calibrate(device: &impl ReadoutDevice, shots: u64, seed: u64) -> Result<ConfusionModel> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let n = device.n_qubits();
    let mut right = vec![[0.0f64; 2]; n];
    let mut total = vec![[0.0f64; 2]; n];
    for (i, prepared) in calibration_states(n).into_iter().enumerate() {
        let hist = device.sample(prepared, shots, derive_seed(seed, i as u64))?;
        for (&k, &w) in hist.entries() {
            for q in 0..n {
                let p = (prepared >> q & 1) as usize;
                total[q][p] += w;
                if (k >> q & 1) as usize == p {
                    right[q][p] += w;
                }
            }
        }
    }
    let qubits = (0..n)
        .map(|q| {
            let rate = |p: usize| {
                if total[q][p] > 0.0 {
                    right[q][p] / total[q][p]
                } else {
                    1.0
                }
            };
            ReadoutError::new(rate(0), rate(1))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidArgument(format!("calibration produced {e}")))?;
    Ok(ConfusionModel::new(qubits))
}
