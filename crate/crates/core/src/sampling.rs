//! Exact outcome distributions and seeded shot sampling of measured circuits.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Measurement};
use crate::error::{Error, Result};
use crate::histogram::OutcomeHistogram;
use crate::rng::{sample_cdf, stream};
use crate::state::QuantumState;

/// Marginal distribution of the measured slots of `state`.
pub fn measured_probabilities(state: &QuantumState, measurements: &[Measurement]) -> Vec<f64> {
    let n_slots = measurements.iter().map(|m| m.slot + 1).max().unwrap_or(0);
    let mut out = vec![0.0; 1 << n_slots];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut key = 0usize;
        for m in measurements {
            key |= ((i >> m.qubit) & 1) << m.slot;
        }
        out[key] += p;
    }
    out
}

/// Exact outcome probabilities of a measured circuit started in `|0…0⟩`.
pub fn exact_distribution(circuit: &Circuit) -> Result<OutcomeHistogram> {
    if circuit.measurements().is_empty() {
        return Err(Error::Unmeasured);
    }
    let state = circuit.final_state()?;
    let probs = measured_probabilities(&state, circuit.measurements());
    OutcomeHistogram::from_probabilities(circuit.n_slots(), &probs)
}

/// Draws `n_shots` outcomes from a dense distribution. Shot `k` uses stream
/// `k` of `seed`.
pub fn sample_probabilities(n_bits: usize, probs: &[f64], n_shots: u64, seed: u64) -> Result<OutcomeHistogram> {
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut acc = 0.0;
    let cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p.max(0.0);
            acc
        })
        .collect();
    let mut counts = BTreeMap::new();
    for shot in 0..n_shots {
        let mut rng = stream(seed, shot);
        let k = sample_cdf(&cdf, &mut rng) as u64;
        *counts.entry(k).or_insert(0u64) += 1;
    }
    Ok(OutcomeHistogram::from_counts(n_bits, counts, Some(seed)))
}

/// Samples a measured circuit started in `|0…0⟩`.
pub fn sample_shots(circuit: &Circuit, n_shots: u64, seed: u64) -> Result<OutcomeHistogram> {
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let exact = exact_distribution(circuit)?;
    sample_probabilities(exact.n_bits(), &exact.to_probabilities(), n_shots, seed)
}

/// Samples the measurements of `circuit` applied to an arbitrary input state.
pub fn sample_from_state(
    state: &QuantumState,
    circuit: &Circuit,
    n_shots: u64,
    seed: u64,
) -> Result<OutcomeHistogram> {
    if circuit.measurements().is_empty() {
        return Err(Error::Unmeasured);
    }
    let out = circuit.evolve(state)?;
    let probs = measured_probabilities(&out, circuit.measurements());
    sample_probabilities(circuit.n_slots(), &probs, n_shots, seed)
}
