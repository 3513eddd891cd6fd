use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;


use num_traits::Float;

use crate::error::{Error, Result};

/// Outcome weights keyed by classical bitstring (bit `k` is slot `k`).
///
/// Sampled histograms hold integer counts and remember their shot total and
/// seed; exact histograms (`shots == 0`) hold probabilities. Mitigated
/// histograms may hold negative quasi-probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeHistogram {
    n_bits: usize,
    entries: BTreeMap<u64, f64>,
    shots: u64,
    seed: Option<u64>,
    mitigated: bool,
}

impl OutcomeHistogram {
    pub fn from_counts(n_bits: usize, counts: BTreeMap<u64, u64>, seed: Option<u64>) -> OutcomeHistogram {
        let shots = counts.values().sum();
        OutcomeHistogram {
            n_bits,
            entries: counts.into_iter().map(|(k, v)| (k, v as f64)).collect(),
            shots,
            seed,
            mitigated: false,
        }
    }

    /// Exact histogram from a dense probability vector; zero entries are
    /// dropped.
    pub fn from_probabilities(n_bits: usize, probs: &[f64]) -> Result<OutcomeHistogram> {
        if probs.len() != 1 << n_bits {
            return Err(Error::LengthMismatch {
                expected: 1 << n_bits,
                found: probs.len(),
            });
        }
        Ok(OutcomeHistogram {
            n_bits,
            entries: probs
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != 0.0)
                .map(|(i, p)| (i as u64, *p))
                .collect(),
            shots: 0,
            seed: None,
            mitigated: false,
        })
    }

    /// Raw entries, e.g. read back from a file.
    pub fn from_parts(
        n_bits: usize,
        entries: BTreeMap<u64, f64>,
        shots: u64,
        seed: Option<u64>,
        mitigated: bool,
    ) -> Result<OutcomeHistogram> {
        if let Some((&k, _)) = entries.iter().find(|(&k, _)| n_bits < 64 && k >> n_bits != 0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "outcome {k} does not fit in {n_bits} bits"
            )));
        }
        Ok(OutcomeHistogram {
            n_bits,
            entries,
            shots,
            seed,
            mitigated,
        })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn is_exact(&self) -> bool {
        self.shots == 0
    }

    pub fn is_mitigated(&self) -> bool {
        self.mitigated
    }

    pub fn entries(&self) -> &BTreeMap<u64, f64> {
        &self.entries
    }

    pub fn weight(&self, outcome: u64) -> f64 {
        self.entries.get(&outcome).copied().unwrap_or(0.0)
    }

    /// Sum of all weights (shot count, or ≈1 for probabilities).
    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Normalized probability of `outcome`.
    pub fn probability(&self, outcome: u64) -> f64 {
        self.weight(outcome) / self.total()
    }

    /// Dense probability vector of length `2^n_bits`, normalized by the total.
    pub fn to_probabilities(&self) -> Vec<f64> {
        let total = self.total();
        let mut out = vec![0.0; 1 << self.n_bits];
        for (&k, &v) in &self.entries {
            out[k as usize] = v / total;
        }
        out
    }

    /// Same histogram with weights rescaled to sum to one.
    pub fn normalized(&self) -> OutcomeHistogram {
        let total = self.total();
        OutcomeHistogram {
            entries: self.entries.iter().map(|(&k, &v)| (k, v / total)).collect(),
            shots: 0,
            ..self.clone()
        }
    }

    /// Total weight of negative entries (only possible after mitigation).
    pub fn negative_mass(&self) -> f64 {
        self.entries.values().filter(|v| **v < 0.0).sum()
    }

    /// Keeps outcomes whose listed slots carry the listed bits. Returns the
    /// accepted fraction of the total weight and the filtered histogram.
    pub fn postselect(&self, conditions: &[(usize, u8)]) -> Result<(f64, OutcomeHistogram)> {
        for &(slot, _) in conditions {
            if slot >= self.n_bits {
                return Err(Error::InvalidQubit {
                    qubit: slot,
                    n_qubits: self.n_bits,
                });
            }
        }
        let accept = |k: u64| conditions.iter().all(|&(s, b)| ((k >> s) & 1) as u8 == b);
        let entries: BTreeMap<u64, f64> = self
            .entries
            .iter()
            .filter(|(&k, _)| accept(k))
            .map(|(&k, &v)| (k, v))
            .collect();
        let kept: f64 = entries.values().sum();
        let total = self.total();
        if kept.abs() < 1e-15 * total.abs().max(1.0) {
            return Err(Error::ImpossibleBranch {
                probability: kept / total,
            });
        }
        let shots = if self.shots > 0 { kept.round() as u64 } else { 0 };
        Ok((
            kept / total,
            OutcomeHistogram {
                n_bits: self.n_bits,
                entries,
                shots,
                seed: self.seed,
                mitigated: self.mitigated,
            },
        ))
    }

    /// Normalized expectation of `f(outcome)`.
    pub fn expect(&self, f: impl Fn(u64) -> f64) -> f64 {
        let total = self.total();
        self.entries.iter().map(|(&k, &v)| v * f(k)).sum::<f64>() / total
    }

    /// Mean and second moment of the collective spin `Σ (1/2 − bit)` over the
    /// given slots.
    pub fn spin_moments(&self, slots: &[usize]) -> (f64, f64) {
        let spin = |k: u64| {
            slots
                .iter()
                .map(|&s| 0.5 - ((k >> s) & 1) as f64)
                .sum::<f64>()
        };
        (self.expect(spin), self.expect(|k| spin(k) * spin(k)))
    }
}
