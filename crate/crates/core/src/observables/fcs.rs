use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};


use num_traits::Float;

use crate::error::{Error, Result};
use crate::native::s_theta_measurement;
use crate::rng::{sample_cdf, stream};
use crate::sampling::measured_probabilities;
use crate::state::QuantumState;
use crate::states::StateEnsemble;

pub const DEFAULT_THETA_POINTS: usize = 64;

/// `M` uniformly spaced angles `2πj/M`.
pub fn default_theta_grid(points: usize) -> Vec<f64> {
    (0..points).map(|j| TAU * j as f64 / points as f64).collect()
}

/// `P(S_θ = v | θ)` on a grid of probe angles.
///
/// Column `j` belongs to `thetas[j]`; entry `m` of a column is the
/// probability of outcome `v = m − N/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct FcsDistribution {
    n_qubits: usize,
    thetas: Vec<f64>,
    probs: Vec<Vec<f64>>,
}

impl FcsDistribution {
    pub fn new(n_qubits: usize, thetas: Vec<f64>, probs: Vec<Vec<f64>>) -> Result<FcsDistribution> {
        if probs.len() != thetas.len() {
            return Err(Error::LengthMismatch {
                expected: thetas.len(),
                found: probs.len(),
            });
        }
        if let Some(col) = probs.iter().find(|c| c.len() != n_qubits + 1) {
            return Err(Error::LengthMismatch {
                expected: n_qubits + 1,
                found: col.len(),
            });
        }
        Ok(FcsDistribution {
            n_qubits,
            thetas,
            probs,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Outcome values `−N/2, …, N/2`.
    pub fn values(&self) -> Vec<f64> {
        (0..=self.n_qubits)
            .map(|m| m as f64 - self.n_qubits as f64 / 2.0)
            .collect()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.probs[j]
    }

    /// Probability of outcome `value` in column `j`.
    pub fn prob(&self, j: usize, value: f64) -> f64 {
        let m = value + self.n_qubits as f64 / 2.0;
        if (m - m.round()).abs() > 1e-9 || m < -0.5 || m > self.n_qubits as f64 + 0.5 {
            return 0.0;
        }
        self.probs[j][m.round() as usize]
    }

    /// `⟨S_θ⟩` and `⟨S_θ²⟩` for column `j`.
    pub fn moments(&self, j: usize) -> (f64, f64) {
        let values = self.values();
        let col = &self.probs[j];
        let mean = col.iter().zip(&values).map(|(p, v)| p * v).sum();
        let sq = col.iter().zip(&values).map(|(p, v)| p * v * v).sum();
        (mean, sq)
    }

    /// Largest entry-wise difference between any column and the first.
    pub fn max_column_deviation(&self) -> f64 {
        let first = &self.probs[0];
        self.probs
            .iter()
            .flat_map(|c| c.iter().zip(first).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

/// Distribution of the number of `1` outcomes after the `S_θ` basis change.
fn popcount_distribution(state: &QuantumState, theta: f64) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    let circuit = s_theta_measurement(n, &(0..n).collect::<Vec<_>>(), theta)?;
    if let Some(index) = state.as_basis_state() {
        // product input: Poisson-binomial over per-qubit outcome probabilities
        let mut dist = vec![0.0; n + 1];
        dist[0] = 1.0;
        for q in 0..n {
            let bit = (index >> q) & 1;
            let single = single_qubit_one_probability(theta, bit)?;
            for k in (0..=q + 1).rev() {
                let stay = dist[k] * (1.0 - single);
                let from = if k > 0 { dist[k - 1] * single } else { 0.0 };
                dist[k] = stay + from;
            }
        }
        return Ok(dist);
    }
    let out = circuit.evolve(state)?;
    let probs = measured_probabilities(&out, circuit.measurements());
    let mut dist = vec![0.0; n + 1];
    for (i, p) in probs.iter().enumerate() {
        dist[i.count_ones() as usize] += p;
    }
    Ok(dist)
}

fn single_qubit_one_probability(theta: f64, bit: usize) -> Result<f64> {
    let c = s_theta_measurement(1, &[0], theta)?;
    let out = c.evolve(&QuantumState::basis(1, bit))?;
    Ok(out.amplitude(1).norm_sqr())
}

/// Exact `P(S_θ = v)` of an ensemble at one probe angle, indexed by
/// `m = v + N/2`.
pub fn fcs_column(ensemble: &StateEnsemble, theta: f64) -> Result<Vec<f64>> {
    let n = ensemble.n_qubits();
    let mut col = vec![0.0; n + 1];
    for (w, s) in ensemble.members() {
        let dist = popcount_distribution(s, theta)?;
        // k excitations ↔ value N/2 − k ↔ m = N − k
        for (k, p) in dist.iter().enumerate() {
            col[n - k] += w * p;
        }
    }
    Ok(col)
}

/// Exact full counting statistics of `S_θ` over a grid of probe angles.
pub fn fcs_s_theta(ensemble: &StateEnsemble, thetas: &[f64]) -> Result<FcsDistribution> {
    let probs = thetas
        .iter()
        .map(|&t| fcs_column(ensemble, t))
        .collect::<Result<Vec<_>>>()?;
    FcsDistribution::new(ensemble.n_qubits(), thetas.to_vec(), probs)
}

/// Shot-sampled full counting statistics. Each shot picks an ensemble member
/// by weight and then a measurement outcome; column `j`, shot `k` draws from
/// stream `j·shots + k` of `seed`.
pub fn fcs_shots(ensemble: &StateEnsemble, thetas: &[f64], shots: u64, seed: u64) -> Result<FcsDistribution> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let n = ensemble.n_qubits();
    let mut acc = 0.0;
    let member_cdf: Vec<f64> = ensemble
        .members()
        .iter()
        .map(|(w, _)| {
            acc += w;
            acc
        })
        .collect();
    let mut probs = Vec::with_capacity(thetas.len());
    for (j, &theta) in thetas.iter().enumerate() {
        let cdfs: Vec<Vec<f64>> = ensemble
            .members()
            .iter()
            .map(|(_, s)| {
                popcount_distribution(s, theta).map(|d| {
                    let mut c = 0.0;
                    d.iter()
                        .map(|p| {
                            c += p;
                            c
                        })
                        .collect()
                })
            })
            .collect::<Result<_>>()?;
        let mut counts = vec![0u64; n + 1];
        for k in 0..shots {
            let mut rng = stream(seed, j as u64 * shots + k);
            let member = sample_cdf(&member_cdf, &mut rng);
            let excitations = sample_cdf(&cdfs[member], &mut rng);
            counts[n - excitations] += 1;
        }
        probs.push(counts.iter().map(|&c| c as f64 / shots as f64).collect());
    }
    FcsDistribution::new(n, thetas.to_vec(), probs)
}

/// `C_N⁽²⁾ = π⁻¹ ∫₀^{2π} ⟨S_θ²⟩ dθ / N²`, as a Riemann sum over a uniform
/// grid. Exact for grids of three or more points.
pub fn c2_from_fcs(fcs: &FcsDistribution) -> Result<f64> {
    let m = fcs.thetas.len();
    if m == 0 {
        return Err(Error::NonUniformGrid);
    }
    let step = TAU / m as f64;
    let offset = fcs.thetas[0];
    if !(offset > -1e-9 && offset < step - 1e-9) {
        return Err(Error::NonUniformGrid);
    }
    for (j, t) in fcs.thetas.iter().enumerate() {
        if (t - offset - step * j as f64).abs() > 1e-9 {
            return Err(Error::NonUniformGrid);
        }
    }
    let n = fcs.n_qubits as f64;
    let sum: f64 = (0..m).map(|j| fcs.moments(j).1).sum();
    Ok(sum * step / (PI * n * n))
}

/// Probability mass on even and on odd `S_θ` outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityReport {
    pub thetas: Vec<f64>,
    pub even: Vec<f64>,
    pub odd: Vec<f64>,
    /// Column averages.
    pub even_total: f64,
    pub odd_total: f64,
}

impl ParityReport {
    pub fn max_even(&self) -> f64 {
        self.even.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_even(&self) -> f64 {
        self.even.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Even/odd outcome mass per probe angle. Needs integer outcomes (even `N`).
pub fn selection_rule_report(fcs: &FcsDistribution) -> Result<ParityReport> {
    let n = fcs.n_qubits;
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "parity report needs integer S_θ outcomes (even N)".into(),
        ));
    }
    let half = n / 2;
    let mut even = Vec::with_capacity(fcs.probs.len());
    let mut odd = Vec::with_capacity(fcs.probs.len());
    for col in &fcs.probs {
        let (mut e, mut o) = (0.0, 0.0);
        for (m, p) in col.iter().enumerate() {
            // v = m − N/2
            if (m + half).is_multiple_of(2) {
                e += p;
            } else {
                o += p;
            }
        }
        even.push(e);
        odd.push(o);
    }
    let cols = even.len().max(1) as f64;
    Ok(ParityReport {
        thetas: fcs.thetas.clone(),
        even_total: even.iter().sum::<f64>() / cols,
        odd_total: odd.iter().sum::<f64>() / cols,
        even,
        odd,
    })
}
