//! The benchmark many-body states: coherent, dephased, projected and noisy.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{binomial, cis, wrap_angle};
use crate::rng::{stream, uniform};
use crate::state::{QuantumState, IMPOSSIBLE_BRANCH};

/// Exhaustive noisy ensembles are built up to this many qubits by default.
pub const EXHAUSTIVE_NOISY_LIMIT: usize = 12;

/// Per-qubit phases `θ_n` of a spin coherent state, stored in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseProfile(Vec<f64>);

impl PhaseProfile {
    pub fn new(thetas: Vec<f64>) -> Result<PhaseProfile> {
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("phase must be finite".into()));
        }
        Ok(PhaseProfile(thetas.into_iter().map(wrap_angle).collect()))
    }

    pub fn uniform(n: usize, theta: f64) -> PhaseProfile {
        PhaseProfile(alloc::vec![wrap_angle(theta); n])
    }

    pub fn zeros(n: usize) -> PhaseProfile {
        PhaseProfile::uniform(n, 0.0)
    }

    /// The phases produced by `RX(π/2)` acting on `|0⟩`.
    pub fn rx_frame(n: usize) -> PhaseProfile {
        PhaseProfile::uniform(n, -core::f64::consts::FRAC_PI_2)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.0
    }
}

/// Total `S_z` of a computational basis index on `n` qubits.
pub fn sz_of_index(n: usize, index: usize) -> f64 {
    n as f64 / 2.0 - index.count_ones() as f64
}

/// Number of excitations (`|1⟩` qubits) in the `S_z = sz` sector.
pub fn excitations_for_sz(n: usize, sz: f64) -> Result<usize> {
    let k = n as f64 / 2.0 - sz;
    if !(k >= -1e-9 && k <= n as f64 + 1e-9) || (k - k.round()).abs() > 1e-9 {
        return Err(Error::InvalidSector { n_qubits: n, sz });
    }
    Ok(k.round() as usize)
}

/// `⊗ₙ (|0⟩ + e^{iθₙ}|1⟩)/√2`.
pub fn prepare_coherent(n: usize, thetas: &PhaseProfile) -> Result<QuantumState> {
    if n == 0 {
        return Err(Error::InvalidArgument("coherent state needs N ≥ 1".into()));
    }
    if thetas.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: thetas.len(),
        });
    }
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let factors: Vec<[Complex64; 2]> = thetas.thetas().iter().map(|&t| [h, h * cis(t)]).collect();
    QuantumState::product(&factors)
}

/// Weight `C(n, k)/2ⁿ` of the `k`-excitation sector in any coherent state.
pub fn sector_weight(n: usize, excitations: usize) -> f64 {
    binomial(n, excitations) / (2.0f64).powi(n as i32)
}

/// Projection onto the sector with `popcount == excitations`.
pub fn project_excitations(state: &QuantumState, excitations: usize) -> Result<(f64, QuantumState)> {
    if excitations > state.n_qubits() {
        return Err(Error::InvalidSector {
            n_qubits: state.n_qubits(),
            sz: state.n_qubits() as f64 / 2.0 - excitations as f64,
        });
    }
    state.project_onto(|i| i.count_ones() as usize == excitations)
}

/// Renormalized projection onto the `S_z = sz` eigenspace and its weight.
pub fn project_sz(state: &QuantumState, sz: f64) -> Result<(f64, QuantumState)> {
    let k = excitations_for_sz(state.n_qubits(), sz)?;
    project_excitations(state, k)
}

/// Projection onto `S_z = 0`; only defined for an even number of qubits.
pub fn project_sz_zero(state: &QuantumState) -> Result<(f64, QuantumState)> {
    if !state.n_qubits().is_multiple_of(2) {
        return Err(Error::InvalidSector {
            n_qubits: state.n_qubits(),
            sz: 0.0,
        });
    }
    project_sz(state, 0.0)
}

/// Weighted list of pure states sharing one register size.
#[derive(Clone, Debug, PartialEq)]
pub struct StateEnsemble {
    members: Vec<(f64, QuantumState)>,
}

impl StateEnsemble {
    /// Validates weights (positive, summing to one within 1e-9) and rescales
    /// them to sum to one exactly.
    pub fn new(members: Vec<(f64, QuantumState)>) -> Result<StateEnsemble> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidArgument("ensemble needs at least one member".into()));
        };
        let n = first.1.n_qubits();
        let mut total = 0.0;
        for (w, s) in &members {
            if !(*w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidProbability(*w));
            }
            if s.n_qubits() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: s.n_qubits(),
                });
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(alloc::format!(
                "ensemble weights sum to {total}, not 1"
            )));
        }
        Ok(StateEnsemble {
            members: members.into_iter().map(|(w, s)| (w / total, s)).collect(),
        })
    }

    pub fn pure(state: QuantumState) -> StateEnsemble {
        StateEnsemble {
            members: alloc::vec![(1.0, state)],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.members[0].1.n_qubits()
    }

    pub fn members(&self) -> &[(f64, QuantumState)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn into_members(self) -> Vec<(f64, QuantumState)> {
        self.members
    }

    /// Weighted sum of a per-member quantity, in member order.
    pub fn average(&self, mut f: impl FnMut(&QuantumState) -> f64) -> f64 {
        self.members.iter().map(|(w, s)| w * f(s)).sum()
    }
}

impl From<QuantumState> for StateEnsemble {
    fn from(state: QuantumState) -> StateEnsemble {
        StateEnsemble::pure(state)
    }
}

/// Mixture of the `S_z` sector projections weighted by their probabilities.
/// Empty sectors are omitted; members are ordered from `S_z = N/2` down.
pub fn dephase_sz(state: &QuantumState) -> StateEnsemble {
    let mut members = Vec::new();
    for k in 0..=state.n_qubits() {
        if let Ok((p, s)) = project_excitations(state, k) {
            if p >= IMPOSSIBLE_BRANCH {
                members.push((p, s));
            }
        }
    }
    StateEnsemble::new(members).expect("sector weights of a normalized state sum to one")
}

/// Uniform mixture of coherent states sharing one random global phase per
/// member.
pub fn random_global_phase_ensemble(n: usize, n_samples: usize, seed: u64) -> Result<StateEnsemble> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
    }
    let w = 1.0 / n_samples as f64;
    let members = (0..n_samples)
        .map(|k| {
            let theta = TAU * uniform(&mut stream(seed, k as u64));
            prepare_coherent(n, &PhaseProfile::uniform(n, theta)).map(|s| (w, s))
        })
        .collect::<Result<Vec<_>>>()?;
    StateEnsemble::new(members)
}

/// How the noisy mixture over computational bitstrings is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoisyMode {
    /// Every one of the `2^N` bitstrings with weight `2^-N`.
    Exhaustive,
    /// `n_samples` bitstrings with independent fair bits per qubit.
    Sampled { n_samples: usize, seed: u64 },
}

impl NoisyMode {
    pub fn default_for(n: usize, seed: u64) -> NoisyMode {
        if n <= EXHAUSTIVE_NOISY_LIMIT {
            NoisyMode::Exhaustive
        } else {
            NoisyMode::Sampled {
                n_samples: 1 << EXHAUSTIVE_NOISY_LIMIT,
                seed,
            }
        }
    }
}

/// Each qubit independently `|0⟩` or `|1⟩` with probability one half.
pub fn prepare_noisy(n: usize, mode: NoisyMode) -> Result<StateEnsemble> {
    if n == 0 {
        return Err(Error::InvalidArgument("noisy state needs N ≥ 1".into()));
    }
    let members = match mode {
        NoisyMode::Exhaustive => {
            let w = 1.0 / (1u64 << n) as f64;
            (0..1usize << n).map(|i| (w, QuantumState::basis(n, i))).collect()
        }
        NoisyMode::Sampled { n_samples, seed } => {
            if n_samples == 0 {
                return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
            }
            let w = 1.0 / n_samples as f64;
            (0..n_samples)
                .map(|k| {
                    let mut rng = stream(seed, k as u64);
                    let index = (0..n).fold(0usize, |acc, q| {
                        acc | (usize::from(uniform(&mut rng) < 0.5) << q)
                    });
                    (w, QuantumState::basis(n, index))
                })
                .collect()
        }
    };
    StateEnsemble::new(members)
}
