//! JSON shapes for circuits, states, ensembles, confusion models and
//! histograms, with conversions to and from the core types.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use cohsim_core::mitigation::{ConfusionModel, ReadoutError};
use cohsim_core::{Circuit, Complex64, Gate, GateKind, OutcomeHistogram, QuantumState, StateEnsemble};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateDto {
    pub kind: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementDto {
    pub qubit: usize,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitDto {
    pub n_qubits: usize,
    pub gates: Vec<GateDto>,
    #[serde(default)]
    pub measurements: Vec<MeasurementDto>,
}

impl From<&Circuit> for CircuitDto {
    fn from(c: &Circuit) -> Self {
        CircuitDto {
            n_qubits: c.n_qubits(),
            gates: c
                .gates()
                .iter()
                .map(|g| GateDto {
                    kind: g.kind().name().to_string(),
                    qubits: g.qubits().to_vec(),
                    angle: g.angle(),
                })
                .collect(),
            measurements: c
                .measurements()
                .iter()
                .map(|m| MeasurementDto {
                    qubit: m.qubit,
                    slot: m.slot,
                })
                .collect(),
        }
    }
}

impl CircuitDto {
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.n_qubits);
        for (i, g) in self.gates.iter().enumerate() {
            let kind = GateKind::from_name(&g.kind).ok_or_else(|| anyhow!("gates[{i}]: unknown kind {:?}", g.kind))?;
            let gate = Gate::new(kind, &g.qubits, g.angle).with_context(|| format!("gates[{i}]"))?;
            c.push(gate).with_context(|| format!("gates[{i}]"))?;
        }
        for (i, m) in self.measurements.iter().enumerate() {
            c.measure(m.qubit, m.slot).with_context(|| format!("measurements[{i}]"))?;
        }
        Ok(c)
    }
}

/// Amplitudes as `[re, im]` pairs, index bit `q` being qubit `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDto {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&QuantumState> for StateDto {
    fn from(s: &QuantumState) -> Self {
        StateDto {
            n_qubits: s.n_qubits(),
            amplitudes: s.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl StateDto {
    pub fn to_state(&self) -> Result<QuantumState> {
        if self.amplitudes.len() != 1 << self.n_qubits {
            bail!(
                "amplitudes: expected {} entries for {} qubits, found {}",
                1usize << self.n_qubits,
                self.n_qubits,
                self.amplitudes.len()
            );
        }
        let amps = self.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        Ok(QuantumState::from_amplitudes(amps)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberDto {
    pub weight: f64,
    #[serde(flatten)]
    pub state: StateDto,
}

/// Weighted list of pure states; a single pure state is a one-member list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleDto {
    pub n_qubits: usize,
    pub members: Vec<MemberDto>,
}

impl From<&StateEnsemble> for EnsembleDto {
    fn from(e: &StateEnsemble) -> Self {
        EnsembleDto {
            n_qubits: e.n_qubits(),
            members: e
                .members()
                .iter()
                .map(|(w, s)| MemberDto {
                    weight: *w,
                    state: s.into(),
                })
                .collect(),
        }
    }
}

impl EnsembleDto {
    pub fn to_ensemble(&self) -> Result<StateEnsemble> {
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let s = m.state.to_state().with_context(|| format!("members[{i}]"))?;
                if s.n_qubits() != self.n_qubits {
                    bail!("members[{i}]: {} qubits, ensemble has {}", s.n_qubits(), self.n_qubits);
                }
                Ok((m.weight, s))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StateEnsemble::new(members)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadoutDto {
    pub p00: f64,
    pub p11: f64,
}

/// `{qubit: {p00, p11}}`, keyed by slot index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConfusionDto(pub BTreeMap<usize, ReadoutDto>);

impl From<&ConfusionModel> for ConfusionDto {
    fn from(m: &ConfusionModel) -> Self {
        ConfusionDto(
            m.qubits()
                .iter()
                .enumerate()
                .map(|(q, e)| (q, ReadoutDto { p00: e.p00, p11: e.p11 }))
                .collect(),
        )
    }
}

impl ConfusionDto {
    pub fn to_model(&self) -> Result<ConfusionModel> {
        let n = self.0.len();
        let mut qubits = Vec::with_capacity(n);
        for q in 0..n {
            let e = self.0.get(&q).ok_or_else(|| anyhow!("confusion model: slot {q} missing"))?;
            qubits.push(ReadoutError::new(e.p00, e.p11).with_context(|| format!("confusion model: slot {q}"))?);
        }
        Ok(ConfusionModel::new(qubits))
    }
}

/// Outcome weights keyed by bitstring, slot 0 rightmost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramDto {
    pub n_bits: usize,
    /// Shot total; zero for exact probabilities.
    pub shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mitigated: bool,
    pub counts: BTreeMap<String, f64>,
}

pub fn bitstring(outcome: u64, n_bits: usize) -> String {
    (0..n_bits)
        .rev()
        .map(|b| if outcome >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl From<&OutcomeHistogram> for HistogramDto {
    fn from(h: &OutcomeHistogram) -> Self {
        HistogramDto {
            n_bits: h.n_bits(),
            shots: h.shots(),
            seed: h.seed(),
            mitigated: h.is_mitigated(),
            counts: h.entries().iter().map(|(&k, &v)| (bitstring(k, h.n_bits()), v)).collect(),
        }
    }
}

impl HistogramDto {
    pub fn to_histogram(&self) -> Result<OutcomeHistogram> {
        let mut entries = BTreeMap::new();
        for (key, &w) in &self.counts {
            if key.len() != self.n_bits || !key.chars().all(|c| c == '0' || c == '1') {
                bail!("counts: key {key:?} is not a {}-bit string", self.n_bits);
            }
            let k = u64::from_str_radix(key, 2).with_context(|| format!("counts: key {key:?}"))?;
            entries.insert(k, w);
        }
        Ok(OutcomeHistogram::from_parts(
            self.n_bits,
            entries,
            self.shots,
            self.seed,
            self.mitigated,
        )?)
    }
}
