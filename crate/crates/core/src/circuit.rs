use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gate::{Gate, GateKind};
use crate::state::QuantumState;

/// Terminal Z-basis measurement of `qubit` into classical bit `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Measurement {
    pub qubit: usize,
    pub slot: usize,
}

/// Ordered gate list followed by terminal measurements.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    measurements: Vec<Measurement>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            measurements: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    /// Appends a gate. A `MEASURE` gate becomes a measurement into the next
    /// free slot.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Circuit> {
        gate.check(self.n_qubits)?;
        if gate.kind() == GateKind::Measure {
            let slot = self.measurements.iter().map(|m| m.slot + 1).max().unwrap_or(0);
            return self.measure(gate.qubits()[0], slot);
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<&mut Circuit> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    pub fn measure(&mut self, qubit: usize, slot: usize) -> Result<&mut Circuit> {
        if qubit >= self.n_qubits {
            return Err(Error::InvalidQubit {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        if self.measurements.iter().any(|m| m.slot == slot) {
            return Err(Error::DuplicateSlot(slot));
        }
        if self.measurements.iter().any(|m| m.qubit == qubit) {
            return Err(Error::InvalidArgument(alloc::format!(
                "qubit {qubit} measured twice"
            )));
        }
        self.measurements.push(Measurement { qubit, slot });
        Ok(self)
    }

    pub fn clear_measurements(&mut self) {
        self.measurements.clear();
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// True when every gate belongs to the native set {RX, RZ, CPHASE, XY}.
    pub fn is_native(&self) -> bool {
        self.gates.iter().all(|g| g.kind().is_native())
    }

    /// Number of classical bits written by the measurements.
    pub fn n_slots(&self) -> usize {
        self.measurements.iter().map(|m| m.slot + 1).max().unwrap_or(0)
    }

    /// Applies the unitary part to `initial`.
    pub fn evolve(&self, initial: &QuantumState) -> Result<QuantumState> {
        if initial.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: initial.n_qubits(),
            });
        }
        let mut state = initial.clone();
        state.apply_all(&self.gates)?;
        Ok(state)
    }

    /// Unitary part applied to `|0…0⟩`.
    pub fn final_state(&self) -> Result<QuantumState> {
        self.evolve(&QuantumState::new(self.n_qubits))
    }

    /// Reversed circuit of inverse gates; measurements are dropped.
    pub fn inverse(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.n_qubits);
        for g in self.gates.iter().rev() {
            out.push(g.inverse()?)?;
        }
        Ok(out)
    }
}
