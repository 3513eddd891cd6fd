//! Quil-style text export, one instruction per line.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;

use cohsim_core::native::NativeCounting;
use cohsim_core::{Circuit, Gate, GateKind};

use crate::angle::format_angle;

const HEADER: &str = "PRAGMA INITIAL_REWIRING \"NAIVE\"";

fn gate_line(g: &Gate) -> String {
    let qubits = g
        .qubits()
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let name = match g.kind() {
        GateKind::Crx => "CONTROLLED RX",
        k => k.name(),
    };
    match g.angle() {
        Some(a) => format!("{name}({}) {qubits}", format_angle(a)),
        None => format!("{name} {qubits}"),
    }
}

fn preamble(out: &mut String, slots: usize) {
    out.push_str(HEADER);
    out.push('\n');
    if slots > 0 {
        let _ = writeln!(out, "DECLARE ro BIT[{slots}]");
    }
}

fn body(out: &mut String, gates: &[Gate]) {
    for g in gates {
        out.push_str(&gate_line(g));
        out.push('\n');
    }
}

fn measurements(out: &mut String, circuit: &Circuit) {
    for m in circuit.measurements() {
        let _ = writeln!(out, "MEASURE {} ro[{}]", m.qubit, m.slot);
    }
}

/// Full program text for a circuit.
pub fn to_quil(circuit: &Circuit) -> String {
    let mut out = String::new();
    preamble(&mut out, circuit.n_slots());
    body(&mut out, circuit.gates());
    measurements(&mut out, circuit);
    out
}

/// Counting program with the system read out along a symbolic `theta`: the
/// system `RZ` lines carry the parameter name instead of an angle.
///
/// The parameter relates to the probe angle `θ` of [`NativeCounting::measured_circuit`]
/// by `theta = −θ − π/2`.
pub fn symbolic_counting_listing(nc: &NativeCounting) -> cohsim_core::Result<String> {
    // at θ = −π/2 the readout RZ vanishes, leaving only the RX block to copy
    let measured = nc.measured_circuit(-FRAC_PI_2)?;
    let readout = &measured.gates()[nc.circuit.gates().len()..];
    let mut out = String::new();
    preamble(&mut out, measured.n_slots());
    body(&mut out, nc.circuit.gates());
    for &q in &nc.system {
        let _ = writeln!(out, "RZ(theta) {q}");
    }
    body(&mut out, readout);
    measurements(&mut out, &measured);
    Ok(out)
}
