//! Lowering of the counting protocol to the native gate set
//! {RX, RZ, CPHASE, XY}.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

use crate::circuit::Circuit;
use crate::counting::{CountingPlan, Layout};
use crate::equiv::{unitary_equiv, EquivClass};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::math::{cis, wrap_signed, ZERO};
use crate::state::QuantumState;
use crate::states::PhaseProfile;

/// Single-qubit `RZ` angles and a global phase attached to a rewrite.
///
/// A correction `c` relates two unitaries as `U = e^{iγ} (⊗_q RZ(α_q)) V`.
/// Angles are kept in `(−π, π]`; the `4π` periodicity of `RZ` is folded into
/// the global phase.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCorrection {
    rz: Vec<f64>,
    global_phase: f64,
}

impl LocalCorrection {
    pub fn new(rz: Vec<f64>, global_phase: f64) -> Result<LocalCorrection> {
        if let Some(bad) = rz.iter().chain([&global_phase]).find(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite correction angle {bad}")));
        }
        Ok(LocalCorrection::from_parts(rz, global_phase))
    }

    pub(crate) fn from_parts(rz: Vec<f64>, global_phase: f64) -> LocalCorrection {
        let mut phase = global_phase;
        let rz = rz
            .into_iter()
            .map(|a| {
                let w = wrap_signed(a);
                let turns = ((a - w) / TAU).round() as i64;
                if turns % 2 != 0 {
                    phase += PI;
                }
                w
            })
            .collect();
        LocalCorrection {
            rz,
            global_phase: wrap_signed(phase),
        }
    }

    pub fn identity(n_qubits: usize) -> LocalCorrection {
        LocalCorrection {
            rz: vec![0.0; n_qubits],
            global_phase: 0.0,
        }
    }

    pub fn rz(&self) -> &[f64] {
        &self.rz
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn n_qubits(&self) -> usize {
        self.rz.len()
    }

    pub fn inverse(&self) -> LocalCorrection {
        LocalCorrection::from_parts(self.rz.iter().map(|a| -a).collect(), -self.global_phase)
    }

    /// `RZ` gates realizing the correction on `qubits` (zero angles dropped).
    pub fn gates(&self, qubits: &[usize]) -> Vec<Gate> {
        self.rz
            .iter()
            .zip(qubits)
            .filter(|(a, _)| **a != 0.0)
            .map(|(&a, &q)| Gate::rz(q, a))
            .collect()
    }
}

/// `RZ` angles on (first, second) qubit completing the fused `CPHASE·SWAP`
/// rewrite. They do not depend on `φ`.
pub const FUSED_RZ: [f64; 2] = [-FRAC_PI_2, -FRAC_PI_2];
/// Global phase of the fused rewrite.
pub const FUSED_GLOBAL_PHASE: f64 = -FRAC_PI_2;

/// `CPHASE(φ)·SWAP` expressed as `CPHASE(π+φ)` and `XY(π)` on qubits 0 and 1,
/// with the local correction that closes the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct FusedPair {
    pub cphase: Gate,
    pub xy: Gate,
    pub correction: LocalCorrection,
}

impl FusedPair {
    /// Full native sequence on `(a, b)`: corrections, then the entangling pair.
    pub fn gates_on(&self, a: usize, b: usize) -> Vec<Gate> {
        let map = |q: usize| if q == 0 { a } else { b };
        let mut out = self.correction.gates(&[a, b]);
        out.push(self.cphase.remap(map));
        out.push(self.xy.remap(map));
        out
    }
}

fn two_qubit(gates: &[Gate]) -> Result<Circuit> {
    let mut c = Circuit::new(2);
    c.extend(gates.iter().copied())?;
    Ok(c)
}

/// Tolerance for the fused and CRX rewrites.
const REWRITE_TOLERANCE: f64 = 1e-12;

pub fn fuse_cphase_swap(phi: f64) -> Result<FusedPair> {
    let pair = FusedPair {
        cphase: Gate::cphase(0, 1, PI + phi),
        xy: Gate::xy(0, 1, PI),
        correction: LocalCorrection::from_parts(FUSED_RZ.to_vec(), FUSED_GLOBAL_PHASE),
    };
    let target = two_qubit(&[Gate::cphase(0, 1, phi), Gate::swap(0, 1)])?;
    let native = two_qubit(&pair.gates_on(0, 1))?;
    let distance = global_phase_distance(&native, &target, pair.correction.global_phase())?;
    if !(distance < REWRITE_TOLERANCE) {
        return Err(Error::CorrectionSolve { distance });
    }
    Ok(pair)
}

/// Max entry of `|e^{iγ} U_a − U_b|`.
fn global_phase_distance(a: &Circuit, b: &Circuit, gamma: f64) -> Result<f64> {
    let phase = cis(gamma);
    let mut worst = 0.0f64;
    for j in 0..1usize << a.n_qubits() {
        let basis = QuantumState::basis(a.n_qubits(), j);
        let ua = a.evolve(&basis)?;
        let ub = b.evolve(&basis)?;
        for (x, y) in ua.amplitudes().iter().zip(ub.amplitudes()) {
            worst = worst.max((x * phase - y).norm());
        }
    }
    Ok(worst)
}

/// Native replacement for the `CRX`-based coupling of a system qubit (0) to an
/// ancilla (1) that starts in `|0⟩` and is read out in `Z`:
/// `CRX(φ)[0→1]` followed by `RX(−φ/2)` on the ancilla.
#[derive(Clone, Debug, PartialEq)]
pub struct CrxLowering {
    /// Ancilla rotation into the XY plane.
    pub prep: Vec<Gate>,
    pub coupling: Vec<Gate>,
    /// Ancilla rotation back from the X basis before the Z readout.
    pub readout: Vec<Gate>,
    /// System-qubit correction: for each ancilla outcome, the native branch
    /// equals `RZ(α)` applied to the `CRX` branch, up to a phase. The global
    /// phase stored is the one of outcome `0`.
    pub correction: LocalCorrection,
}

impl CrxLowering {
    pub fn gates(&self) -> Vec<Gate> {
        let mut out = self.prep.clone();
        out.extend(&self.coupling);
        out.extend(&self.readout);
        out
    }
}

/// The abstract coupling that [`lower_crx`] replaces.
pub fn crx_coupling(phi: f64) -> Vec<Gate> {
    vec![Gate::crx(0, 1, phi), Gate::rx(1, -phi / 2.0)]
}

/// Ancilla-outcome branches `A[m][b]`: amplitude of ancilla outcome `m` for
/// system input `|b⟩` (ancilla starting in `|0⟩`), with the system output
/// kept as a two-entry vector.
fn branches(gates: &[Gate]) -> Result<[[[Complex64; 2]; 2]; 2]> {
    let c = two_qubit(gates)?;
    let mut out = [[[ZERO; 2]; 2]; 2];
    for b in 0..2 {
        let s = c.evolve(&QuantumState::basis(2, b))?;
        for m in 0..2 {
            for out_b in 0..2 {
                out[m][b][out_b] = s.amplitude(out_b | m << 1);
            }
        }
    }
    Ok(out)
}

pub fn lower_crx(phi: f64) -> Result<CrxLowering> {
    let lowering = CrxLowering {
        prep: vec![Gate::rx(1, FRAC_PI_2)],
        coupling: vec![Gate::rz(1, -phi / 2.0), Gate::cphase(0, 1, phi)],
        readout: vec![Gate::rx(1, -FRAC_PI_2)],
        correction: LocalCorrection::identity(1),
    };
    let native = branches(&lowering.gates())?;
    let abstract_ = branches(&crx_coupling(phi))?;

    // The coupling is diagonal in the system qubit, so only the diagonal
    // entries are populated; r[m][b] = native/abstract phase.
    let r = |m: usize, b: usize| native[m][b][b] * abstract_[m][b][b].conj();
    let acc: Complex64 = (0..2).map(|m| r(m, 1) * r(m, 0).conj()).sum();
    let alpha = acc.arg();
    let correction_for = |m: usize| {
        let g: Complex64 = (0..2).map(|b| r(m, b) * cis(if b == 1 { -alpha / 2.0 } else { alpha / 2.0 })).sum();
        g.arg()
    };
    let mut distance = 0.0f64;
    for m in 0..2 {
        let gamma = correction_for(m);
        for b in 0..2 {
            let sign = if b == 1 { 0.5 } else { -0.5 };
            for out_b in 0..2 {
                let expected = abstract_[m][b][out_b] * cis(gamma + sign * alpha);
                distance = distance.max((native[m][b][out_b] - expected).norm());
            }
        }
    }
    if !(distance < REWRITE_TOLERANCE) {
        return Err(Error::CorrectionSolve { distance });
    }
    Ok(CrxLowering {
        correction: LocalCorrection::from_parts(vec![alpha], correction_for(0)),
        ..lowering
    })
}

/// Basis change that maps `S_θ = cos θ S_x + sin θ S_y` onto `S_z` for the
/// given qubits; reading `0` afterwards means spin `+1/2` along `θ`.
pub fn basis_change_gates(qubits: &[usize], theta: f64) -> Vec<Gate> {
    let rz = wrap_signed(-theta - FRAC_PI_2);
    let mut out: Vec<Gate> = qubits.iter().filter(|_| rz != 0.0).map(|&q| Gate::rz(q, rz)).collect();
    out.extend(qubits.iter().map(|&q| Gate::rx(q, -FRAC_PI_2)));
    out
}

/// Appends the `S_θ` basis change and a readout of `qubits` (qubit `qubits[i]`
/// into slot `i`) to a copy of `circuit`.
pub fn with_s_theta_readout(circuit: &Circuit, qubits: &[usize], theta: f64) -> Result<Circuit> {
    let mut out = circuit.clone();
    out.clear_measurements();
    out.extend(basis_change_gates(qubits, theta))?;
    for (slot, &q) in qubits.iter().enumerate() {
        out.measure(q, slot)?;
    }
    Ok(out)
}

/// Bare `S_θ` readout circuit on an `n`-qubit register.
pub fn s_theta_measurement(n: usize, qubits: &[usize], theta: f64) -> Result<Circuit> {
    with_s_theta_readout(&Circuit::new(n), qubits, theta)
}

/// A counting circuit compiled for a linear chain.
///
/// `circuit` holds state preparation and all couplings; the ancilla readout
/// rotation and the system basis change are added by
/// [`NativeCounting::measured_circuit`].
#[derive(Clone, Debug, PartialEq)]
pub struct NativeCounting {
    pub circuit: Circuit,
    /// Final physical position of each system qubit.
    pub system: Vec<usize>,
    /// Final physical position of each ancilla.
    pub ancillas: Vec<usize>,
    /// Initial physical position of system qubits followed by ancillas.
    pub initial_layout: Vec<usize>,
}

impl NativeCounting {
    pub fn two_qubit_count(&self) -> usize {
        self.circuit.two_qubit_count()
    }

    /// Preparation, couplings and the ancilla readout rotation.
    pub fn unitary_circuit(&self) -> Result<Circuit> {
        let mut c = self.circuit.clone();
        c.extend(self.ancillas.iter().map(|&q| Gate::rx(q, -FRAC_PI_2)))?;
        Ok(c)
    }

    /// Full program measuring `S_θ` on the system: system `i` into slot `i`,
    /// ancilla `a` into slot `N + a`.
    pub fn measured_circuit(&self, theta: f64) -> Result<Circuit> {
        let mut c = self.circuit.clone();
        let rz = wrap_signed(-theta - FRAC_PI_2);
        if rz != 0.0 {
            c.extend(self.system.iter().map(|&q| Gate::rz(q, rz)))?;
        }
        c.extend(self.system.iter().map(|&q| Gate::rx(q, -FRAC_PI_2)))?;
        c.extend(self.ancillas.iter().map(|&q| Gate::rx(q, -FRAC_PI_2)))?;
        let n = self.system.len();
        for (i, &q) in self.system.iter().enumerate() {
            c.measure(q, i)?;
        }
        for (a, &q) in self.ancillas.iter().enumerate() {
            c.measure(q, n + a)?;
        }
        Ok(c)
    }
}

/// `2(N·N_a − 1)` two-qubit gates for `coupled` system qubits. A lone
/// coupling still needs its CPHASE, so a single interaction costs one gate.
pub fn gate_budget(coupled: usize, n_ancillas: usize) -> usize {
    match coupled * n_ancillas {
        0 => 0,
        1 => 1,
        m => 2 * (m - 1),
    }
}

fn first_op_is_fused(plan: &CountingPlan, coupled: usize) -> Result<Vec<bool>> {
    let schedule = plan.schedule(coupled)?;
    let mut first = vec![None; plan.n_system()];
    for op in &schedule.ops {
        first[op.system].get_or_insert(op.swap);
    }
    Ok(first.into_iter().map(|f| f.unwrap_or(false)).collect())
}

fn prep_rz(theta: f64, fused_first: bool) -> f64 {
    let shift = if fused_first { FUSED_RZ[0] } else { 0.0 };
    let a = wrap_signed(theta + FRAC_PI_2 + shift);
    if a.abs() < 1e-12 {
        0.0
    } else {
        a
    }
}

/// Phase profile for which the compiled program needs no system `RZ` in its
/// preparation block.
pub fn bare_prep_profile(plan: &CountingPlan, coupled: usize) -> Result<PhaseProfile> {
    let fused = first_op_is_fused(plan, coupled)?;
    PhaseProfile::new(
        fused
            .iter()
            .map(|&f| -FRAC_PI_2 - if f { FUSED_RZ[0] } else { 0.0 })
            .collect(),
    )
}

/// Compiles the counting protocol with every system qubit coupled.
pub fn compile_counting(plan: &CountingPlan, profile: &PhaseProfile) -> Result<NativeCounting> {
    compile_counting_staged(plan, profile, plan.n_system())
}

/// Compiles the counting protocol with the first `coupled` system qubits
/// coupled to the ancillas.
///
/// Interactions are nearest-neighbour on a chain. Each one is `RZ(−φ/2)` on
/// the ancilla plus `CPHASE(φ)`; all but the first and last are followed by a
/// SWAP, which is fused into `CPHASE(π+φ)·XY(π)`. The fused corrections on the
/// ancilla merge with its coupling `RZ`; a system qubit's first correction
/// merges into its preparation.
pub fn compile_counting_staged(plan: &CountingPlan, profile: &PhaseProfile, coupled: usize) -> Result<NativeCounting> {
    if plan.layout() != Layout::LinearChain {
        return Err(Error::InvalidPlan("native compilation needs a linear-chain plan".into()));
    }
    let n = plan.n_system();
    if profile.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: profile.len(),
        });
    }
    let schedule = plan.schedule(coupled)?;
    let fused_first = first_op_is_fused(plan, coupled)?;
    let fused: Vec<FusedPair> = plan
        .phis()
        .iter()
        .map(|&phi| fuse_cphase_swap(phi))
        .collect::<Result<_>>()?;

    let mut c = Circuit::new(plan.total_qubits());
    for (i, &theta) in profile.thetas().iter().enumerate() {
        let q = schedule.initial[i];
        c.push(Gate::rx(q, FRAC_PI_2))?;
        let rz = prep_rz(theta, fused_first[i]);
        if rz != 0.0 {
            c.push(Gate::rz(q, rz))?;
        }
    }
    for a in 0..plan.n_ancillas() {
        c.push(Gate::rx(schedule.initial[n + a], FRAC_PI_2))?;
    }

    let mut corrected = vec![false; n];
    for op in &schedule.ops {
        let phi = plan.phis()[op.ancilla];
        let (s, a) = (op.phys_system, op.phys_ancilla);
        if op.swap {
            let pair = &fused[op.ancilla];
            let [cs, ca] = [pair.correction.rz()[0], pair.correction.rz()[1]];
            c.push(Gate::rz(a, -phi / 2.0 + ca))?;
            if corrected[op.system] && cs != 0.0 {
                c.push(Gate::rz(s, cs))?;
            }
            corrected[op.system] = true;
            let map = |q: usize| if q == 0 { s } else { a };
            c.push(pair.cphase.remap(map))?;
            c.push(pair.xy.remap(map))?;
        } else {
            c.push(Gate::rz(a, -phi / 2.0))?;
            c.push(Gate::cphase(s, a, phi))?;
            corrected[op.system] = true;
        }
    }

    let budget = gate_budget(coupled, plan.n_ancillas());
    let found = c.two_qubit_count();
    if found > budget {
        return Err(Error::BudgetExceeded { budget, found });
    }
    Ok(NativeCounting {
        circuit: c,
        system: schedule.final_positions[..n].to_vec(),
        ancillas: schedule.final_positions[n..].to_vec(),
        initial_layout: schedule.initial,
    })
}

/// Exact check of the fused rewrite against `CPHASE(φ)·SWAP` modulo a global
/// phase.
pub fn verify_fused(phi: f64) -> Result<f64> {
    let pair = fuse_cphase_swap(phi)?;
    let target = two_qubit(&[Gate::cphase(0, 1, phi), Gate::swap(0, 1)])?;
    let native = two_qubit(&pair.gates_on(0, 1))?;
    Ok(unitary_equiv(&native, &target, EquivClass::GlobalPhase)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::equivalence;

    #[test]
    fn fused_identity_holds_for_many_angles() {
        for phi in [0.0, 0.3, FRAC_PI_2, 1.7, 2.9, PI, -2.2] {
            assert!(verify_fused(phi).unwrap() < 1e-12, "phi = {phi}");
        }
    }

    #[test]
    fn fused_corrections_match_a_fresh_fit() {
        let phi = 0.8;
        let bare = two_qubit(&[Gate::cphase(0, 1, PI + phi), Gate::xy(0, 1, PI)]).unwrap();
        let target = two_qubit(&[Gate::cphase(0, 1, phi), Gate::swap(0, 1)]).unwrap();
        let e = equivalence(&bare, &target, EquivClass::LocalRzGlobalPhase).unwrap();
        assert!(e.equivalent);
        for (a, b) in e.correction.rz().iter().zip(FUSED_RZ) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((e.correction.global_phase() - FUSED_GLOBAL_PHASE).abs() < 1e-9);
    }

    #[test]
    fn correction_normalization_keeps_the_operator() {
        let c = LocalCorrection::new(vec![3.0 * FRAC_PI_2], 0.0).unwrap();
        assert!((c.rz()[0] + FRAC_PI_2).abs() < 1e-12);
        assert!((c.global_phase() - PI).abs() < 1e-12);
        assert!(LocalCorrection::new(vec![f64::NAN], 0.0).is_err());
    }

    #[test]
    fn crx_lowering_closes() {
        for phi in [0.0, 0.4, FRAC_PI_2, PI, 2.0 * PI] {
            let l = lower_crx(phi).unwrap();
            assert!(l.gates().iter().all(|g| g.kind().is_native()));
            assert!((l.correction.rz()[0] - wrap_signed(phi / 2.0)).abs() < 1e-9, "phi = {phi}");
        }
    }

    #[test]
    fn basis_change_reads_coherent_direction() {
        for theta in [0.0, 0.9, -2.0] {
            let mut s = QuantumState::new(1);
            s.apply(&Gate::h(0)).unwrap();
            s.apply(&Gate::rz(0, theta)).unwrap();
            s.apply_all(&basis_change_gates(&[0], theta)).unwrap();
            assert!((s.amplitude(0).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    fn gate_list(c: &Circuit) -> Vec<(crate::gate::GateKind, Vec<usize>, Option<f64>)> {
        c.gates().iter().map(|g| (g.kind(), g.qubits().to_vec(), g.angle())).collect()
    }

    #[test]
    fn bare_profile_program_for_four_qubits() {
        use crate::gate::GateKind::*;
        let plan = CountingPlan::with_phis(4, vec![FRAC_PI_2], Layout::LinearChain).unwrap();
        let profile = bare_prep_profile(&plan, 4).unwrap();
        let nc = compile_counting(&plan, &profile).unwrap();
        let q = FRAC_PI_2;
        let expected = vec![
            (Rx, vec![0], Some(q)),
            (Rx, vec![2], Some(q)),
            (Rx, vec![3], Some(q)),
            (Rx, vec![4], Some(q)),
            (Rx, vec![1], Some(q)),
            (Rz, vec![1], Some(-PI / 4.0)),
            (Cphase, vec![0, 1], Some(q)),
            (Rz, vec![1], Some(-3.0 * PI / 4.0)),
            (Cphase, vec![2, 1], Some(3.0 * q)),
            (Xy, vec![2, 1], Some(PI)),
            (Rz, vec![2], Some(-3.0 * PI / 4.0)),
            (Cphase, vec![3, 2], Some(3.0 * q)),
            (Xy, vec![3, 2], Some(PI)),
            (Rz, vec![3], Some(-PI / 4.0)),
            (Cphase, vec![4, 3], Some(q)),
        ];
        let got = gate_list(&nc.circuit);
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            assert_eq!((g.0, &g.1), (e.0, &e.1));
            assert!((g.2.unwrap() - e.2.unwrap()).abs() < 1e-12, "{g:?} vs {e:?}");
        }
        assert_eq!(nc.system, vec![0, 1, 2, 4]);
        assert_eq!(nc.ancillas, vec![3]);
    }

    #[test]
    fn uniform_profile_adds_system_phases() {
        let plan = CountingPlan::with_ancillas(4, 1, Layout::LinearChain).unwrap();
        let nc = compile_counting(&plan, &PhaseProfile::rx_frame(4)).unwrap();
        let rz: Vec<_> = nc.circuit.gates()[..7]
            .iter()
            .filter(|g| g.kind() == crate::gate::GateKind::Rz)
            .map(|g| (g.qubits()[0], g.angle().unwrap()))
            .collect();
        assert_eq!(rz, vec![(2, -FRAC_PI_2), (3, -FRAC_PI_2)]);
        assert_eq!(nc.two_qubit_count(), 6);
    }

    #[test]
    fn budget_formula() {
        assert_eq!(gate_budget(4, 1), 6);
        assert_eq!(gate_budget(10, 3), 58);
        assert_eq!(gate_budget(2, 1), 2);
        assert_eq!(gate_budget(0, 3), 0);
        assert_eq!(gate_budget(1, 1), 1);
    }
}
