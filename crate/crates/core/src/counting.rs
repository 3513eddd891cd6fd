//! Ancilla-based counting of the total `S_z` of a system register.
//!
//! Ancilla `n` (from 0) picks up a phase `−φ_n·S_z` with `φ_n = π/2ⁿ`.
//! Reading every ancilla as `0` in the X basis keeps the system amplitude of
//! sector `S_z` weighted by `Π_n cos(φ_n S_z / 2)`, which vanishes for every
//! nonzero integer `S_z` up to `2^{N_a}` once `N_a = ⌊log₂ N⌋`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};


use num_traits::Float;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::histogram::OutcomeHistogram;
use crate::native::{basis_change_gates, compile_counting_staged};
use crate::observables::{fcs_column, spin_observables, SpinObservables};
use crate::rng::derive_seed;
use crate::sampling::sample_shots;
use crate::state::{QuantumState, IMPOSSIBLE_BRANCH};
use crate::states::{PhaseProfile, StateEnsemble};

/// Qubit connectivity assumed by the schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    AllToAll,
    /// Nearest-neighbour interactions only; ancillas travel along the chain.
    LinearChain,
}

impl Layout {
    pub fn name(self) -> &'static str {
        match self {
            Layout::AllToAll => "all-to-all",
            Layout::LinearChain => "linear-chain",
        }
    }
}

/// System size, ancilla phases and layout of a counting run.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingPlan {
    n_system: usize,
    phis: Vec<f64>,
    layout: Layout,
}

/// `⌊log₂ n⌋`, zero for `n < 2`.
pub fn default_ancillas(n_system: usize) -> usize {
    if n_system < 2 {
        0
    } else {
        (usize::BITS - 1 - n_system.leading_zeros()) as usize
    }
}

impl CountingPlan {
    /// Plan with `⌊log₂ N⌋` ancillas.
    pub fn new(n_system: usize, layout: Layout) -> Result<CountingPlan> {
        let na = default_ancillas(n_system);
        if na == 0 {
            return Err(Error::InvalidPlan(format!(
                "N = {n_system} gives no ancillas; pass an explicit ancilla count"
            )));
        }
        CountingPlan::with_ancillas(n_system, na, layout)
    }

    /// Plan with `n_ancillas` ancillas at phases `π/2ⁿ`.
    pub fn with_ancillas(n_system: usize, n_ancillas: usize, layout: Layout) -> Result<CountingPlan> {
        if n_ancillas == 0 {
            return Err(Error::InvalidPlan("at least one ancilla is required".into()));
        }
        let phis = (0..n_ancillas).map(|n| PI / (1u64 << n) as f64).collect();
        CountingPlan::with_phis(n_system, phis, layout)
    }

    /// Plan with explicit ancilla phases; each must be half the previous one.
    pub fn with_phis(n_system: usize, phis: Vec<f64>, layout: Layout) -> Result<CountingPlan> {
        if n_system == 0 {
            return Err(Error::InvalidPlan("empty system register".into()));
        }
        if phis.is_empty() {
            return Err(Error::InvalidPlan("at least one ancilla is required".into()));
        }
        if phis.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidPlan("non-finite ancilla phase".into()));
        }
        for w in phis.windows(2) {
            if (w[1] - w[0] / 2.0).abs() > 1e-12 {
                return Err(Error::InvalidPlan(format!(
                    "ancilla phases must halve: {} after {}",
                    w[1], w[0]
                )));
            }
        }
        Ok(CountingPlan {
            n_system,
            phis,
            layout,
        })
    }

    pub fn n_system(&self) -> usize {
        self.n_system
    }

    pub fn n_ancillas(&self) -> usize {
        self.phis.len()
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn total_qubits(&self) -> usize {
        self.n_system + self.phis.len()
    }

    pub fn with_layout(&self, layout: Layout) -> CountingPlan {
        CountingPlan {
            layout,
            ..self.clone()
        }
    }

    /// Phases `S_z·φ_n` picked up by the ancillas for sector `sz`.
    pub fn detection_phases(&self, sz: f64) -> Vec<f64> {
        self.phis.iter().map(|p| sz * p).collect()
    }

    /// True when some ancilla phase for `sz` is an odd multiple of `π`, so
    /// the all-zero readout excludes that sector.
    pub fn detects(&self, sz: f64) -> bool {
        self.detection_phases(sz).iter().any(|&ph| {
            let turns = (ph - PI) / TAU;
            (turns - turns.round()).abs() < 1e-9
        })
    }

    /// Every nonzero sector `S_z ∈ {N/2, N/2 − 1, …}` is detected. Never
    /// true for odd `N`, whose sectors are half-integer.
    pub fn detection_complete(&self) -> bool {
        (0..=self.n_system)
            .map(|k| self.n_system as f64 / 2.0 - k as f64)
            .filter(|sz| sz.abs() > 1e-9)
            .all(|sz| self.detects(sz))
    }

    /// Interaction order and qubit placement with the first `coupled` system
    /// qubits coupled.
    ///
    /// Logical index `i < N` is system qubit `i`, `N + a` is ancilla `a`.
    /// On a chain the register starts as `a_{Na−1} … a_1 s_0 a_0 s_1 … s_{N−1}`;
    /// each system qubit meets `a_0, a_1, …` in turn and every interaction
    /// except the first and last swaps the pair.
    pub fn schedule(&self, coupled: usize) -> Result<Schedule> {
        let (n, na) = (self.n_system, self.n_ancillas());
        if coupled > n {
            return Err(Error::InvalidArgument(format!(
                "cannot couple {coupled} of {n} system qubits"
            )));
        }
        let mut pos: Vec<usize> = match self.layout {
            Layout::AllToAll => (0..n + na).collect(),
            Layout::LinearChain => {
                let mut p = vec![0; n + na];
                for a in 1..na {
                    p[n + a] = na - 1 - a;
                }
                p[0] = na - 1;
                p[n] = na;
                for (j, slot) in p.iter_mut().enumerate().take(n).skip(1) {
                    *slot = na + j;
                }
                p
            }
        };
        let initial = pos.clone();
        let total = coupled * na;
        let mut ops = Vec::with_capacity(total);
        for j in 0..coupled {
            for a in 0..na {
                let idx = ops.len();
                let (ps, pa) = (pos[j], pos[n + a]);
                let swap = self.layout == Layout::LinearChain && idx != 0 && idx + 1 != total;
                if self.layout == Layout::LinearChain && ps.abs_diff(pa) != 1 {
                    return Err(Error::InvalidPlan(format!(
                        "system {j} at {ps} and ancilla {a} at {pa} are not adjacent"
                    )));
                }
                ops.push(ChainOp {
                    system: j,
                    ancilla: a,
                    phys_system: ps,
                    phys_ancilla: pa,
                    swap,
                });
                if swap {
                    pos.swap(j, n + a);
                }
            }
        }
        Ok(Schedule {
            initial,
            ops,
            final_positions: pos,
        })
    }
}

/// One system–ancilla interaction on physical qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainOp {
    pub system: usize,
    pub ancilla: usize,
    pub phys_system: usize,
    pub phys_ancilla: usize,
    /// The pair is swapped after interacting.
    pub swap: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    /// Physical position per logical qubit before the first interaction.
    pub initial: Vec<usize>,
    pub ops: Vec<ChainOp>,
    /// Physical position per logical qubit after the last interaction.
    pub final_positions: Vec<usize>,
}

impl Schedule {
    pub fn swap_count(&self) -> usize {
        self.ops.iter().filter(|o| o.swap).count()
    }
}

/// An abstract counting circuit and where its qubits end up.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingCircuit {
    pub circuit: Circuit,
    /// Final physical position of each system qubit.
    pub system: Vec<usize>,
    /// Final physical position of each ancilla.
    pub ancillas: Vec<usize>,
}

fn check_profile(plan: &CountingPlan, profile: &PhaseProfile) -> Result<()> {
    if profile.len() != plan.n_system() {
        return Err(Error::LengthMismatch {
            expected: plan.n_system(),
            found: profile.len(),
        });
    }
    Ok(())
}

/// Coherent-state preparation on the system, Hadamards on the ancillas, the
/// couplings of the first `coupled` system qubits, and the ancilla X-basis
/// rotation. Measurements: system `i` into slot `i`, ancilla `a` into slot
/// `N + a`.
pub fn build_counting_circuit(plan: &CountingPlan, profile: &PhaseProfile, coupled: usize) -> Result<CountingCircuit> {
    check_profile(plan, profile)?;
    let n = plan.n_system();
    let schedule = plan.schedule(coupled)?;
    let mut c = Circuit::new(plan.total_qubits());
    for (i, &theta) in profile.thetas().iter().enumerate() {
        let q = schedule.initial[i];
        c.push(Gate::rx(q, FRAC_PI_2))?;
        let rz = crate::math::wrap_signed(theta + FRAC_PI_2);
        if rz.abs() > 1e-12 {
            c.push(Gate::rz(q, rz))?;
        }
    }
    for a in 0..plan.n_ancillas() {
        c.push(Gate::h(schedule.initial[n + a]))?;
    }
    for op in &schedule.ops {
        let phi = plan.phis()[op.ancilla];
        c.push(Gate::rz(op.phys_ancilla, -phi / 2.0))?;
        c.push(Gate::cphase(op.phys_system, op.phys_ancilla, phi))?;
        if op.swap {
            c.push(Gate::swap(op.phys_system, op.phys_ancilla))?;
        }
    }
    let system = schedule.final_positions[..n].to_vec();
    let ancillas = schedule.final_positions[n..].to_vec();
    for &q in &ancillas {
        c.push(Gate::h(q))?;
    }
    for (i, &q) in system.iter().enumerate() {
        c.measure(q, i)?;
    }
    for (a, &q) in ancillas.iter().enumerate() {
        c.measure(q, n + a)?;
    }
    Ok(CountingCircuit {
        circuit: c,
        system,
        ancillas,
    })
}

/// What to do with the ancilla readout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountingMode {
    /// Keep only runs where every ancilla reads `0`.
    PostselectAllZero,
    /// Keep every run; the system ends in the outcome-weighted mixture.
    KeepAll,
}

impl CountingMode {
    pub fn name(self) -> &'static str {
        match self {
            CountingMode::PostselectAllZero => "postselect",
            CountingMode::KeepAll => "keep-all",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountingOutcome {
    /// System state (single member when post-selecting).
    pub ensemble: StateEnsemble,
    /// Probability of the accepted ancilla outcomes.
    pub success_probability: f64,
}

/// System state for ancilla outcome `m` (bit `a` for ancilla `a`) and its
/// probability; `None` when the branch is empty.
fn branch(state: &QuantumState, cc: &CountingCircuit, m: usize) -> Result<Option<(f64, QuantumState)>> {
    let mask: usize = cc.ancillas.iter().map(|&q| 1usize << q).sum();
    let want: usize = cc
        .ancillas
        .iter()
        .enumerate()
        .filter(|(a, _)| m >> a & 1 == 1)
        .map(|(_, &q)| 1usize << q)
        .sum();
    let p: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask == want)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    if p < IMPOSSIBLE_BRANCH {
        return Ok(None);
    }
    let fixed: Vec<(usize, u8)> = cc
        .ancillas
        .iter()
        .enumerate()
        .map(|(a, &q)| (q, (m >> a & 1) as u8))
        .collect();
    Ok(Some((p, state.restrict(&cc.system, &fixed)?)))
}

/// Exact counting run with the first `coupled` system qubits coupled.
pub fn run_counting_staged(
    plan: &CountingPlan,
    profile: &PhaseProfile,
    mode: CountingMode,
    coupled: usize,
) -> Result<CountingOutcome> {
    let cc = build_counting_circuit(plan, profile, coupled)?;
    let state = cc.circuit.final_state()?;
    match mode {
        CountingMode::PostselectAllZero => match branch(&state, &cc, 0)? {
            Some((p, s)) => Ok(CountingOutcome {
                ensemble: StateEnsemble::pure(s),
                success_probability: p,
            }),
            None => Err(Error::ImpossibleBranch { probability: 0.0 }),
        },
        CountingMode::KeepAll => {
            let mut members = Vec::new();
            for m in 0..1usize << plan.n_ancillas() {
                if let Some(b) = branch(&state, &cc, m)? {
                    members.push(b);
                }
            }
            Ok(CountingOutcome {
                ensemble: StateEnsemble::new(members)?,
                success_probability: 1.0,
            })
        }
    }
}

/// Exact counting run with every system qubit coupled.
pub fn run_counting(plan: &CountingPlan, profile: &PhaseProfile, mode: CountingMode) -> Result<CountingOutcome> {
    run_counting_staged(plan, profile, mode, plan.n_system())
}

/// Counting program that reads the system out along `S_θ`. Linear-chain
/// plans are compiled to native gates; all-to-all plans stay abstract.
pub fn measured_counting_circuit(
    plan: &CountingPlan,
    profile: &PhaseProfile,
    coupled: usize,
    theta: f64,
) -> Result<Circuit> {
    match plan.layout() {
        Layout::LinearChain => compile_counting_staged(plan, profile, coupled)?.measured_circuit(theta),
        Layout::AllToAll => {
            let cc = build_counting_circuit(plan, profile, coupled)?;
            let mut c = Circuit::new(plan.total_qubits());
            c.extend(cc.circuit.gates().iter().copied())?;
            c.extend(basis_change_gates(&cc.system, theta))?;
            for m in cc.circuit.measurements() {
                c.measure(m.qubit, m.slot)?;
            }
            Ok(c)
        }
    }
}

/// Shot histogram of the counting program read out along `S_θ`.
pub fn sample_counting(
    plan: &CountingPlan,
    profile: &PhaseProfile,
    coupled: usize,
    theta: f64,
    shots: u64,
    seed: u64,
) -> Result<OutcomeHistogram> {
    sample_shots(&measured_counting_circuit(plan, profile, coupled, theta)?, shots, seed)
}

/// One point of a staged coupling sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    /// Number of system qubits coupled to the ancillas.
    pub k: usize,
    pub c2: f64,
    pub sx: f64,
    pub success_probability: f64,
    pub mode: CountingMode,
    /// Full spin moments (exact runs only).
    pub observables: Option<SpinObservables>,
    /// One standard error of `c2` (shot runs only).
    pub c2_std_error: Option<f64>,
}

/// Exact sweep point with the first `coupled` system qubits coupled.
pub fn staged_sweep_point(
    plan: &CountingPlan,
    profile: &PhaseProfile,
    mode: CountingMode,
    coupled: usize,
) -> Result<SweepPoint> {
    let out = run_counting_staged(plan, profile, mode, coupled)?;
    let obs = spin_observables(&out.ensemble);
    Ok(SweepPoint {
        k: coupled,
        c2: obs.c2,
        sx: obs.sx_mean,
        success_probability: out.success_probability,
        mode,
        observables: Some(obs),
        c2_std_error: None,
    })
}

/// Exact sweep over `k = 0 … N`; each point is an independent run.
pub fn staged_coupling_sweep(plan: &CountingPlan, profile: &PhaseProfile, mode: CountingMode) -> Result<Vec<SweepPoint>> {
    (0..=plan.n_system())
        .map(|k| staged_sweep_point(plan, profile, mode, k))
        .collect()
}

/// Shot estimate of one sweep point from `S_x` and `S_y` readouts of `shots`
/// runs each, post-selected on all ancillas reading `0` (post-selection mode)
/// or keeping all runs.
///
/// `C₂ = (⟨S_x²⟩ + ⟨S_y²⟩)/N²`. The standard error is evaluated from the exact
/// readout distributions with the number of accepted shots.
pub fn shot_sweep_point(
    plan: &CountingPlan,
    profile: &PhaseProfile,
    mode: CountingMode,
    coupled: usize,
    shots: u64,
    seed: u64,
) -> Result<SweepPoint> {
    let n = plan.n_system();
    let exact = run_counting_staged(plan, profile, mode, coupled)?;
    let mut hists = Vec::with_capacity(2);
    let mut var = [0.0; 2];
    for (axis, theta) in [0.0, FRAC_PI_2].into_iter().enumerate() {
        hists.push(sample_counting(plan, profile, coupled, theta, shots, derive_seed(seed, axis as u64))?);
        let col = fcs_column(&exact.ensemble, theta)?;
        let (m2, m4) = col.iter().enumerate().fold((0.0, 0.0), |(a, b), (m, p)| {
            let v = m as f64 - n as f64 / 2.0;
            (a + p * v * v, b + p * v.powi(4))
        });
        let effective = (shots as f64 * exact.success_probability).max(1.0);
        var[axis] = (m4 - m2 * m2).max(0.0) / effective;
    }
    let est = estimate_from_readouts(plan, mode, &hists[0], &hists[1])?;
    let nn = (n * n) as f64;
    Ok(SweepPoint {
        k: coupled,
        c2: est.c2,
        sx: est.sx,
        success_probability: est.accepted,
        mode,
        observables: None,
        c2_std_error: Some((var[0] + var[1]).sqrt() / nn),
    })
}

/// Coherence estimate from an `S_x` and an `S_y` readout histogram.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReadoutEstimate {
    pub c2: f64,
    pub sx: f64,
    /// Accepted fraction of the `S_x` histogram.
    pub accepted: f64,
}

/// Estimates `C₂ = (⟨S_x²⟩ + ⟨S_y²⟩)/N²` and `⟨S_x⟩` from counting-program
/// histograms read out at `θ = 0` and `θ = π/2` (system in slots `0..N`,
/// ancillas after). Works on exact, sampled or mitigated histograms.
pub fn estimate_from_readouts(
    plan: &CountingPlan,
    mode: CountingMode,
    sx_hist: &OutcomeHistogram,
    sy_hist: &OutcomeHistogram,
) -> Result<ReadoutEstimate> {
    let n = plan.n_system();
    let system_slots: Vec<usize> = (0..n).collect();
    let condition: Vec<(usize, u8)> = match mode {
        CountingMode::PostselectAllZero => (0..plan.n_ancillas()).map(|a| (n + a, 0)).collect(),
        CountingMode::KeepAll => Vec::new(),
    };
    let (accepted, kept_x) = sx_hist.postselect(&condition)?;
    let (_, kept_y) = sy_hist.postselect(&condition)?;
    let (sx, sx2) = kept_x.spin_moments(&system_slots);
    let (_, sy2) = kept_y.spin_moments(&system_slots);
    Ok(ReadoutEstimate {
        c2: (sx2 + sy2) / (n * n) as f64,
        sx,
        accepted,
    })
}

/// Shot sweep over `k = 0 … N`; point `k` uses sub-seed `k` of `seed`.
pub fn shot_coupling_sweep(
    plan: &CountingPlan,
    profile: &PhaseProfile,
    mode: CountingMode,
    shots: u64,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    (0..=plan.n_system())
        .map(|k| shot_sweep_point(plan, profile, mode, k, shots, derive_seed(seed, 1000 + k as u64)))
        .collect()
}

/// Human-readable rendering of a detection table row.
pub fn detection_row(plan: &CountingPlan, sz: f64) -> String {
    let mut row = format!("S_z = {sz:+}:");
    for ph in plan.detection_phases(sz) {
        row.push_str(&format!(" {:.4}π", ph / PI));
    }
    row
}
