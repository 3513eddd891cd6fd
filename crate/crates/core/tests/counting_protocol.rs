//! Counting protocol against the closed-form post-selected amplitudes.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use cohsim_core::counting::{
    build_counting_circuit, run_counting, run_counting_staged, shot_coupling_sweep, staged_coupling_sweep,
    CountingMode, CountingPlan, Layout,
};
use cohsim_core::observables::{fcs_s_theta, default_theta_grid, spin_observables};
use cohsim_core::states::{dephase_sz, prepare_coherent, project_sz_zero};
use cohsim_core::PhaseProfile;
use common::{binomial, c2_oracle, counting_oracle, fidelity, sx_oracle};

#[test]
fn ten_qubits_postselect_onto_half_filling() {
    let n = 10;
    let plan = CountingPlan::new(n, Layout::AllToAll).unwrap();
    assert_eq!(plan.n_ancillas(), 3);
    let profile = PhaseProfile::zeros(n);
    let out = run_counting(&plan, &profile, CountingMode::PostselectAllZero).unwrap();
    let (_, target) = project_sz_zero(&prepare_coherent(n, &profile).unwrap()).unwrap();
    let f = out.ensemble.members()[0].1.fidelity(&target).unwrap();
    assert!((f - 1.0).abs() < 1e-10);
    assert!(out.success_probability >= 0.1);
    assert!((out.success_probability - binomial(10, 5) / 1024.0).abs() < 1e-12);
    assert!((spin_observables(&out.ensemble).c2 - 0.3).abs() < 1e-12);
}

#[test]
fn success_probability_is_central_binomial() {
    for n in (2..=16).step_by(2) {
        let plan = CountingPlan::new(n, Layout::AllToAll).unwrap();
        let out = run_counting(&plan, &PhaseProfile::zeros(n), CountingMode::PostselectAllZero).unwrap();
        let expected = binomial(n as u64, n as u64 / 2) / 2f64.powi(n as i32);
        assert!((out.success_probability - expected).abs() < 1e-12, "n = {n}");
        assert!(out.success_probability >= 1.0 / n as f64);
    }
}

#[test]
fn keep_all_equals_sector_dephasing() {
    let n = 10;
    let plan = CountingPlan::new(n, Layout::AllToAll).unwrap();
    let profile = PhaseProfile::zeros(n);
    let out = run_counting(&plan, &profile, CountingMode::KeepAll).unwrap();
    assert!((spin_observables(&out.ensemble).c2 - 0.275).abs() < 1e-12);
    let dephased = dephase_sz(&prepare_coherent(n, &profile).unwrap());
    assert!((spin_observables(&dephased).c2 - 0.275).abs() < 1e-12);
    // sectors 2^N_a apart stay coherent, so full statistics need one more ancilla
    let plan = CountingPlan::with_ancillas(n, 4, Layout::AllToAll).unwrap();
    let out = run_counting(&plan, &profile, CountingMode::KeepAll).unwrap();
    let grid = default_theta_grid(16);
    let a = fcs_s_theta(&out.ensemble, &grid).unwrap();
    let b = fcs_s_theta(&dephased, &grid).unwrap();
    for (x, y) in a.columns().iter().flatten().zip(b.columns().iter().flatten()) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn keep_all_conserves_coherence_for_any_profile() {
    let n = 6;
    let profile = PhaseProfile::new(vec![0.0, 0.4, 1.1, 2.5, 3.9, 5.0]).unwrap();
    let c = prepare_coherent(n, &profile).unwrap();
    let plan = CountingPlan::new(n, Layout::LinearChain).unwrap();
    let out = run_counting(&plan, &profile, CountingMode::KeepAll).unwrap();
    let direct = c2_oracle(c.amplitudes(), n);
    assert!((spin_observables(&out.ensemble).c2 - direct).abs() < 1e-12);
}

#[test]
fn detection_table_agrees_with_postselection() {
    // a sector survives post-selection exactly when no ancilla phase is an
    // odd multiple of π
    for n in 2..=12 {
        for na in 1..=4 {
            let plan = CountingPlan::with_ancillas(n, na, Layout::AllToAll).unwrap();
            let (_, psi) = counting_oracle(&vec![0.0; n], plan.phis(), n);
            let cc = build_counting_circuit(&plan, &PhaseProfile::zeros(n), n).unwrap();
            let out = run_counting(&plan, &PhaseProfile::zeros(n), CountingMode::PostselectAllZero).unwrap();
            let s = &out.ensemble.members()[0].1;
            assert!(fidelity(s.amplitudes(), &psi) > 1.0 - 1e-10);
            assert_eq!(cc.circuit.n_qubits(), n + na);
            for k in 0..=n {
                let sz = n as f64 / 2.0 - k as f64;
                let mass: f64 = s
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i.count_ones() as usize == k)
                    .map(|(_, a)| a.norm_sqr())
                    .sum();
                if plan.detects(sz) {
                    assert!(mass < 1e-20, "n={n} na={na} sz={sz}");
                } else {
                    assert!(mass > 1e-6, "n={n} na={na} sz={sz}");
                }
            }
            if n % 2 == 0 && na == cohsim_core::counting::default_ancillas(n) {
                assert!(plan.detection_complete());
            }
        }
    }
}

#[test]
fn table_of_phases_for_ten_qubits() {
    let plan = CountingPlan::new(10, Layout::AllToAll).unwrap();
    for s in 1..=5 {
        for sign in [-1.0, 1.0] {
            let phases = plan.detection_phases(sign * s as f64);
            let odd = phases.iter().any(|p| {
                let t = (p / PI - 1.0) / 2.0;
                (t - t.round()).abs() < 1e-12
            });
            assert!(odd, "S_z = {}", sign * s as f64);
        }
    }
}

#[test]
fn staged_sweep_against_closed_form() {
    for layout in [Layout::AllToAll, Layout::LinearChain] {
        let n = 6;
        let thetas = vec![0.0; n];
        let plan = CountingPlan::new(n, layout).unwrap();
        let sweep = staged_coupling_sweep(&plan, &PhaseProfile::zeros(n), CountingMode::PostselectAllZero).unwrap();
        assert_eq!(sweep.len(), n + 1);
        for p in &sweep {
            let (prob, psi) = counting_oracle(&thetas, plan.phis(), p.k);
            assert!((p.c2 - c2_oracle(&psi, n)).abs() < 1e-12);
            assert!((p.sx - sx_oracle(&psi, n)).abs() < 1e-12);
            assert!((p.success_probability - prob).abs() < 1e-12);
        }
        let nf = n as f64;
        assert!((sweep[0].c2 - (nf + 1.0) / (4.0 * nf)).abs() < 1e-12);
        assert!((sweep[0].sx - nf / 2.0).abs() < 1e-12);
        assert!((sweep[n].c2 - (nf + 2.0) / (4.0 * nf)).abs() < 1e-12);
        for w in sweep.windows(2) {
            assert!(w[1].sx <= w[0].sx + 1e-12);
        }
    }
}

#[test]
fn ten_qubit_sweep_ends_at_projected_value() {
    let plan = CountingPlan::new(10, Layout::LinearChain).unwrap();
    let sweep = staged_coupling_sweep(&plan, &PhaseProfile::zeros(10), CountingMode::PostselectAllZero).unwrap();
    assert!((sweep[10].c2 - 0.3).abs() < 1e-12);
    assert!(sweep[10].sx.abs() < 1e-12);
    // odd k overshoots; even k lands on N/2 - k/2
    for p in sweep.iter().step_by(2) {
        assert!((p.sx - (5.0 - p.k as f64 / 2.0)).abs() < 1e-9, "k = {}: {}", p.k, p.sx);
    }
    let keep = staged_coupling_sweep(&plan, &PhaseProfile::zeros(10), CountingMode::KeepAll).unwrap();
    for w in keep.windows(2) {
        assert!(w[1].sx <= w[0].sx + 1e-12);
    }
}

#[test]
fn four_qubit_single_ancilla_sweep() {
    let n = 4;
    let plan = CountingPlan::with_phis(n, vec![FRAC_PI_2], Layout::LinearChain).unwrap();
    let sweep = staged_coupling_sweep(&plan, &PhaseProfile::zeros(n), CountingMode::PostselectAllZero).unwrap();
    let expected = [0.3125, 0.285041, 0.28125, 0.302357, 0.35];
    for (p, e) in sweep.iter().zip(expected) {
        assert!((p.c2 - e).abs() < 1e-6, "k = {}: {}", p.k, p.c2);
    }
    assert!((sweep[4].sx - 1.2).abs() < 1e-12);
}

#[test]
fn staged_points_are_independent_runs() {
    let n = 4;
    let plan = CountingPlan::new(n, Layout::AllToAll).unwrap();
    let profile = PhaseProfile::zeros(n);
    let a = run_counting_staged(&plan, &profile, CountingMode::PostselectAllZero, 2).unwrap();
    let b = run_counting_staged(&plan, &profile, CountingMode::PostselectAllZero, 2).unwrap();
    assert_eq!(a, b);
}

#[test]
fn shot_sweep_is_reproducible_and_near_exact() {
    let n = 4;
    let plan = CountingPlan::with_phis(n, vec![FRAC_PI_2], Layout::LinearChain).unwrap();
    let profile = PhaseProfile::zeros(n);
    let shots = shot_coupling_sweep(&plan, &profile, CountingMode::PostselectAllZero, 4000, 5).unwrap();
    let again = shot_coupling_sweep(&plan, &profile, CountingMode::PostselectAllZero, 4000, 5).unwrap();
    assert_eq!(shots, again);
    let exact = staged_coupling_sweep(&plan, &profile, CountingMode::PostselectAllZero).unwrap();
    for (s, e) in shots.iter().zip(&exact) {
        let sigma = s.c2_std_error.unwrap();
        assert!((s.c2 - e.c2).abs() < 4.0 * sigma, "k = {}: {} vs {} (σ = {sigma})", s.k, s.c2, e.c2);
    }
}
