//! Benchmark states and their coherence against closed forms and brute force.

mod common;

use std::f64::consts::PI;

use cohsim_core::observables::{spin_observables, spin_observables_state};
use cohsim_core::states::{
    dephase_sz, prepare_coherent, prepare_noisy, project_sz, project_sz_zero, random_global_phase_ensemble,
    NoisyMode,
};
use cohsim_core::{Gate, PhaseProfile, QuantumState, StateEnsemble};
use common::{c2_oracle, coherent, sector};

fn coherent_state(thetas: &[f64]) -> QuantumState {
    prepare_coherent(thetas.len(), &PhaseProfile::new(thetas.to_vec()).unwrap()).unwrap()
}

#[test]
fn coherent_matches_product_formula() {
    let thetas = [0.2, 1.9, -0.7, 3.3];
    let s = coherent_state(&thetas);
    for (x, y) in s.amplitudes().iter().zip(coherent(&thetas)) {
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn coherent_moments() {
    let n = 10;
    let o = spin_observables_state(&coherent_state(&[0.0; 10]));
    assert!((o.sx_mean - 5.0).abs() < 1e-12);
    assert!((o.sz2 - o.sz_mean * o.sz_mean - n as f64 / 4.0).abs() < 1e-12);
    assert!((o.c2 - 0.275).abs() < 1e-12);
}

#[test]
fn two_qubit_coherence_depends_on_phase_difference() {
    for (t1, t2) in [(0.0, 0.0), (0.3, 1.4), (2.0, -1.0), (PI, 0.0)] {
        let o = spin_observables_state(&coherent_state(&[t1, t2]));
        let expected = 1.0 + (t1 - t2).cos() / 2.0;
        assert!((o.sx2 + o.sy2 - expected).abs() < 1e-12);
    }
}

#[test]
fn two_qubit_projection_is_a_bell_state() {
    let (t1, t2) = (0.4, 2.1);
    let (p, s) = project_sz_zero(&coherent_state(&[t1, t2])).unwrap();
    assert!((p - 0.5).abs() < 1e-12);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // |01⟩ has qubit 0 excited, |10⟩ qubit 1; relative phase e^{i(θ₂−θ₁)}
    let ratio = s.amplitude(0b10) / s.amplitude(0b01);
    assert!((s.amplitude(0b01).norm() - r).abs() < 1e-12);
    assert!((ratio.arg() - (t2 - t1)).abs() < 1e-12);
}

#[test]
fn fully_polarized_sector() {
    let n = 5;
    let (p, s) = project_sz(&coherent_state(&[0.0; 5]), -2.5).unwrap();
    assert!((p - 0.5f64.powi(n)).abs() < 1e-15);
    assert_eq!(s.as_basis_state(), Some((1 << n) - 1));
}

#[test]
fn closed_form_coherence() {
    for n in [2usize, 4, 6, 8, 10] {
        let nf = n as f64;
        let c = coherent_state(&vec![0.0; n]);
        assert!((spin_observables_state(&c).c2 - (nf + 1.0) / (4.0 * nf)).abs() < 1e-12);
        let (_, p) = project_sz_zero(&c).unwrap();
        let got = spin_observables_state(&p).c2;
        assert!((got - (nf + 2.0) / (4.0 * nf)).abs() < 1e-12, "n = {n}: {got}");
        let d = spin_observables(&dephase_sz(&c));
        assert!((d.c2 - (nf + 1.0) / (4.0 * nf)).abs() < 1e-12);
    }
}

#[test]
fn projected_matches_brute_force() {
    let n = 8;
    let psi = coherent(&vec![0.0; n]);
    let (_, proj) = sector(&psi, n as u32 / 2);
    let s = project_sz_zero(&coherent_state(&vec![0.0; n])).unwrap().1;
    assert!((spin_observables_state(&s).c2 - c2_oracle(&proj, n)).abs() < 1e-12);
}

#[test]
fn dephasing_two_qubits() {
    let e = dephase_sz(&coherent_state(&[0.0, 0.0]));
    let weights: Vec<f64> = e.members().iter().map(|(w, _)| *w).collect();
    assert_eq!(weights.len(), 3);
    let mut sorted = weights.clone();
    sorted.sort_by(f64::total_cmp);
    for (w, e) in sorted.iter().zip([0.25, 0.25, 0.5]) {
        assert!((w - e).abs() < 1e-12);
    }
}

#[test]
fn dephasing_an_eigenstate_is_trivial() {
    let s = QuantumState::basis(4, 0b0110);
    let e = dephase_sz(&s);
    assert_eq!(e.len(), 1);
    assert_eq!(e.members()[0].1, s);
}

#[test]
fn random_phase_ensemble_approaches_dephased() {
    let n = 6;
    let e = random_global_phase_ensemble(n, 4000, 11).unwrap();
    let o = spin_observables(&e);
    assert!(o.sx_mean.abs() < 0.1, "{}", o.sx_mean);
    let target = (n as f64 + 1.0) / (4.0 * n as f64);
    assert!((o.c2 - target).abs() < 1e-12, "uniform-magnitude phases leave C₂ unchanged");
    let single = random_global_phase_ensemble(n, 1, 3).unwrap();
    assert!((spin_observables(&single).sx2 + spin_observables(&single).sy2 - 10.5).abs() < 1e-9);
}

#[test]
fn noisy_ensemble_matches_brute_force() {
    for n in 1..=6 {
        let e = prepare_noisy(n, NoisyMode::Exhaustive).unwrap();
        assert_eq!(e.len(), 1 << n);
        let brute: f64 = (0..1usize << n)
            .map(|i| {
                let mut v = vec![common::ZERO; 1 << n];
                v[i] = common::c(1.0, 0.0);
                c2_oracle(&v, n)
            })
            .sum::<f64>()
            / (1 << n) as f64;
        let o = spin_observables(&e);
        assert!((o.c2 - brute).abs() < 1e-12);
        assert!((o.c2 - 1.0 / (2.0 * n as f64)).abs() < 1e-12);
        assert!((o.sx2 - n as f64 / 4.0).abs() < 1e-12);
        assert!(o.sx_mean.abs() < 1e-12);
    }
}

#[test]
fn gauge_rotation_of_projected_state_is_a_phase() {
    let n = 6;
    let (_, p) = project_sz_zero(&coherent_state(&[0.1, 0.5, 0.9, 1.3, 2.2, 3.0])).unwrap();
    let mut r = p.clone();
    for q in 0..n {
        r.apply(&Gate::rz(q, 0.77)).unwrap();
    }
    assert!((p.fidelity(&r).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn symmetric_states_have_maximal_total_spin() {
    let n = 7;
    for s in [
        coherent_state(&vec![0.3; n]),
        project_sz(&coherent_state(&vec![0.0; n]), 0.5).unwrap().1,
    ] {
        let o = spin_observables(&StateEnsemble::pure(s));
        let nf = n as f64;
        assert!((o.total_spin_sq() - nf * (nf + 2.0) / 4.0).abs() < 1e-10);
    }
}
