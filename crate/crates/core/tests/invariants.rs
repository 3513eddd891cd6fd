//! Property-based invariants across the simulator, state preparation,
//! observables and readout mitigation.

use proptest::prelude::*;

use cohsim_core::equiv::{unitary_equiv, EquivClass};
use cohsim_core::mitigation::{apply_readout_noise, mitigate, ConfusionModel, ReadoutError};
use cohsim_core::observables::{fcs_column, spin_observables_state};
use cohsim_core::states::{prepare_coherent, project_excitations};
use cohsim_core::{Circuit, Gate, OutcomeHistogram, PhaseProfile, QuantumState};

const MAX_Q: usize = 5;

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    (0usize..9, 0..n, 1..n, -6.3f64..6.3).prop_map(move |(kind, a, shift, angle)| {
        let b = (a + shift) % n;
        match kind {
            0 => Gate::rx(a, angle),
            1 => Gate::rz(a, angle),
            2 => Gate::h(a),
            3 => Gate::cphase(a, b, angle),
            4 => Gate::cz(a, b),
            5 => Gate::swap(a, b),
            6 => Gate::iswap(a, b),
            7 => Gate::xy(a, b, angle),
            _ => Gate::crx(a, b, angle),
        }
    })
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (2..=MAX_Q).prop_flat_map(|n| {
        prop::collection::vec(gate_strategy(n), 0..24).prop_map(move |gates| {
            let mut c = Circuit::new(n);
            c.extend(gates).unwrap();
            c
        })
    })
}

fn profile_strategy() -> impl Strategy<Value = PhaseProfile> {
    prop::collection::vec(-3.2f64..3.2, 1..=8).prop_map(|t| PhaseProfile::new(t).unwrap())
}

fn readout_strategy() -> impl Strategy<Value = ReadoutError> {
    (0.7f64..1.0, 0.7f64..1.0).prop_map(|(a, b)| ReadoutError::new(a, b).unwrap())
}

/// Model and a strictly positive probability vector on the same qubits.
fn noisy_setup() -> impl Strategy<Value = (ConfusionModel, Vec<f64>)> {
    (1..=MAX_Q).prop_flat_map(|n| {
        (
            prop::collection::vec(readout_strategy(), n).prop_map(ConfusionModel::new),
            prop::collection::vec(0.01f64..1.0, 1 << n).prop_map(|v| {
                let s: f64 = v.iter().sum();
                v.into_iter().map(|x| x / s).collect()
            }),
        )
    })
}

/// Dense `⊗_q A_q` with qubit 0 as the least significant index bit.
fn dense_confusion(model: &ConfusionModel) -> Vec<Vec<f64>> {
    let n = model.n_qubits();
    let dim = 1 << n;
    let mut m = vec![vec![1.0; dim]; dim];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            for (q, e) in model.qubits().iter().enumerate() {
                *x *= e.matrix()[r >> q & 1][c >> q & 1];
            }
        }
    }
    m
}

fn hist(n: usize, p: &[f64]) -> OutcomeHistogram {
    OutcomeHistogram::from_probabilities(n, p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_evolution_preserves_norm(c in circuit_strategy()) {
        let s = c.final_state().unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_circuit_undoes_evolution(c in circuit_strategy()) {
        let mut both = c.clone();
        both.extend(c.inverse().unwrap().gates().iter().copied()).unwrap();
        let (ok, d) = unitary_equiv(&both, &Circuit::new(c.n_qubits()), EquivClass::Exact).unwrap();
        prop_assert!(ok, "distance {}", d);
    }

    #[test]
    fn local_rz_is_absorbed_by_the_loosest_class(c in circuit_strategy(), a in -3.0f64..3.0) {
        let mut tail = c.clone();
        tail.push(Gate::rz(0, a)).unwrap();
        prop_assert!(unitary_equiv(&tail, &c, EquivClass::LocalRzGlobalPhase).unwrap().0);
    }

    #[test]
    fn postselection_branches_sum_to_one(c in circuit_strategy(), q in 0usize..MAX_Q) {
        let s = c.final_state().unwrap();
        let q = q % s.n_qubits();
        let p1 = s.prob_one(q).unwrap();
        let p0 = 1.0 - p1;
        for (bit, p) in [(0u8, p0), (1u8, p1)] {
            if p > 1e-9 {
                let (got, branch) = s.postselect(q, bit).unwrap();
                prop_assert!((got - p).abs() < 1e-12);
                prop_assert!((branch.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn excitation_sectors_are_complete(profile in profile_strategy()) {
        let n = profile.len();
        let s = prepare_coherent(n, &profile).unwrap();
        let total: f64 = (0..=n).map(|k| project_excitations(&s, k).unwrap().0).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fcs_columns_are_distributions(profile in profile_strategy(), probe in 0.0f64..6.3) {
        let n = profile.len();
        let s = prepare_coherent(n, &profile).unwrap();
        let col = fcs_column(&s.into(), probe).unwrap();
        prop_assert!(col.iter().all(|p| *p > -1e-14));
        prop_assert!((col.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variances_are_non_negative(c in circuit_strategy()) {
        let o = spin_observables_state(&c.final_state().unwrap());
        prop_assert!(o.sx2 >= o.sx_mean * o.sx_mean - 1e-12);
        prop_assert!(o.sy2 >= o.sy_mean * o.sy_mean - 1e-12);
        prop_assert!(o.sz2 >= o.sz_mean * o.sz_mean - 1e-12);
        prop_assert!(o.c2 >= -1e-12);
    }

    #[test]
    fn mitigation_inverts_noise((model, p) in noisy_setup()) {
        let n = model.n_qubits();
        let noisy = apply_readout_noise(&hist(n, &p), &model).unwrap();
        prop_assert!((noisy.total() - 1.0).abs() < 1e-12);
        let back = mitigate(&noisy, &model).unwrap();
        prop_assert!(back.is_mitigated());
        for (x, y) in back.to_probabilities().iter().zip(&p) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn forward_model_matches_dense_matrix((model, p) in noisy_setup()) {
        let n = model.n_qubits();
        let m = dense_confusion(&model);
        let want: Vec<f64> = m.iter().map(|row| row.iter().zip(&p).map(|(a, b)| a * b).sum()).collect();
        let got = apply_readout_noise(&hist(n, &p), &model).unwrap().to_probabilities();
        for (x, y) in got.iter().zip(&want) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn mitigation_is_linear_and_keeps_total((model, p) in noisy_setup(), (_, q) in noisy_setup(), w in 0.0f64..1.0) {
        let n = model.n_qubits();
        prop_assume!(q.len() == p.len());
        let mix: Vec<f64> = p.iter().zip(&q).map(|(a, b)| w * a + (1.0 - w) * b).collect();
        let a = mitigate(&hist(n, &p), &model).unwrap().to_probabilities();
        let b = mitigate(&hist(n, &q), &model).unwrap().to_probabilities();
        let m = mitigate(&hist(n, &mix), &model).unwrap();
        prop_assert!((m.total() - 1.0).abs() < 1e-10);
        for ((x, y), z) in a.iter().zip(&b).zip(m.to_probabilities()) {
            prop_assert!((w * x + (1.0 - w) * y - z).abs() < 1e-10);
        }
    }
}

#[test]
fn basis_state_norms_after_every_gate_kind() {
    let mut s = QuantumState::basis(3, 5);
    for g in [Gate::h(0), Gate::crx(0, 2, 0.4), Gate::xy(1, 2, 1.3), Gate::cphase(2, 0, -0.7)] {
        s.apply(&g).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
