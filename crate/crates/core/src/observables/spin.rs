use alloc::vec;

use num_complex::Complex64;

use crate::math::{I, ZERO};
use crate::state::QuantumState;
use crate::states::StateEnsemble;

/// First and second moments of the collective spin, plus
/// `C_N⁽²⁾ = ⟨S⁺S⁻ + S⁻S⁺⟩ / (2N²)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpinObservables {
    pub n_qubits: usize,
    pub sx_mean: f64,
    pub sy_mean: f64,
    pub sz_mean: f64,
    pub sx2: f64,
    pub sy2: f64,
    pub sz2: f64,
    pub c2: f64,
}

impl SpinObservables {
    /// `⟨S_x²⟩ + ⟨S_y²⟩ + ⟨S_z²⟩`.
    pub fn total_spin_sq(&self) -> f64 {
        self.sx2 + self.sy2 + self.sz2
    }

    fn scaled(&self, w: f64) -> SpinObservables {
        SpinObservables {
            n_qubits: self.n_qubits,
            sx_mean: w * self.sx_mean,
            sy_mean: w * self.sy_mean,
            sz_mean: w * self.sz_mean,
            sx2: w * self.sx2,
            sy2: w * self.sy2,
            sz2: w * self.sz2,
            c2: w * self.c2,
        }
    }

    fn add(&mut self, o: &SpinObservables) {
        self.sx_mean += o.sx_mean;
        self.sy_mean += o.sy_mean;
        self.sz_mean += o.sz_mean;
        self.sx2 += o.sx2;
        self.sy2 += o.sy2;
        self.sz2 += o.sz2;
        self.c2 += o.c2;
    }
}

fn basis_state_observables(n: usize, index: usize) -> SpinObservables {
    let sz = n as f64 / 2.0 - index.count_ones() as f64;
    let quarter = n as f64 / 4.0;
    SpinObservables {
        n_qubits: n,
        sx_mean: 0.0,
        sy_mean: 0.0,
        sz_mean: sz,
        sx2: quarter,
        sy2: quarter,
        sz2: sz * sz,
        c2: 2.0 * quarter / (n * n) as f64,
    }
}

/// Exact spin observables of a pure state.
pub fn spin_observables_state(state: &QuantumState) -> SpinObservables {
    let n = state.n_qubits();
    match state.as_basis_state() {
        Some(index) => basis_state_observables(n, index),
        None => dense_observables(state),
    }
}

fn dense_observables(state: &QuantumState) -> SpinObservables {
    let n = state.n_qubits();
    let psi = state.amplitudes();
    let dim = psi.len();
    let mut sx = vec![ZERO; dim];
    let mut sy = vec![ZERO; dim];
    let mut raise = vec![ZERO; dim];
    let mut lower = vec![ZERO; dim];
    let mut sz_mean = 0.0;
    let mut sz2 = 0.0;
    for i in 0..dim {
        let sz = n as f64 / 2.0 - i.count_ones() as f64;
        let p = psi[i].norm_sqr();
        sz_mean += p * sz;
        sz2 += p * sz * sz;
        for q in 0..n {
            let j = i ^ (1 << q);
            let a = psi[j];
            sx[i] += a * 0.5;
            if i >> q & 1 == 0 {
                // Y|1⟩ = -i|0⟩ ; σ⁺|1⟩ = |0⟩
                sy[i] += -I * a * 0.5;
                raise[i] += a;
            } else {
                sy[i] += I * a * 0.5;
                lower[i] += a;
            }
        }
    }
    let dot = |v: &[Complex64]| -> Complex64 { psi.iter().zip(v).map(|(a, b)| a.conj() * b).sum() };
    let norm = |v: &[Complex64]| -> f64 { v.iter().map(|a| a.norm_sqr()).sum() };
    let nn = (n * n) as f64;
    SpinObservables {
        n_qubits: n,
        sx_mean: dot(&sx).re,
        sy_mean: dot(&sy).re,
        sz_mean,
        sx2: norm(&sx),
        sy2: norm(&sy),
        sz2,
        c2: (norm(&raise) + norm(&lower)) / (2.0 * nn),
    }
}

/// Ensemble average of [`spin_observables_state`], accumulated in member
/// order.
pub fn spin_observables(ensemble: &StateEnsemble) -> SpinObservables {
    let mut acc = SpinObservables {
        n_qubits: ensemble.n_qubits(),
        ..SpinObservables::default()
    };
    for (w, s) in ensemble.members() {
        acc.add(&spin_observables_state(s).scaled(*w));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{prepare_coherent, PhaseProfile};

    #[test]
    fn coherent_along_x() {
        let n = 6;
        let s = prepare_coherent(n, &PhaseProfile::zeros(n)).unwrap();
        let o = spin_observables_state(&s);
        assert!((o.sx_mean - 3.0).abs() < 1e-12);
        assert!(o.sy_mean.abs() < 1e-12);
        assert!((o.sz2 - 1.5).abs() < 1e-12);
        assert!((o.sx2 - 9.0).abs() < 1e-12);
        assert!((o.c2 - (n as f64 + 1.0) / (4.0 * n as f64)).abs() < 1e-12);
    }

    #[test]
    fn coherent_along_y() {
        let s = prepare_coherent(4, &PhaseProfile::uniform(4, core::f64::consts::FRAC_PI_2)).unwrap();
        let o = spin_observables_state(&s);
        assert!((o.sy_mean - 2.0).abs() < 1e-12);
        assert!(o.sx_mean.abs() < 1e-12);
    }

    #[test]
    fn basis_fast_path_matches_generic_route() {
        let s = QuantumState::basis(4, 0b0101);
        let fast = spin_observables_state(&s);
        let slow = dense_observables(&s);
        assert!((fast.c2 - slow.c2).abs() < 1e-12);
        assert!((fast.sx2 - slow.sx2).abs() < 1e-12);
        assert!((fast.sz2 - slow.sz2).abs() < 1e-12);
    }
}
