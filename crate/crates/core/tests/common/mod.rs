//! Brute-force reference computations shared by the integration tests. They
//! work on raw amplitude vectors and never call into the crate's observables.

#![allow(dead_code)]

use cohsim_core::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Σ_q σ^±_q ψ` with `σ⁺ = |0⟩⟨1|` (raising `S_z`) when `raise` is true.
pub fn ladder(psi: &[Complex64], n: usize, raise: bool) -> Vec<Complex64> {
    let mut out = vec![ZERO; psi.len()];
    for (i, a) in psi.iter().enumerate() {
        for q in 0..n {
            let bit = i >> q & 1;
            // σ⁺ takes |1⟩ → |0⟩, σ⁻ takes |0⟩ → |1⟩
            if (raise && bit == 1) || (!raise && bit == 0) {
                out[i ^ (1 << q)] += *a;
            }
        }
    }
    out
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `⟨S⁺S⁻ + S⁻S⁺⟩ / (2N²)` of a pure state.
pub fn c2_oracle(psi: &[Complex64], n: usize) -> f64 {
    let plus = ladder(psi, n, true);
    let minus = ladder(psi, n, false);
    // ⟨S⁺S⁻⟩ = ‖S⁻ψ‖², ⟨S⁻S⁺⟩ = ‖S⁺ψ‖²
    (norm_sqr(&plus) + norm_sqr(&minus)) / (2.0 * (n * n) as f64)
}

/// `⟨S_x⟩` of a pure state via `S_x = (S⁺ + S⁻)/2`.
pub fn sx_oracle(psi: &[Complex64], n: usize) -> f64 {
    let plus = ladder(psi, n, true);
    let minus = ladder(psi, n, false);
    (dot(psi, &plus) + dot(psi, &minus)).re / 2.0
}

/// Product state `⊗_n (|0⟩ + e^{iθ_n}|1⟩)/√2`, qubit 0 least significant.
pub fn coherent(thetas: &[f64]) -> Vec<Complex64> {
    let n = thetas.len();
    let scale = (0.5f64).powf(n as f64 / 2.0);
    (0..1usize << n)
        .map(|i| {
            let phase: f64 = (0..n).filter(|q| i >> q & 1 == 1).map(|q| thetas[q]).sum();
            Complex64::from_polar(scale, phase)
        })
        .collect()
}

/// Keeps the amplitudes with `popcount == k`, renormalized; returns the
/// removed norm too.
pub fn sector(psi: &[Complex64], k: u32) -> (f64, Vec<Complex64>) {
    let mut v: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(i, a)| if i.count_ones() == k { *a } else { ZERO })
        .collect();
    let p = norm_sqr(&v);
    if p > 0.0 {
        let s = 1.0 / p.sqrt();
        v.iter_mut().for_each(|a| *a *= s);
    }
    (p, v)
}

pub fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Post-selected system state of the counting protocol with the first
/// `coupled` qubits coupled: amplitude `x` picks up
/// `Π_n e^{−iφ_n S/2} cos(φ_n S/2)` with `S` the `S_z` of the coupled qubits.
pub fn counting_oracle(thetas: &[f64], phis: &[f64], coupled: usize) -> (f64, Vec<Complex64>) {
    let mut psi = coherent(thetas);
    for (i, a) in psi.iter_mut().enumerate() {
        let ones = (i & ((1 << coupled) - 1)).count_ones() as f64;
        let s = coupled as f64 / 2.0 - ones;
        for phi in phis {
            *a *= Complex64::from_polar((phi * s / 2.0).cos(), -phi * s / 2.0);
        }
    }
    let p = norm_sqr(&psi);
    let s = 1.0 / p.sqrt();
    psi.iter_mut().for_each(|a| *a *= s);
    (p, psi)
}

pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    dot(a, b).norm_sqr()
}
