use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gate::Matrix2;
use crate::math::{I, ONE, ZERO};
use crate::state::QuantumState;
use crate::states::StateEnsemble;

pub const DEFAULT_SIGMA: f64 = 0.2;
pub const DEFAULT_STEP: f64 = 0.1;

/// Spin-space Wigner function sampled on a rectangular grid.
///
/// `values[i][j]` is `W(sx_grid[i], sy_grid[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    pub sx_grid: Vec<f64>,
    pub sy_grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub sigma: f64,
}

impl WignerGrid {
    fn nearest(grid: &[f64], x: f64) -> usize {
        let mut best = 0;
        for (i, g) in grid.iter().enumerate() {
            if (g - x).abs() < (grid[best] - x).abs() {
                best = i;
            }
        }
        best
    }

    /// Value at the grid node nearest to `(sx, sy)`.
    pub fn value_near(&self, sx: f64, sy: f64) -> f64 {
        self.values[Self::nearest(&self.sx_grid, sx)][Self::nearest(&self.sy_grid, sy)]
    }

    /// Coordinates and value of the global maximum.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let mut best = (self.sx_grid[0], self.sy_grid[0], f64::NEG_INFINITY);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best.2 {
                    best = (self.sx_grid[i], self.sy_grid[j], v);
                }
            }
        }
        best
    }

    pub fn max_value(&self) -> f64 {
        self.argmax().2
    }
}

/// Symmetric axis `−(N/2+1) … N/2+1` with spacing `step`.
pub fn default_wigner_axis(n: usize, step: f64) -> Vec<f64> {
    let half = n as f64 / 2.0 + 1.0;
    let points = (2.0 * half / step).round() as usize;
    (0..=points)
        .map(|i| {
            let x = -half + i as f64 * step;
            (x * 1e10).round() / 1e10
        })
        .collect()
}

fn apply_all_qubits(state: &mut QuantumState, m: &Matrix2) {
    for q in 0..state.n_qubits() {
        state.apply_matrix_1q(q, m);
    }
}

fn popcount_mask(v: &[Complex64], k: u32) -> Vec<Complex64> {
    v.iter()
        .enumerate()
        .map(|(i, &a)| if i.count_ones() == k { a } else { ZERO })
        .collect()
}

/// `M_kl = ⟨ψ| P^x_k P^y_l |ψ⟩`, with `P^x_k`, `P^y_l` the spectral projectors of
/// `S_x` and `S_y` onto eigenvalue `N/2 − k` and `N/2 − l`.
fn joint_projector_matrix(state: &QuantumState) -> Vec<Vec<Complex64>> {
    let n = state.n_qubits();
    let r = FRAC_1_SQRT_2;
    let h: Matrix2 = [[ONE * r, ONE * r], [ONE * r, -ONE * r]];
    // H·S†: rotates the S_y eigenbasis onto the computational basis
    let hsd: Matrix2 = [[ONE * r, -I * r], [ONE * r, I * r]];
    // H·S·H: maps the rotated y frame into the rotated x frame
    let hsh: Matrix2 = [
        [(ONE + I) * 0.5, (ONE - I) * 0.5],
        [(ONE - I) * 0.5, (ONE + I) * 0.5],
    ];

    let mut a = state.clone();
    apply_all_qubits(&mut a, &h);
    let mut b = state.clone();
    apply_all_qubits(&mut b, &hsd);

    let mut m = vec![vec![ZERO; n + 1]; n + 1];
    for l in 0..=n {
        let masked = popcount_mask(b.amplitudes(), l as u32);
        let mut v = match QuantumState::from_raw(n, masked) {
            Some(v) => v,
            None => continue,
        };
        apply_all_qubits(&mut v, &hsh);
        for (i, (x, y)) in a.amplitudes().iter().zip(v.amplitudes()).enumerate() {
            m[i.count_ones() as usize][l] += x.conj() * y;
        }
    }
    m
}

fn gaussian(x: f64, sigma: f64) -> f64 {
    (-(x * x) / (sigma * sigma)).exp()
}

/// `W(s_x, s_y) = |Tr ρ δ(S_x − s_x) δ(S_y − s_y)|` with `δ(x) = exp(−x²/σ²)`.
pub fn wigner(ensemble: &StateEnsemble, sigma: f64, sx_grid: &[f64], sy_grid: &[f64]) -> Result<WignerGrid> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument("sigma must be positive".into()));
    }
    let n = ensemble.n_qubits();
    let mut m = vec![vec![ZERO; n + 1]; n + 1];
    for (w, s) in ensemble.members() {
        for (row, add) in m.iter_mut().zip(joint_projector_matrix(s)) {
            for (x, y) in row.iter_mut().zip(add) {
                *x += y * *w;
            }
        }
    }
    let lambda: Vec<f64> = (0..=n).map(|k| n as f64 / 2.0 - k as f64).collect();
    let gy: Vec<Vec<f64>> = sy_grid
        .iter()
        .map(|&sy| lambda.iter().map(|l| gaussian(l - sy, sigma)).collect())
        .collect();
    let values = sx_grid
        .iter()
        .map(|&sx| {
            let gx: Vec<f64> = lambda.iter().map(|l| gaussian(l - sx, sigma)).collect();
            // row vector gx·M, then contract against each gy
            let mut row = vec![ZERO; n + 1];
            for (k, g) in gx.iter().enumerate() {
                if *g == 0.0 {
                    continue;
                }
                for (r, x) in row.iter_mut().zip(&m[k]) {
                    *r += x * *g;
                }
            }
            gy.iter()
                .map(|g| row.iter().zip(g).map(|(r, g)| r * *g).sum::<Complex64>().norm())
                .collect()
        })
        .collect();
    Ok(WignerGrid {
        sx_grid: sx_grid.to_vec(),
        sy_grid: sy_grid.to_vec(),
        values,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{prepare_coherent, project_sz_zero, PhaseProfile};

    #[test]
    fn axis_is_symmetric() {
        let axis = default_wigner_axis(4, DEFAULT_STEP);
        assert_eq!(axis.len(), 61);
        assert_eq!(axis[0], -3.0);
        assert_eq!(axis[30], 0.0);
        assert_eq!(axis[60], 3.0);
    }

    #[test]
    fn coherent_peak_on_x_axis() {
        let n = 4;
        let s = prepare_coherent(n, &PhaseProfile::zeros(n)).unwrap();
        let axis = default_wigner_axis(n, 0.5);
        let w = wigner(&s.into(), DEFAULT_SIGMA, &axis, &axis).unwrap();
        let (x, y, _) = w.argmax();
        assert_eq!((x, y), (2.0, 0.0));
    }

    #[test]
    fn projected_has_no_even_weight() {
        let n = 6;
        let s = prepare_coherent(n, &PhaseProfile::zeros(n)).unwrap();
        let (_, p) = project_sz_zero(&s).unwrap();
        let axis = [-2.0, 0.0, 2.0];
        let w = wigner(&p.into(), DEFAULT_SIGMA, &axis, &[0.0]).unwrap();
        for row in &w.values {
            assert!(row[0] < 1e-3);
        }
    }

    #[test]
    fn rejects_bad_sigma() {
        let s = QuantumState::new(2);
        assert!(wigner(&s.into(), 0.0, &[0.0], &[0.0]).is_err());
    }
}
