//! Coherence diagnostics: spin moments and `C_N⁽²⁾`, full counting
//! statistics of `S_θ`, and the spin Wigner function.

mod fcs;
mod spin;
mod wigner;

pub use fcs::{
    c2_from_fcs, default_theta_grid, fcs_column, fcs_s_theta, fcs_shots,
    selection_rule_report, FcsDistribution, ParityReport, DEFAULT_THETA_POINTS,
};
pub use spin::{spin_observables, spin_observables_state, SpinObservables};
pub use wigner::{default_wigner_axis, wigner, WignerGrid, DEFAULT_SIGMA, DEFAULT_STEP};
