//! State-vector simulation of collective-spin coherence on qubit registers.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! - a dense state-vector simulator with measurement and post-selection
//!   ([`state`], [`gate`], [`circuit`], [`sampling`]),
//! - the coherent, dephased, projected and noisy benchmark states ([`states`]),
//! - the ancilla-based particle-number counting protocol ([`counting`]),
//! - compilation of that protocol to the CPHASE/XY native gate set ([`native`])
//!   and a unitary equivalence checker ([`equiv`]),
//! - coherence diagnostics: spin moments, full counting statistics of `S_θ`
//!   and the spin Wigner function ([`observables`]),
//! - readout-error modelling, calibration and mitigation ([`mitigation`]).
//!
//! Conventions: qubit 0 is the least significant bit of an amplitude index;
//! spin operators are Pauli matrices divided by two, so `|0⟩` carries
//! `S_z = +1/2`.

#![no_std]
// Float math comes from `num_traits::Float`. When std is in the dependency
// graph (dev-dependencies pull it in), std's inherent methods win and those
// imports look unused.
#![allow(unused_imports)]

extern crate alloc;

pub mod circuit;
pub mod counting;
pub mod equiv;
pub mod error;
pub mod gate;
pub mod histogram;
pub mod mitigation;
pub mod native;
pub mod observables;
pub mod rng;
pub mod sampling;
pub mod state;
pub mod states;

mod math;

pub use circuit::{Circuit, Measurement};
pub use error::{Error, Result};
pub use gate::{Gate, GateKind};
pub use histogram::OutcomeHistogram;
pub use math::wrap_angle;
pub use state::QuantumState;
pub use states::{PhaseProfile, StateEnsemble};

pub use num_complex::Complex64;
