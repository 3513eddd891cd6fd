//! Fits the local RZ corrections of the fused CPHASE·SWAP rewrite and of the
//! CRX lowering, and prints them next to the constants the compiler uses.

use std::f64::consts::PI;

use cohsim_core::equiv::{equivalence, EquivClass};
use cohsim_core::native::{lower_crx, FUSED_GLOBAL_PHASE, FUSED_RZ};
use cohsim_core::{Circuit, Gate};

fn pi_units(x: f64) -> String {
    format!("{:+.6}π", x / PI)
}

fn main() -> Result<(), cohsim_core::Error> {
    println!("fused CPHASE(φ)·SWAP = e^(iγ) RZ(α0)⊗RZ(α1) · CPHASE(π+φ) · XY(π)");
    for phi in [0.0, PI / 8.0, PI / 4.0, PI / 2.0, 1.234, PI] {
        let mut bare = Circuit::new(2);
        bare.extend([Gate::cphase(0, 1, PI + phi), Gate::xy(0, 1, PI)])?;
        let mut target = Circuit::new(2);
        target.extend([Gate::cphase(0, 1, phi), Gate::swap(0, 1)])?;
        let fit = equivalence(&bare, &target, EquivClass::LocalRzGlobalPhase)?;
        let c = &fit.correction;
        println!(
            "  φ = {:<10} α = [{}, {}]  γ = {}  distance {:.1e}",
            pi_units(phi),
            pi_units(c.rz()[0]),
            pi_units(c.rz()[1]),
            pi_units(c.global_phase()),
            fit.distance
        );
    }
    println!(
        "  frozen: α = [{}, {}]  γ = {}",
        pi_units(FUSED_RZ[0]),
        pi_units(FUSED_RZ[1]),
        pi_units(FUSED_GLOBAL_PHASE)
    );

    println!("CRX lowering: native branch = RZ(α) on the system · CRX branch");
    for phi in [PI / 4.0, PI / 2.0, PI] {
        let low = lower_crx(phi)?;
        println!("  φ = {:<10} α = {}", pi_units(phi), pi_units(low.correction.rz()[0]));
    }
    Ok(())
}
