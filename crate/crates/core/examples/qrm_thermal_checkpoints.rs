//! Quantum Rabi thermal states at the three published reference couplings.

use mixed_entanglement::cli::checkpoints::QRM_REFERENCE;
use mixed_entanglement::entanglement::{csv_s, negativity};
use mixed_entanglement::models::{build_qrm, ModelParams};
use mixed_entanglement::states::thermal_state;

fn main() -> mixed_entanglement::Result<()> {
    println!(
        "{:>6} {:>12} {:>10} {:>12} {:>10} {:>12}",
        "lambda", "S", "S ref", "N", "N ref", "top weight"
    );
    for (lambda, s_ref, n_ref) in QRM_REFERENCE {
        let h = build_qrm(&ModelParams::new(2.0, lambda, 45))?;
        let rho = thermal_state(&h, 90.0)?;
        println!(
            "{lambda:>6.2} {:>12.6} {s_ref:>10} {:>12.6} {n_ref:>10} {:>12.2e}",
            csv_s(&rho).s,
            negativity(&rho)?,
            rho.top_level_weight()
        );
    }
    Ok(())
}
