//! Parity-sector steady states of the quantum Rabi model against the plain
//! thermal state across the coupling.

use mixed_entanglement::entanglement::negativity;
use mixed_entanglement::models::{build_qrm, parity_projectors, ModelParams};
use mixed_entanglement::states::{sector_steady_state, thermal_state, SectorParams};

fn main() -> mixed_entanglement::Result<()> {
    let cold = SectorParams::new(2.0 / 3.0, 1.0 / 3.0, 90.0, 90.0)?;
    let hot_odd = SectorParams::new(0.5, 0.5, 90.0, 1.0)?;
    println!(
        "{:>6} {:>12} {:>14} {:>16}",
        "lambda", "N thermal", "N p_e=2/3", "N beta_o=1"
    );
    for k in 0..=14 {
        let lambda = 0.25 * k as f64;
        let params = ModelParams::new(2.0, lambda, 45);
        let h = build_qrm(&params)?;
        let (pe, po) = parity_projectors(params.dims())?;
        println!(
            "{lambda:>6.2} {:>12.6} {:>14.6} {:>16.6}",
            negativity(&thermal_state(&h, 90.0)?)?,
            negativity(&sector_steady_state(&h, &pe, &po, &cold)?)?,
            negativity(&sector_steady_state(&h, &pe, &po, &hot_odd)?)?,
        );
    }
    Ok(())
}
