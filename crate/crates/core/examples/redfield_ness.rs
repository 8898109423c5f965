//! Redfield steady state of the symmetry-broken Rabi model coupled to an even
//! bath at beta = 90 and an odd bath at beta = 1.
//!
//! Pass the boson cutoff as the first argument (default 25).

use mixed_entanglement::entanglement::{csv_s, negativity};
use mixed_entanglement::models::{build_qrm_eps, ModelParams};
use mixed_entanglement::redfield::{build_liouvillian, projected_baths, redfield_steady_state};

fn main() -> mixed_entanglement::Result<()> {
    let n_max: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("n_max must be an integer"))
        .unwrap_or(25);
    let delta = 2.0;
    for lambda in [0.5, 1.3, 2.5] {
        let params = ModelParams::new(delta, lambda, n_max).with_epsilon(0.1 * delta);
        let h = build_qrm_eps(&params)?;
        let baths = projected_baths(params.dims(), 90.0, 1.0, 1e-5, 1e-5, delta)?;
        let l = build_liouvillian(&h, &baths)?;
        let ss = redfield_steady_state(&l)?;
        println!(
            "lambda {lambda:.2}: S {:.4e}  N {:.4e}  residual {:.1e}  condition {:.1e}",
            csv_s(&ss.state).s,
            negativity(&ss.state)?,
            ss.residual,
            ss.condition_estimate
        );
    }
    Ok(())
}
