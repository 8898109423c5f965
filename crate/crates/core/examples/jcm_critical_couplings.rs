//! Critical couplings of the Jaynes-Cummings ground state and the closed-form
//! S and N compared with thermal states at beta = 90.

use mixed_entanglement::entanglement::{csv_s, negativity};
use mixed_entanglement::models::{
    build_jcm, critical_coupling, jcm_thermal_n_analytic, jcm_thermal_s_analytic, JcmRegime,
    ModelParams,
};
use mixed_entanglement::states::thermal_state;

fn main() -> mixed_entanglement::Result<()> {
    let delta: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("delta must be a number"))
        .unwrap_or(2.0);

    println!("delta = {delta}");
    for n in 0..4 {
        println!("lambda_{n} = {:.6}", critical_coupling(n, delta)?);
    }

    println!(
        "\n{:>6} {:>14} {:>10} {:>10} {:>10} {:>10}",
        "lambda", "regime", "S", "S exact", "N", "N exact"
    );
    for k in 1..=14 {
        let lambda = 0.25 * k as f64;
        let h = build_jcm(&ModelParams::new(delta, lambda, 45))?;
        let rho = thermal_state(&h, 90.0)?;
        let regime = match JcmRegime::classify(delta, lambda)? {
            JcmRegime::Unique { n } => format!("ground n={n}"),
            JcmRegime::Critical { n } => format!("critical n={n}"),
        };
        println!(
            "{lambda:>6.2} {regime:>14} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            csv_s(&rho).s,
            jcm_thermal_s_analytic(delta, lambda)?,
            negativity(&rho)?,
            jcm_thermal_n_analytic(delta, lambda)?,
        );
    }
    Ok(())
}
