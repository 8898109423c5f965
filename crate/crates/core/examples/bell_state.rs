//! Negativity, the Cauchy-Schwarz violation functional and its per-pair
//! attribution for a Bell state mixed with white noise.

use faer::{c64, Mat};
use mixed_entanglement::entanglement::{csv_direct, csv_s, negativity};
use mixed_entanglement::operators::{BipartiteDims, DensityOperator};

fn main() -> mixed_entanglement::Result<()> {
    let dims = BipartiteDims::new(2, 2)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c64::new(0.0, 0.0);
    let bell = DensityOperator::from_pure(&[c64::new(s, 0.0), z, z, c64::new(s, 0.0)], dims)?;

    println!("{:>6} {:>10} {:>10} {:>10}", "p", "S", "sqrt(S)", "N");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let m = Mat::from_fn(4, 4, |i, j| {
            let noise = if i == j { 0.25 * p } else { 0.0 };
            bell.matrix()[(i, j)] * (1.0 - p) + noise
        });
        let rho = DensityOperator::new(m, dims)?;
        let report = csv_s(&rho);
        assert!((csv_direct(&rho) - report.s).abs() < 1e-14);
        println!(
            "{p:>6.2} {:>10.6} {:>10.6} {:>10.6}",
            report.s,
            report.sqrt_s(),
            negativity(&rho)?
        );
    }

    let report = csv_s(&bell);
    for v in &report.violating_pairs {
        println!(
            "violating pair rows ({}, {}): {:.4}",
            v.row, v.col, v.magnitude
        );
    }
    Ok(())
}
