//! Exhaustive principal-minor search against the smallest eigenvalue, and a
//! state whose negativity is invisible to every 2x2 minor.

use faer::{c64, Mat};
use mixed_entanglement::entanglement::{csv_s, negativity, principal_minor_witness, MinorWitness};
use mixed_entanglement::operators::{partial_transpose, BipartiteDims, DensityOperator};

fn show(label: &str, w: &MinorWitness) {
    match w {
        MinorWitness::Pass => println!("{label}: all minors nonnegative"),
        MinorWitness::Fail { indices, minor } => {
            println!("{label}: minor {indices:?} = {minor:.6}")
        }
    }
}

fn main() -> mixed_entanglement::Result<()> {
    let a = Mat::from_fn(3, 3, |i, j| c64::new(if i == j { 1.0 } else { -0.6 }, 0.0));
    show("order <= 2", &principal_minor_witness(a.as_ref(), 2)?);
    show("order <= 3", &principal_minor_witness(a.as_ref(), 3)?);

    // (|0,+> + |1,->)/sqrt(2) with 20% white noise
    let dims = BipartiteDims::new(2, 2)?;
    let h = c64::new(0.5, 0.0);
    let pure = DensityOperator::from_pure(&[h, h, h, -h], dims)?;
    let p = 0.2;
    let m = Mat::from_fn(4, 4, |i, j| {
        pure.matrix()[(i, j)] * (1.0 - p) + if i == j { p / 4.0 } else { 0.0 }
    });
    let rho = DensityOperator::new(m, dims)?;
    println!("\nS = {:.3e}, N = {:.6}", csv_s(&rho).s, negativity(&rho)?);
    let pt = partial_transpose(&rho);
    show(
        "rho^PT order <= 2",
        &principal_minor_witness(pt.as_ref(), 2)?,
    );
    show(
        "rho^PT order <= 4",
        &principal_minor_witness(pt.as_ref(), 4)?,
    );
    Ok(())
}
