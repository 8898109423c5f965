//! Writes a thermal state in the text dump format, reads it back and prints
//! the diagnostic report.

use mixed_entanglement::cli::dump::density_to_string;
use mixed_entanglement::cli::{analyze, read_density, SweepConfig};

fn main() -> mixed_entanglement::Result<()> {
    let cfg = SweepConfig::parse("model = qrm\nbeta = 90\nn_max = 30\n")?;
    let lambda = 1.3;
    let rho = mixed_entanglement::cli::sweep::build_state(&cfg, lambda)?;
    let text = density_to_string(&rho);
    println!("dump: {} lines", text.lines().count());
    let back = read_density(&text)?;
    print!("{}", analyze(&back, 5, Some((&cfg, lambda)))?);
    Ok(())
}
