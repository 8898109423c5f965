//! Coupling sweep of the thermal Rabi model written as CSV and SVG into a
//! directory given as the first argument (default: the system temp dir).

use std::path::PathBuf;

use mixed_entanglement::cli::sweep::{csv_string, plot_svg};
use mixed_entanglement::cli::{run_sweep, Execution, LambdaGrid, SweepConfig};
use mixed_entanglement::models::ModelKind;

fn main() -> mixed_entanglement::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let cfg = SweepConfig {
        model: ModelKind::Qrm,
        lambda_grid: LambdaGrid::new(0.0, 3.5, 71)?,
        n_max: 40,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg, Execution::Parallel);
    let csv = dir.join("qrm_thermal.csv");
    let svg = dir.join("qrm_thermal.svg");
    std::fs::write(&csv, csv_string(&rows))?;
    plot_svg(&rows, "qrm thermal, delta = 2, beta = 90", &svg)?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
