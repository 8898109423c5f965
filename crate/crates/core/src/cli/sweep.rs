//! Coupling sweeps: per-point state construction, CSV rows and the SVG plot.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::config::{StateKind, SweepConfig};
use crate::entanglement::{csv_s, negativity};
use crate::error::{Error, Result};
use crate::models::parity_projectors;
use crate::operators::DensityOperator;
use crate::redfield::{build_liouvillian, projected_baths, redfield_steady_state};
use crate::states::{sector_steady_state, thermal_state};

pub const CSV_HEADER: &str = "lambda,S,sqrt_S,N,trace_defect,min_eigenvalue,error";

/// Top boson level populations above this are reported as under-truncation.
pub const TRUNCATION_WARNING: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Diagnostics of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResult {
    pub lambda: f64,
    pub s: f64,
    pub sqrt_s: f64,
    pub n: f64,
    pub trace_defect: f64,
    /// Smallest eigenvalue of the state itself.
    pub min_eigenvalue: f64,
    pub top_level_weight: f64,
}

#[derive(Debug)]
pub struct SweepRow {
    pub lambda: f64,
    pub outcome: Result<PointResult>,
}

/// The state selected by `cfg.state_kind` at coupling `lambda`.
pub fn build_state(cfg: &SweepConfig, lambda: f64) -> Result<DensityOperator> {
    let params = cfg.model_params(lambda);
    let h = cfg.model.build(&params)?;
    match cfg.state_kind {
        StateKind::Thermal => thermal_state(&h, cfg.beta),
        StateKind::Sector => {
            let (pe, po) = parity_projectors(params.dims())?;
            sector_steady_state(&h, &pe, &po, &cfg.sector_params()?)
        }
        StateKind::Redfield => {
            let baths = projected_baths(
                params.dims(),
                cfg.beta_e,
                cfg.beta_o,
                cfg.gamma_e,
                cfg.gamma_o,
                cfg.cutoff(),
            )?;
            let l = build_liouvillian(&h, &baths)?;
            Ok(redfield_steady_state(&l)?.state)
        }
    }
}

pub fn measure(rho: &DensityOperator, lambda: f64) -> Result<PointResult> {
    let report = csv_s(rho);
    let validation = rho.report();
    Ok(PointResult {
        lambda,
        s: report.s,
        sqrt_s: report.sqrt_s(),
        n: negativity(rho)?,
        trace_defect: validation.trace_defect,
        min_eigenvalue: validation.min_eigenvalue,
        top_level_weight: rho.top_level_weight(),
    })
}

pub fn evaluate_point(cfg: &SweepConfig, lambda: f64) -> Result<PointResult> {
    measure(&build_state(cfg, lambda)?, lambda)
}

/// Evaluates `lambdas` in order. Rows are independent of each other and of
/// the execution mode.
pub fn run_points(cfg: &SweepConfig, lambdas: &[f64], execution: Execution) -> Vec<SweepRow> {
    let eval = |&lambda: &f64| SweepRow {
        lambda,
        outcome: evaluate_point(cfg, lambda),
    };
    match execution {
        Execution::Serial => lambdas.iter().map(eval).collect(),
        Execution::Parallel => lambdas.par_iter().map(eval).collect(),
    }
}

pub fn run_sweep(cfg: &SweepConfig, execution: Execution) -> Vec<SweepRow> {
    run_points(cfg, &cfg.lambda_grid.points(), execution)
}

fn number(x: f64) -> String {
    format!("{x:.11e}")
}

/// One CSV line without the trailing newline. Failed rows leave the numeric
/// fields empty and carry the message with commas and line breaks replaced.
pub fn format_row(row: &SweepRow) -> String {
    match &row.outcome {
        Ok(p) => format!(
            "{},{},{},{},{},{},",
            number(p.lambda),
            number(p.s),
            number(p.sqrt_s),
            number(p.n),
            number(p.trace_defect),
            number(p.min_eigenvalue),
        ),
        Err(e) => {
            let message: String = e
                .to_string()
                .chars()
                .map(|c| match c {
                    ',' => ';',
                    '\n' | '\r' => ' ',
                    c => c,
                })
                .collect();
            format!("{},,,,,,{}", number(row.lambda), message)
        }
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", format_row(row))?;
    }
    Ok(())
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// `sqrt(S)` solid and `N` dashed against `lambda`; failed rows are skipped.
pub fn plot_svg(rows: &[SweepRow], title: &str, path: &Path) -> Result<()> {
    use plotters::prelude::*;

    let ok: Vec<&PointResult> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok())
        .collect();
    if ok.is_empty() {
        return Err(Error::Parameter("no successful sweep rows to plot".into()));
    }
    let x_min = ok.iter().map(|p| p.lambda).fold(f64::INFINITY, f64::min);
    let mut x_max = ok
        .iter()
        .map(|p| p.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let y_max = ok
        .iter()
        .flat_map(|p| [p.sqrt_s, p.n])
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 1.05;

    let plot_err = |e: &dyn std::fmt::Display| Error::Io(std::io::Error::other(e.to_string()));
    let root = SVGBackend::new(path, (800, 500)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x_min..x_max, 0.0..y_max)
        .map_err(|e| plot_err(&e))?;
    chart
        .configure_mesh()
        .x_desc("lambda")
        .draw()
        .map_err(|e| plot_err(&e))?;
    chart
        .draw_series(LineSeries::new(
            ok.iter().map(|p| (p.lambda, p.sqrt_s)),
            BLUE.stroke_width(2),
        ))
        .map_err(|e| plot_err(&e))?
        .label("sqrt(S)")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], BLUE.stroke_width(2)));
    chart
        .draw_series(DashedLineSeries::new(
            ok.iter().map(|p| (p.lambda, p.n)),
            8,
            5,
            RED.stroke_width(2),
        ))
        .map_err(|e| plot_err(&e))?
        .label("N")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], RED.stroke_width(2)));
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE)
        .draw()
        .map_err(|e| plot_err(&e))?;
    root.present().map_err(|e| plot_err(&e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::LambdaGrid;
    use crate::models::ModelKind;

    fn small(kind: StateKind) -> SweepConfig {
        SweepConfig {
            state_kind: kind,
            n_max: 12,
            lambda_grid: LambdaGrid::new(0.0, 2.0, 5).unwrap(),
            ..SweepConfig::default()
        }
    }

    #[test]
    fn row_format() {
        let row = SweepRow {
            lambda: 0.5,
            outcome: Ok(PointResult {
                lambda: 0.5,
                s: 0.0102024,
                sqrt_s: 0.101,
                n: 0.101007,
                trace_defect: 0.0,
                min_eigenvalue: -1e-17,
                top_level_weight: 0.0,
            }),
        };
        assert_eq!(
            format_row(&row),
            "5.00000000000e-1,1.02024000000e-2,1.01000000000e-1,1.01007000000e-1,\
             0.00000000000e0,-1.00000000000e-17,"
        );
        let bad = SweepRow {
            lambda: 1.0,
            outcome: Err(Error::Parameter("a, b\nc".into())),
        };
        assert_eq!(
            format_row(&bad),
            "1.00000000000e0,,,,,,invalid parameter: a; b c"
        );
        assert_eq!(format_row(&row).split(',').count(), 7);
        assert_eq!(format_row(&bad).split(',').count(), 7);
    }

    #[test]
    fn serial_and_parallel_agree() {
        for kind in [StateKind::Thermal, StateKind::Sector] {
            let cfg = small(kind);
            let a = csv_string(&run_sweep(&cfg, Execution::Serial));
            let b = csv_string(&run_sweep(&cfg, Execution::Parallel));
            assert_eq!(a, b);
            assert_eq!(a.lines().count(), 6);
        }
    }

    #[test]
    fn failures_stay_in_their_row() {
        let cfg = SweepConfig {
            model: ModelKind::QrmEps,
            epsilon: 0.2,
            ..small(StateKind::Thermal)
        };
        let mut rows = run_sweep(&cfg, Execution::Serial);
        rows.insert(
            2,
            SweepRow {
                lambda: 9.0,
                outcome: evaluate_point(&small(StateKind::Sector), f64::NAN),
            },
        );
        assert!(rows[2].outcome.is_err());
        let text = csv_string(&rows);
        assert_eq!(text.lines().count(), 7);
        assert!(text
            .lines()
            .nth(3)
            .unwrap()
            .ends_with(|c: char| c.is_ascii_alphanumeric()));
    }

    #[test]
    fn plot_writes_svg() {
        let dir = std::env::temp_dir().join(format!("mixent-plot-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p.svg");
        let rows = run_sweep(&small(StateKind::Thermal), Execution::Serial);
        plot_svg(&rows, "qrm thermal", &path).unwrap();
        let svg = std::fs::read_to_string(&path).unwrap();
        assert!(svg.contains("<svg"));
        // the solid curve is one polyline, the dashed one many short segments
        assert!(svg.contains("<polyline"));
        assert!(svg.matches("<line").count() > 20);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
