//! Diagnostic report for a single density operator.

use std::fmt;

use crate::entanglement::{csv_s, negativity, CsvViolation};
use crate::error::Result;
use crate::models::parity_projectors;
use crate::operators::{hermitian_eigensystem, BipartiteDims, DensityOperator, ValidationReport};

use super::config::SweepConfig;

/// Product-basis label: `|dn,n>` / `|up,n>` for a qubit, `|s,n>` otherwise.
pub fn basis_label(index: usize, dims: BipartiteDims) -> String {
    let (s, n) = (index / dims.d_b(), index % dims.d_b());
    if dims.d_a() == 2 {
        format!("|{},{n}>", if s == 0 { "dn" } else { "up" })
    } else {
        format!("|{s},{n}>")
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub dims: BipartiteDims,
    pub validation: ValidationReport,
    pub s: f64,
    pub n: f64,
    pub violating_pairs: usize,
    pub top_pairs: Vec<CsvViolation>,
    /// `(p_e, p_o)` when subsystem A is a qubit.
    pub parity_populations: Option<(f64, f64)>,
    /// `(E_k, <k|rho|k>)` in the eigenbasis of the Hamiltonian, when supplied.
    pub energy_populations: Option<Vec<(f64, f64)>>,
}

/// `hamiltonian` selects the eigenbasis for the population table.
pub fn analyze(
    rho: &DensityOperator,
    top_k: usize,
    hamiltonian: Option<(&SweepConfig, f64)>,
) -> Result<AnalysisReport> {
    let dims = rho.dims();
    let report = csv_s(rho);
    let parity_populations = if dims.d_a() == 2 {
        let (pe, po) = parity_projectors(dims)?;
        Some((rho.expectation(&pe), rho.expectation(&po)))
    } else {
        None
    };
    let energy_populations = match hamiltonian {
        Some((cfg, lambda)) => {
            let params = cfg.model_params(lambda);
            if params.dims() != dims {
                return Err(crate::Error::Shape {
                    expected: params.dims().to_string(),
                    found: dims.to_string(),
                });
            }
            let es = hermitian_eigensystem(&cfg.model.build(&params)?)?;
            let m = rho.matrix();
            let d = rho.dim();
            Some(
                (0..d)
                    .map(|k| {
                        let v = &es.vectors;
                        let mut p = 0.0;
                        for i in 0..d {
                            for j in 0..d {
                                p += (v[(i, k)].conj() * m[(i, j)] * v[(j, k)]).re;
                            }
                        }
                        (es.values[k], p)
                    })
                    .collect(),
            )
        }
        None => None,
    };
    Ok(AnalysisReport {
        dims,
        validation: rho.report(),
        s: report.s,
        n: negativity(rho)?,
        violating_pairs: report.violating_pairs.len(),
        top_pairs: report.top(top_k).to_vec(),
        parity_populations,
        energy_populations,
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dims        {}", self.dims)?;
        writeln!(f, "validation  {}", self.validation)?;
        writeln!(f, "S           {:.6e}", self.s)?;
        writeln!(f, "sqrt(S)     {:.6e}", self.s.sqrt())?;
        writeln!(f, "N           {:.6e}", self.n)?;
        if let Some((pe, po)) = self.parity_populations {
            writeln!(f, "p_e         {pe:.6e}")?;
            writeln!(f, "p_o         {po:.6e}")?;
        }
        writeln!(
            f,
            "violating pairs of rho^PT: {} (top {} shown)",
            self.violating_pairs,
            self.top_pairs.len()
        )?;
        for v in &self.top_pairs {
            writeln!(
                f,
                "  {:>10} {:>10}  {:.6e}",
                basis_label(v.row, self.dims),
                basis_label(v.col, self.dims),
                v.magnitude
            )?;
        }
        if let Some(pops) = &self.energy_populations {
            writeln!(f, "energy eigenbasis populations above 1e-6:")?;
            for (k, (e, p)) in pops.iter().enumerate() {
                if *p > 1e-6 {
                    writeln!(f, "  {k:>4}  E = {e:>12.6}  p = {p:.6e}")?;
                }
            }
        }
        Ok(())
    }
}
