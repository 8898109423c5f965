//! Regression runner over the published reference values and the
//! qualitative features of the coupling sweeps.

use std::fmt;

use crate::entanglement::{csv_s, negativity};
use crate::error::Result;
use crate::models::{
    build_jcm, build_qrm, build_qrm_eps, critical_coupling, jcm_thermal_n_analytic,
    jcm_thermal_s_analytic, parity_projectors, ModelParams, DEFAULT_N_MAX, TOL_CRIT,
};
use crate::operators::{hermitian_eigensystem, DensityOperator};
use crate::states::{sector_steady_state, thermal_state, SectorParams};

use super::sweep::TRUNCATION_WARNING;

/// Inverse temperature of every published sweep.
pub const REFERENCE_BETA: f64 = 90.0;
/// Detuning of the published QRM values.
pub const REFERENCE_DELTA: f64 = 2.0;
/// Relative tolerance on published three-digit values.
pub const PUBLISHED_TOLERANCE: f64 = 0.02;
/// Absolute tolerance between closed-form and numerical JCM values.
pub const JCM_TOLERANCE: f64 = 1e-3;

/// Published `(lambda, S, N)` of the QRM thermal state at `Delta = 2`, `beta = 90`.
pub const QRM_REFERENCE: [(f64, f64, f64); 3] = [
    (0.3, 0.0102, 0.101),
    (1.3, 0.207, 0.454),
    (2.3, 0.00334, 0.0122),
];

#[derive(Clone, Copy, Debug)]
pub struct CheckpointOptions {
    pub n_max: usize,
    /// Detuning of the parameterized JCM checks.
    pub delta: f64,
}

impl Default for CheckpointOptions {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            delta: REFERENCE_DELTA,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    /// What the pass condition compares, e.g. `rel 2.0e-2`.
    pub criterion: String,
    pub passed: bool,
    /// Set when the state behind the value is under-truncated.
    pub warning: Option<String>,
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<50} value {:>13.6e}  ref {:>13.6e}  ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.reference,
            self.criterion
        )?;
        if let Some(w) = &self.warning {
            write!(f, "  WARNING: {w}")?;
        }
        Ok(())
    }
}

fn truncation_warning(rho: &DensityOperator) -> Option<String> {
    let w = rho.top_level_weight();
    (w > TRUNCATION_WARNING).then(|| {
        format!(
            "top boson level holds {w:.1e} of the population; increase n_max (now {})",
            rho.dims().d_b() - 1
        )
    })
}

fn relative(name: String, value: f64, reference: f64, warning: Option<String>) -> Checkpoint {
    let delta = ((value - reference) / reference).abs();
    Checkpoint {
        name,
        value,
        reference,
        criterion: format!("rel {:.1e} <= {PUBLISHED_TOLERANCE:.0e}", delta),
        passed: delta <= PUBLISHED_TOLERANCE,
        warning,
    }
}

fn absolute(name: String, value: f64, reference: f64, tol: f64) -> Checkpoint {
    let delta = (value - reference).abs();
    Checkpoint {
        name,
        value,
        reference,
        criterion: format!("abs {delta:.1e} <= {tol:.0e}"),
        passed: delta <= tol,
        warning: None,
    }
}

/// `value < reference` style checks; `reference` is the bound.
fn below(name: String, value: f64, bound: f64, warning: Option<String>) -> Checkpoint {
    Checkpoint {
        name,
        value,
        reference: bound,
        criterion: "value < ref".into(),
        passed: value < bound,
        warning,
    }
}

fn above(name: String, value: f64, bound: f64, warning: Option<String>) -> Checkpoint {
    Checkpoint {
        name,
        value,
        reference: bound,
        criterion: "value > ref".into(),
        passed: value > bound,
        warning,
    }
}

fn thermal_s_n(h: &crate::operators::HermitianOperator) -> Result<(f64, f64, DensityOperator)> {
    let rho = thermal_state(h, REFERENCE_BETA)?;
    Ok((csv_s(&rho).s, negativity(&rho)?, rho))
}

fn peak_negativity(delta: f64, epsilon: f64, n_max: usize) -> Result<(f64, f64)> {
    let mut best = (0.0, 0.0);
    for k in 0..=140 {
        let lambda = 3.5 * k as f64 / 140.0;
        let params = ModelParams::new(delta, lambda, n_max).with_epsilon(epsilon);
        let h = if epsilon == 0.0 {
            build_qrm(&params)?
        } else {
            build_qrm_eps(&params)?
        };
        let n = negativity(&thermal_state(&h, REFERENCE_BETA)?)?;
        if n > best.1 {
            best = (lambda, n);
        }
    }
    Ok(best)
}

pub fn run_checkpoints(opts: &CheckpointOptions) -> Result<Vec<Checkpoint>> {
    let mut out = Vec::new();
    let n_max = opts.n_max;

    for (lambda, s_ref, n_ref) in QRM_REFERENCE {
        let params = ModelParams::new(REFERENCE_DELTA, lambda, n_max);
        let (s, n, rho) = thermal_s_n(&build_qrm(&params)?)?;
        let warn = truncation_warning(&rho);
        out.push(relative(
            format!("qrm thermal S  lambda={lambda}"),
            s,
            s_ref,
            warn.clone(),
        ));
        out.push(relative(
            format!("qrm thermal N  lambda={lambda}"),
            n,
            n_ref,
            warn,
        ));
    }

    let delta = opts.delta;
    for lambda in [0.5, 1.8, 2.0, 2.8] {
        let params = ModelParams::new(delta, lambda, n_max);
        let (s, n, rho) = thermal_s_n(&build_jcm(&params)?)?;
        let mut cs = absolute(
            format!("jcm S vs closed form  delta={delta} lambda={lambda}"),
            s,
            jcm_thermal_s_analytic(delta, lambda)?,
            JCM_TOLERANCE,
        );
        cs.warning = truncation_warning(&rho);
        out.push(cs);
        out.push(absolute(
            format!("jcm N vs closed form  delta={delta} lambda={lambda}"),
            n,
            jcm_thermal_n_analytic(delta, lambda)?,
            JCM_TOLERANCE,
        ));
    }

    let lambda0 = critical_coupling(0, delta)?;
    out.push(absolute(
        format!("lambda_0 = sqrt(delta)  delta={delta}"),
        lambda0,
        delta.sqrt(),
        1e-12,
    ));
    let es = hermitian_eigensystem(&build_jcm(&ModelParams::new(delta, lambda0, n_max))?)?;
    out.push(absolute(
        "jcm ground degeneracy at lambda_0".into(),
        es.values[1] - es.values[0],
        0.0,
        TOL_CRIT,
    ));

    // S dips at every critical coupling
    let jcm_s = |lambda: f64| -> Result<f64> {
        Ok(thermal_s_n(&build_jcm(&ModelParams::new(delta, lambda, n_max))?)?.0)
    };
    for n in 0..=2 {
        let lc = critical_coupling(n, delta)?;
        let right = jcm_s(lc + 0.05)?;
        let neighbours = if n == 0 {
            right
        } else {
            right.min(jcm_s(lc - 0.05)?)
        };
        out.push(below(
            format!("jcm S dips at lambda_{n} = {lc:.4}"),
            jcm_s(lc)?,
            neighbours,
            None,
        ));
    }

    let (peak_lambda, peak) = peak_negativity(REFERENCE_DELTA, 0.0, n_max)?;
    let tail_params = ModelParams::new(REFERENCE_DELTA, 3.5, n_max);
    let (_, tail, tail_rho) = thermal_s_n(&build_qrm(&tail_params)?)?;
    out.push(below(
        format!("qrm N non-monotone: N(3.5) < peak/2 (peak at {peak_lambda})"),
        tail,
        0.5 * peak,
        truncation_warning(&tail_rho),
    ));
    let (_, peak_eps) = peak_negativity(REFERENCE_DELTA, 0.1 * REFERENCE_DELTA, n_max)?;
    let ratio = peak_eps / peak;
    out.push(Checkpoint {
        name: "peak N(eps=0.1 delta) / peak N(eps=0) ~ 1/2".into(),
        value: ratio,
        reference: 0.5,
        criterion: "0.35 <= value <= 0.65".into(),
        passed: (0.35..=0.65).contains(&ratio),
        warning: None,
    });

    let params = ModelParams::new(REFERENCE_DELTA, 2.5, n_max);
    let h = build_qrm(&params)?;
    let (pe, po) = parity_projectors(params.dims())?;
    let sector = SectorParams::new(2.0 / 3.0, 1.0 / 3.0, REFERENCE_BETA, REFERENCE_BETA)?;
    let rho = sector_steady_state(&h, &pe, &po, &sector)?;
    out.push(above(
        "sector state N(2.5), p_e=2/3".into(),
        negativity(&rho)?,
        0.1,
        truncation_warning(&rho),
    ));
    let (_, n_thermal, rho_t) = thermal_s_n(&h)?;
    out.push(below(
        "qrm thermal N(2.5)".into(),
        n_thermal,
        0.05,
        truncation_warning(&rho_t),
    ));

    Ok(out)
}
