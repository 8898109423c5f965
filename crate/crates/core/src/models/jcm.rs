//! Closed-form Jaynes-Cummings results.
//!
//! The JCM conserves the excitation number, so it block-diagonalizes into the
//! one-dimensional `|down, 0>` sector and 2x2 blocks spanned by `|up, n-1>` and
//! `|down, n>`. In block `n` the energies are `(n - 1/2) +- Omega_n / 2` with
//! the Rabi frequency `Omega_n = sqrt(delta^2 + 4 lambda^2 n)`.

use faer::{c64, Mat};

use super::ModelParams;
use crate::error::{Error, Result};
use crate::operators::{BipartiteDims, DensityOperator};

/// `|lambda| = lambda_n` is taken as critical within this distance.
pub const TOL_CRIT: f64 = 1e-9;

/// Coupling at which the JCM ground state is two-fold degenerate between the
/// `n`- and `(n+1)`-excitation sectors.
///
/// `lambda_0 = sqrt(Delta)`; for `n >= 1` the crossing `E_{n,-} = E_{n+1,-}`
/// gives `lambda_n^2 = 2n + 1 + sqrt(4n(n+1) + delta^2)`.
pub fn critical_coupling(n: i64, delta: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Parameter(format!(
            "critical coupling index must be nonnegative, got {n}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Parameter(format!(
            "Delta must be positive and finite, got {delta}"
        )));
    }
    if n == 0 {
        return Ok(delta.sqrt());
    }
    let n = n as f64;
    let detuning = delta - 1.0;
    Ok((2.0 * n + 1.0 + (4.0 * n * (n + 1.0) + detuning * detuning).sqrt()).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `|eps_{0,0}> = |down, 0>`
    Ground,
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct JcmEigenpair {
    pub n: usize,
    pub branch: Branch,
    pub energy: f64,
    pub state: Vec<c64>,
    /// Mixing angle `theta_n`.
    pub theta: f64,
    /// Rabi frequency `Omega_n`.
    pub rabi_frequency: f64,
}

fn mixing_angle(n: usize, lambda: f64, detuning: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (2.0 * lambda * (n as f64).sqrt()).atan2(detuning)
}

fn rabi_frequency(n: usize, lambda: f64, detuning: f64) -> f64 {
    (detuning * detuning + 4.0 * lambda * lambda * n as f64).sqrt()
}

/// Analytic eigenpairs of the `n`-excitation block: one pair for `n = 0`,
/// otherwise `[plus, minus]`.
pub fn jcm_eigensystem(params: &ModelParams, n: usize) -> Result<Vec<JcmEigenpair>> {
    params.validate()?;
    if n > params.n_max {
        return Err(Error::Truncation {
            n,
            n_max: params.n_max,
        });
    }
    let dims = params.dims();
    let detuning = params.detuning();
    let unit = |s: usize, m: usize| -> Result<usize> { dims.index(s, m) };
    let zero = c64::new(0.0, 0.0);

    if n == 0 {
        let mut state = vec![zero; dims.total()];
        state[unit(0, 0)?] = c64::new(1.0, 0.0);
        return Ok(vec![JcmEigenpair {
            n,
            branch: Branch::Ground,
            energy: -params.delta / 2.0,
            state,
            theta: 0.0,
            rabi_frequency: detuning.abs(),
        }]);
    }

    let theta = mixing_angle(n, params.lambda, detuning);
    let omega = rabi_frequency(n, params.lambda, detuning);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let up = unit(1, n - 1)?;
    let down = unit(0, n)?;
    let centre = n as f64 - 0.5;

    let mut plus = vec![zero; dims.total()];
    plus[up] = c64::new(c, 0.0);
    plus[down] = c64::new(s, 0.0);
    let mut minus = vec![zero; dims.total()];
    minus[up] = c64::new(-s, 0.0);
    minus[down] = c64::new(c, 0.0);

    Ok(vec![
        JcmEigenpair {
            n,
            branch: Branch::Plus,
            energy: centre + omega / 2.0,
            state: plus,
            theta,
            rabi_frequency: omega,
        },
        JcmEigenpair {
            n,
            branch: Branch::Minus,
            energy: centre - omega / 2.0,
            state: minus,
            theta,
            rabi_frequency: omega,
        },
    ])
}

/// Which zero-temperature ground-state structure a coupling falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JcmRegime {
    /// `lambda_{n-1} < |lambda| < lambda_n`: unique ground state with `n` excitations.
    Unique { n: usize },
    /// `|lambda| = lambda_n`: ground states with `n` and `n + 1` excitations.
    Critical { n: usize },
}

impl JcmRegime {
    pub fn classify(delta: f64, lambda: f64) -> Result<Self> {
        let g = lambda.abs();
        let mut n = 0i64;
        loop {
            let crit = critical_coupling(n, delta)?;
            if (g - crit).abs() <= TOL_CRIT {
                return Ok(JcmRegime::Critical { n: n as usize });
            }
            if g < crit {
                return Ok(JcmRegime::Unique { n: n as usize });
            }
            n += 1;
        }
    }
}

/// `lambda^2 n / (delta^2 + 4 lambda^2 n)`, the `S` of `|eps_{n,-}>`.
fn block_violation(n: usize, lambda: f64, detuning: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let l2n = lambda * lambda * n as f64;
    l2n / (detuning * detuning + 4.0 * l2n)
}

/// Zero-temperature `S` of the JCM thermal state.
pub fn jcm_thermal_s_analytic(delta: f64, lambda: f64) -> Result<f64> {
    let detuning = delta - 1.0;
    Ok(match JcmRegime::classify(delta, lambda)? {
        JcmRegime::Unique { n } => block_violation(n, lambda, detuning),
        JcmRegime::Critical { n } => {
            0.25 * (block_violation(n, lambda, detuning) + block_violation(n + 1, lambda, detuning))
        }
    })
}

/// Zero-temperature negativity of the JCM thermal state.
pub fn jcm_thermal_n_analytic(delta: f64, lambda: f64) -> Result<f64> {
    let detuning = delta - 1.0;
    Ok(match JcmRegime::classify(delta, lambda)? {
        JcmRegime::Unique { n } => block_violation(n, lambda, detuning).sqrt(),
        JcmRegime::Critical { n } => {
            let t = mixing_angle(n, lambda, detuning);
            let t1 = mixing_angle(n + 1, lambda, detuning);
            let s_half1 = (t1 / 2.0).sin().powi(2);
            let c_half = (t / 2.0).cos().powi(2);
            0.25 * ((s_half1 * s_half1 + t.sin().powi(2)).sqrt() - s_half1
                + (c_half * c_half + t1.sin().powi(2)).sqrt()
                - c_half)
        }
    })
}

/// The `beta -> infinity` JCM thermal state assembled from analytic eigenvectors:
/// `|eps_{n,-}><eps_{n,-}|` off-critical, the equal mixture with the
/// `(n+1)`-sector ground state at a critical coupling.
pub fn jcm_zero_temperature(params: &ModelParams) -> Result<DensityOperator> {
    let ground = |n: usize| -> Result<Vec<c64>> {
        let pairs = jcm_eigensystem(params, n)?;
        Ok(pairs.last().expect("nonempty").state.clone())
    };
    let dims: BipartiteDims = params.dims();
    let dim = dims.total();
    let matrix = match JcmRegime::classify(params.delta, params.lambda)? {
        JcmRegime::Unique { n } => {
            let v = ground(n)?;
            Mat::from_fn(dim, dim, |i, j| v[i] * v[j].conj())
        }
        JcmRegime::Critical { n } => {
            let a = ground(n)?;
            let b = ground(n + 1)?;
            Mat::from_fn(dim, dim, |i, j| {
                (a[i] * a[j].conj() + b[i] * b[j].conj()) * 0.5
            })
        }
    };
    DensityOperator::new(matrix, dims)
}
