//! Two-level system coupled to one truncated boson mode.
//!
//! Subsystem A is the two-level system with `s = 0` for `|down>` and `s = 1`
//! for `|up>`, so `sigma_z = diag(-1, +1)`. Subsystem B is the boson mode
//! truncated at `n_max` quanta. Energies are in units of the boson frequency.

mod jcm;

use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::operators::{kron, BipartiteDims, HermitianOperator};

pub use jcm::{
    critical_coupling, jcm_eigensystem, jcm_thermal_n_analytic, jcm_thermal_s_analytic,
    jcm_zero_temperature, Branch, JcmEigenpair, JcmRegime, TOL_CRIT,
};

/// Boson truncation used for all reference results.
pub const DEFAULT_N_MAX: usize = 45;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Two-level splitting `Delta`.
    pub delta: f64,
    /// Qubit-boson coupling `lambda`.
    pub lambda: f64,
    /// Parity-breaking field `epsilon` (only used by [`build_qrm_eps`]).
    pub epsilon: f64,
    pub n_max: usize,
}

impl ModelParams {
    pub fn new(delta: f64, lambda: f64, n_max: usize) -> Self {
        Self {
            delta,
            lambda,
            epsilon: 0.0,
            n_max,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// `delta - 1`, the qubit-boson detuning.
    pub fn detuning(&self) -> f64 {
        self.delta - 1.0
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims::qubit_boson(self.n_max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::Parameter(format!(
                "n_max must be at least 1, got {}",
                self.n_max
            )));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::Parameter(format!(
                "Delta must be positive and finite, got {}",
                self.delta
            )));
        }
        if !self.lambda.is_finite() || !self.epsilon.is_finite() {
            return Err(Error::Parameter("lambda and epsilon must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Jcm,
    Qrm,
    QrmEps,
}

impl ModelKind {
    pub fn build(self, params: &ModelParams) -> Result<HermitianOperator> {
        match self {
            ModelKind::Jcm => build_jcm(params),
            ModelKind::Qrm => build_qrm(params),
            ModelKind::QrmEps => build_qrm_eps(params),
        }
    }

    /// Whether the Hamiltonian commutes with the Z2 parity for these params.
    pub fn has_parity(self, params: &ModelParams) -> bool {
        !matches!(self, ModelKind::QrmEps) || params.epsilon == 0.0
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Jcm => "jcm",
            ModelKind::Qrm => "qrm",
            ModelKind::QrmEps => "qrm_eps",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jcm" => Ok(ModelKind::Jcm),
            "qrm" => Ok(ModelKind::Qrm),
            "qrm_eps" => Ok(ModelKind::QrmEps),
            other => Err(Error::Parameter(format!(
                "unknown model '{other}' (expected jcm, qrm or qrm_eps)"
            ))),
        }
    }
}

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

fn scaled(m: Mat<c64>, x: f64) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * x)
}

fn dagger(m: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

fn identity(n: usize) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| if i == j { re(1.0) } else { re(0.0) })
}

fn sigma_z() -> Mat<c64> {
    Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => re(-1.0),
        (1, 1) => re(1.0),
        _ => re(0.0),
    })
}

fn sigma_x() -> Mat<c64> {
    Mat::from_fn(2, 2, |i, j| if i != j { re(1.0) } else { re(0.0) })
}

/// `|up><down|`
fn sigma_plus() -> Mat<c64> {
    Mat::from_fn(
        2,
        2,
        |i, j| if (i, j) == (1, 0) { re(1.0) } else { re(0.0) },
    )
}

/// Truncated annihilation operator; `a|n> = sqrt(n)|n-1>`.
fn annihilation(n_max: usize) -> Mat<c64> {
    let d = n_max + 1;
    Mat::from_fn(d, d, |i, j| {
        if j == i + 1 {
            re((j as f64).sqrt())
        } else {
            re(0.0)
        }
    })
}

/// `a^dagger a` built directly as `diag(0..=n_max)`.
fn number(n_max: usize) -> Mat<c64> {
    let d = n_max + 1;
    Mat::from_fn(d, d, |i, j| if i == j { re(i as f64) } else { re(0.0) })
}

/// `(Delta/2) sigma_z + a^dagger a`
fn bare(params: &ModelParams) -> Mat<c64> {
    let d_b = params.n_max + 1;
    let sz = kron(sigma_z().as_ref(), identity(d_b).as_ref());
    let n = kron(identity(2).as_ref(), number(params.n_max).as_ref());
    scaled(sz, params.delta / 2.0) + n
}

/// `sigma_x (a + a^dagger)`
fn sigma_x_position(n_max: usize) -> Mat<c64> {
    let a = annihilation(n_max);
    let x = &a + dagger(&a);
    kron(sigma_x().as_ref(), x.as_ref())
}

fn finish(matrix: Mat<c64>, params: &ModelParams) -> Result<HermitianOperator> {
    HermitianOperator::new(matrix, params.dims())
}

/// `H_QRM = (Delta/2) sigma_z + a^dagger a + lambda sigma_x (a + a^dagger)`
pub fn build_qrm(params: &ModelParams) -> Result<HermitianOperator> {
    params.validate()?;
    let h = bare(params) + scaled(sigma_x_position(params.n_max), params.lambda);
    finish(h, params)
}

/// `H_JCM = (Delta/2) sigma_z + lambda (sigma^- a^dagger + sigma^+ a) + a^dagger a`
pub fn build_jcm(params: &ModelParams) -> Result<HermitianOperator> {
    params.validate()?;
    let sp = sigma_plus();
    let a = annihilation(params.n_max);
    let rotating = kron(dagger(&sp).as_ref(), dagger(&a).as_ref()) + kron(sp.as_ref(), a.as_ref());
    let h = bare(params) + scaled(rotating, params.lambda);
    finish(h, params)
}

/// `H_eps = H_QRM + epsilon sigma_x`
pub fn build_qrm_eps(params: &ModelParams) -> Result<HermitianOperator> {
    params.validate()?;
    let field = kron(sigma_x().as_ref(), identity(params.n_max + 1).as_ref());
    let h = bare(params)
        + scaled(sigma_x_position(params.n_max), params.lambda)
        + scaled(field, params.epsilon);
    finish(h, params)
}

/// Counter-rotating part `lambda (sigma^+ a^dagger + sigma^- a)` dropped by the JCM.
pub fn counter_rotating(params: &ModelParams) -> Result<HermitianOperator> {
    params.validate()?;
    let sp = sigma_plus();
    let a = annihilation(params.n_max);
    let h = kron(sp.as_ref(), dagger(&a).as_ref()) + kron(dagger(&sp).as_ref(), a.as_ref());
    let h = scaled(h, params.lambda);
    finish(h, params)
}

/// Bath coupling operator `T = sigma_x (a^dagger + a)`.
pub fn coupling_operator(dims: BipartiteDims) -> Result<HermitianOperator> {
    check_qubit(dims)?;
    HermitianOperator::new(sigma_x_position(dims.d_b() - 1), dims)
}

fn check_qubit(dims: BipartiteDims) -> Result<()> {
    if dims.d_a() != 2 {
        return Err(Error::Shape {
            expected: "two-level subsystem A".into(),
            found: format!("d_A = {}", dims.d_a()),
        });
    }
    Ok(())
}

/// Excitation number `(sigma_z + 1)/2 + a^dagger a`: `|s, n>` carries `s + n`.
pub fn excitation_number(dims: BipartiteDims) -> Result<HermitianOperator> {
    check_qubit(dims)?;
    let diag: Vec<f64> = (0..dims.total())
        .map(|idx| (idx / dims.d_b() + idx % dims.d_b()) as f64)
        .collect();
    HermitianOperator::from_real_diagonal(&diag, dims)
}

/// `P = -sigma_z (-1)^{a^dagger a}`; `|s, n>` has parity `(-1)^{s+n}`.
pub fn parity(dims: BipartiteDims) -> Result<HermitianOperator> {
    check_qubit(dims)?;
    let diag: Vec<f64> = (0..dims.total())
        .map(|idx| parity_sign(idx / dims.d_b() + idx % dims.d_b()))
        .collect();
    HermitianOperator::from_real_diagonal(&diag, dims)
}

fn parity_sign(excitations: usize) -> f64 {
    if excitations.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(P_e, P_o) = ((1 + P)/2, (1 - P)/2)`.
pub fn parity_projectors(dims: BipartiteDims) -> Result<(HermitianOperator, HermitianOperator)> {
    check_qubit(dims)?;
    let even: Vec<f64> = (0..dims.total())
        .map(|idx| (1.0 + parity_sign(idx / dims.d_b() + idx % dims.d_b())) / 2.0)
        .collect();
    let odd: Vec<f64> = even.iter().map(|e| 1.0 - e).collect();
    Ok((
        HermitianOperator::from_real_diagonal(&even, dims)?,
        HermitianOperator::from_real_diagonal(&odd, dims)?,
    ))
}
