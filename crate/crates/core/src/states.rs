//! Gibbs states and parity-sector steady states.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::operators::{
    eigh, max_abs, trace, DensityOperator, Eigensystem, HermitianOperator, TOL_HERM, TOL_TRACE,
};

/// Populations and inverse temperatures of the two parity sectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorParams {
    pub p_even: f64,
    pub p_odd: f64,
    pub beta_even: f64,
    pub beta_odd: f64,
}

impl SectorParams {
    pub fn new(p_even: f64, p_odd: f64, beta_even: f64, beta_odd: f64) -> Result<Self> {
        let sp = Self {
            p_even,
            p_odd,
            beta_even,
            beta_odd,
        };
        sp.validate()?;
        Ok(sp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_even >= 0.0 && self.p_odd >= 0.0) {
            return Err(Error::Parameter(format!(
                "sector populations must be nonnegative, got ({}, {})",
                self.p_even, self.p_odd
            )));
        }
        if (self.p_even + self.p_odd - 1.0).abs() > TOL_TRACE {
            return Err(Error::Parameter(format!(
                "sector populations must sum to 1, got {}",
                self.p_even + self.p_odd
            )));
        }
        check_beta(self.beta_even)?;
        check_beta(self.beta_odd)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Parameter(format!(
            "inverse temperature must be positive and finite, got {beta}"
        )));
    }
    Ok(())
}

/// Normalized Boltzmann weights `exp(-beta (E - E_min))`.
fn boltzmann_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let ground = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = energies
        .iter()
        .map(|e| (-beta * (e - ground)).exp())
        .collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    w
}

/// `V diag(w) V^H`
fn reassemble(es: &Eigensystem, weights: &[f64]) -> Mat<c64> {
    let v = es.vectors.as_ref();
    let (n, k) = (v.nrows(), v.ncols());
    let scaled = Mat::from_fn(n, k, |i, j| v[(i, j)] * weights[j]);
    let adj = Mat::from_fn(k, n, |i, j| v[(j, i)].conj());
    scaled * adj
}

/// Hermitizes and rescales to unit trace.
fn polish(m: MatRef<'_, c64>) -> Mat<c64> {
    let t = trace(m).re;
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * (0.5 / t)
    })
}

/// `exp(-beta H) / Z`, through the eigendecomposition of `H` with the ground
/// energy shifted to zero before exponentiation.
pub fn thermal_state(h: &HermitianOperator, beta: f64) -> Result<DensityOperator> {
    check_beta(beta)?;
    let es = eigh(h.matrix())?;
    let w = boltzmann_weights(&es.values, beta);
    let rho = polish(reassemble(&es, &w).as_ref());
    DensityOperator::new(rho, h.dims())
}

/// Orthonormal basis (columns) of the range of an orthogonal projector.
fn projector_range(p: &HermitianOperator) -> Result<Mat<c64>> {
    let es = eigh(p.matrix())?;
    let keep: Vec<usize> = es
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(k, _)| k)
        .collect();
    for &v in &es.values {
        if v.abs() > 1e-8 && (v - 1.0).abs() > 1e-8 {
            return Err(Error::Parameter(format!(
                "not an orthogonal projector (eigenvalue {v})"
            )));
        }
    }
    let n = p.dim();
    Ok(Mat::from_fn(n, keep.len(), |i, j| es.vectors[(i, keep[j])]))
}

/// Gibbs state of `H` restricted to the range of `basis`, embedded back into
/// the full space with unit trace.
fn sector_gibbs(h: &HermitianOperator, basis: MatRef<'_, c64>, beta: f64) -> Result<Mat<c64>> {
    let (n, k) = (basis.nrows(), basis.ncols());
    let adj = Mat::from_fn(k, n, |i, j| basis[(j, i)].conj());
    let block = &adj * h.matrix() * basis;
    let block = Mat::from_fn(k, k, |i, j| (block[(i, j)] + block[(j, i)].conj()) * 0.5);
    let es = eigh(block.as_ref())?;
    let w = boltzmann_weights(&es.values, beta);
    let gibbs = reassemble(&es, &w);
    Ok(basis * gibbs * adj)
}

/// `p_e P_e e^{-beta_e H} P_e / Z_e + p_o P_o e^{-beta_o H} P_o / Z_o`.
///
/// Each sector's Gibbs block is computed from `H` restricted to that sector's
/// range, which stays well conditioned at large `beta`. Requires `[H, P_e] = 0`.
pub fn sector_steady_state(
    h: &HermitianOperator,
    p_even: &HermitianOperator,
    p_odd: &HermitianOperator,
    sector: &SectorParams,
) -> Result<DensityOperator> {
    sector.validate()?;
    let defect = h.commutator_norm(p_even);
    if defect > TOL_HERM * max_abs(h.matrix()).max(1.0) {
        return Err(Error::SymmetryViolation { defect });
    }
    let even = projector_range(p_even)?;
    let odd = projector_range(p_odd)?;
    if even.ncols() + odd.ncols() != h.dim() {
        return Err(Error::Parameter(
            "sector projectors do not resolve the identity".into(),
        ));
    }

    let dim = h.dim();
    let mut rho = Mat::<c64>::zeros(dim, dim);
    for (basis, p, beta) in [
        (&even, sector.p_even, sector.beta_even),
        (&odd, sector.p_odd, sector.beta_odd),
    ] {
        if p == 0.0 {
            continue;
        }
        if basis.ncols() == 0 {
            return Err(Error::Parameter(
                "nonzero population assigned to an empty sector".into(),
            ));
        }
        let g = sector_gibbs(h, basis.as_ref(), beta)?;
        rho += Mat::from_fn(dim, dim, |i, j| g[(i, j)] * p);
    }
    DensityOperator::new(polish(rho.as_ref()), h.dims())
}

/// Trace of `H` restricted to a projector's range of `exp(-beta (H - E_0))`,
/// with `E_0` the global ground energy. Ratios of these give the sector
/// populations of the ordinary Gibbs state.
pub fn sector_partition_function(
    h: &HermitianOperator,
    projector: &HermitianOperator,
    beta: f64,
) -> Result<f64> {
    check_beta(beta)?;
    let ground = eigh(h.matrix())?.values[0];
    let basis = projector_range(projector)?;
    let (n, k) = (basis.nrows(), basis.ncols());
    let adj = Mat::from_fn(k, n, |i, j| basis[(j, i)].conj());
    let block = &adj * h.matrix() * &basis;
    let block = Mat::from_fn(k, k, |i, j| (block[(i, j)] + block[(j, i)].conj()) * 0.5);
    let es = eigh(block.as_ref())?;
    Ok(es.values.iter().map(|e| (-beta * (e - ground)).exp()).sum())
}
