//! Negativity, the Cauchy-Schwarz violation functional `S` and the Sylvester
//! principal-minor diagnostic.
//!
//! `S(rho)` sums, over pairs of partially transposed basis states, how far the
//! coherence `|M_ij|^2` exceeds the population product `M_ii M_jj`. A positive
//! term is a negative 2x2 principal minor of `rho^PT`, so `S > 0` certifies a
//! negative eigenvalue and therefore nonzero negativity. The converse does not
//! hold: negativity can come entirely from larger minors.

use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::operators::{
    eigvalsh, hermiticity_defect, partial_transpose, DensityOperator, TOL_HERM,
};

/// Eigenvalues of `rho^PT` above `-TOL_NEG` are treated as zero.
pub const TOL_NEG: f64 = 1e-10;
/// Principal minors above `-TOL_MINOR` count as nonnegative.
pub const TOL_MINOR: f64 = 1e-12;
/// Largest dimension accepted by [`principal_minor_witness`].
pub const MAX_EXHAUSTIVE_DIM: usize = 12;

/// One positive term of `S`: rows/columns of `rho^PT` (composite indices,
/// `row > col`) and `|M_rc|^2 - M_rr M_cc`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsvViolation {
    pub row: usize,
    pub col: usize,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvReport {
    /// The functional `S`; equals the sum of `violating_pairs` magnitudes.
    pub s: f64,
    /// Every strictly positive term, largest first.
    pub violating_pairs: Vec<CsvViolation>,
}

impl CsvReport {
    pub fn sqrt_s(&self) -> f64 {
        self.s.sqrt()
    }

    pub fn top(&self, k: usize) -> &[CsvViolation] {
        &self.violating_pairs[..k.min(self.violating_pairs.len())]
    }
}

/// Sum of `|lambda|` over the negative eigenvalues of `rho^PT`.
pub fn negativity(rho: &DensityOperator) -> Result<f64> {
    let pt = partial_transpose(rho);
    negativity_of_pt(pt.as_ref())
}

pub(crate) fn negativity_of_pt(pt: MatRef<'_, c64>) -> Result<f64> {
    let values = eigvalsh(pt)?;
    Ok(values
        .iter()
        .filter(|&&v| v < -TOL_NEG)
        .fold(0.0, |acc, v| acc + v.abs()))
}

/// Smallest eigenvalue of `rho^PT`.
pub fn min_pt_eigenvalue(rho: &DensityOperator) -> Result<f64> {
    let values = eigvalsh(partial_transpose(rho).as_ref())?;
    Ok(values.first().copied().unwrap_or(0.0))
}

/// Cauchy-Schwarz violation of `rho^PT` with per-pair attribution.
pub fn csv_s(rho: &DensityOperator) -> CsvReport {
    csv_of_pt(partial_transpose(rho).as_ref())
}

pub(crate) fn csv_of_pt(pt: MatRef<'_, c64>) -> CsvReport {
    let n = pt.nrows();
    let diag: Vec<f64> = (0..n).map(|i| pt[(i, i)].re).collect();
    let mut pairs = Vec::new();
    for row in 0..n {
        for col in 0..row {
            let magnitude = pt[(row, col)].norm_sqr() - diag[row] * diag[col];
            if magnitude > 0.0 {
                pairs.push(CsvViolation {
                    row,
                    col,
                    magnitude,
                });
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.magnitude
            .total_cmp(&a.magnitude)
            .then((a.row, a.col).cmp(&(b.row, b.col)))
    });
    let s = pairs.iter().fold(0.0, |acc, p| acc + p.magnitude);
    CsvReport {
        s,
        violating_pairs: pairs,
    }
}

/// `S` evaluated directly on `rho` without forming `rho^PT`.
///
/// Sums `max{|<k,j|rho|i,l>|^2 - <i,j|rho|i,j><k,l|rho|k,l>, 0}` over
/// `i > k` and `j != l`. Pairs sharing an A label or a B label are entries of
/// `rho` itself under the partial transpose and cannot violate the inequality
/// for a positive `rho`, so for valid input this agrees with [`csv_s`].
pub fn csv_direct(rho: &DensityOperator) -> f64 {
    let dims = rho.dims();
    let (d_a, d_b) = (dims.d_a(), dims.d_b());
    let m = rho.matrix();
    let at = |s: usize, n: usize| s * d_b + n;
    let mut total = 0.0;
    for i in 0..d_a {
        for k in 0..i {
            for j in 0..d_b {
                for l in 0..d_b {
                    if j == l {
                        continue;
                    }
                    let coherence = m[(at(k, j), at(i, l))].norm_sqr();
                    let support = m[(at(i, j), at(i, j))].re * m[(at(k, l), at(k, l))].re;
                    total += (coherence - support).max(0.0);
                }
            }
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq)]
pub enum MinorWitness {
    /// No principal minor up to the requested order is below `-TOL_MINOR`.
    Pass,
    /// The first failing index set, smallest order first then lexicographic.
    Fail { indices: Vec<usize>, minor: f64 },
}

impl MinorWitness {
    pub fn passed(&self) -> bool {
        matches!(self, MinorWitness::Pass)
    }
}

/// Exhaustive Sylvester check of a Hermitian matrix over all principal minors
/// of order `1..=max_order`.
pub fn principal_minor_witness(a: MatRef<'_, c64>, max_order: usize) -> Result<MinorWitness> {
    let dim = a.nrows();
    if a.ncols() != dim {
        return Err(Error::Shape {
            expected: "square matrix".into(),
            found: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    if dim > MAX_EXHAUSTIVE_DIM {
        return Err(Error::Capability {
            dim,
            max: MAX_EXHAUSTIVE_DIM,
        });
    }
    if max_order == 0 || max_order > dim {
        return Err(Error::Parameter(format!(
            "max_order must lie in 1..={dim}, got {max_order}"
        )));
    }
    let defect = hermiticity_defect(a);
    if defect > TOL_HERM {
        return Err(Error::NotHermitian { defect });
    }

    for order in 1..=max_order {
        let mut subset: Vec<usize> = (0..order).collect();
        loop {
            let sub = Mat::from_fn(order, order, |r, c| a[(subset[r], subset[c])]);
            let minor = sub.as_ref().determinant().re;
            if minor < -TOL_MINOR {
                return Ok(MinorWitness::Fail {
                    indices: subset,
                    minor,
                });
            }
            if !next_combination(&mut subset, dim) {
                break;
            }
        }
    }
    Ok(MinorWitness::Pass)
}

/// Advances `subset` to the next `k`-combination of `0..n` in lexicographic
/// order; false once exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
