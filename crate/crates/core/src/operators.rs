//! Bipartite indexing, Hermitian and density operators, the partial transpose
//! and the dense eigensolver contract the rest of the crate builds on.
//!
//! Basis ordering is spin-major: the product state `|s, n>` (subsystem A label
//! `s`, subsystem B label `n`) sits at composite index `s * d_B + n`. With this
//! layout the partial transpose over A is a transpose of the `d_A x d_A` grid of
//! `d_B x d_B` blocks, each block kept in place.

use std::fmt;

use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Max |M - M^H| accepted for a Hermitian matrix.
pub const TOL_HERM: f64 = 1e-10;
/// Max |Tr(rho) - 1| accepted for a density operator.
pub const TOL_TRACE: f64 = 1e-10;
/// Most negative eigenvalue accepted for a density operator.
pub const TOL_PSD: f64 = 1e-8;
/// Eigen-residual and unitarity tolerance of [`hermitian_eigensystem`].
pub const TOL_EIG: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub trace: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: TOL_HERM,
            trace: TOL_TRACE,
            psd: TOL_PSD,
        }
    }
}

/// Dimensions `(d_A, d_B)` of a bipartite Hilbert space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    d_a: usize,
    d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::Parameter(format!(
                "subsystem dimensions must be positive, got ({d_a}, {d_b})"
            )));
        }
        Ok(Self { d_a, d_b })
    }

    /// Two-level system times a boson mode truncated at `n_max` quanta.
    pub fn qubit_boson(n_max: usize) -> Self {
        Self {
            d_a: 2,
            d_b: n_max + 1,
        }
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn index(&self, s: usize, n: usize) -> Result<usize> {
        if s >= self.d_a {
            return Err(Error::IndexOutOfRange {
                label: "subsystem A",
                value: s,
                bound: self.d_a,
            });
        }
        if n >= self.d_b {
            return Err(Error::IndexOutOfRange {
                label: "subsystem B",
                value: n,
                bound: self.d_b,
            });
        }
        Ok(s * self.d_b + n)
    }

    /// Inverse of [`BipartiteDims::index`].
    pub fn split(&self, idx: usize) -> Result<(usize, usize)> {
        if idx >= self.total() {
            return Err(Error::IndexOutOfRange {
                label: "composite",
                value: idx,
                bound: self.total(),
            });
        }
        Ok((idx / self.d_b, idx % self.d_b))
    }

    fn check_square(&self, m: MatRef<'_, c64>) -> Result<()> {
        let dim = self.total();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Shape {
                expected: format!("{dim}x{dim} for dims ({}, {})", self.d_a, self.d_b),
                found: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

/// Composite index of `|s, n>`.
pub fn product_index(s: usize, n: usize, dims: BipartiteDims) -> Result<usize> {
    dims.index(s, n)
}

/// A Hermitian matrix on a bipartite space: Hamiltonians, symmetry operators,
/// projectors and bath coupling operators.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: Mat<c64>,
    dims: BipartiteDims,
}

impl HermitianOperator {
    pub fn new(matrix: Mat<c64>, dims: BipartiteDims) -> Result<Self> {
        dims.check_square(matrix.as_ref())?;
        let defect = hermiticity_defect(matrix.as_ref());
        if defect > TOL_HERM {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { matrix, dims })
    }

    pub fn from_real_diagonal(diag: &[f64], dims: BipartiteDims) -> Result<Self> {
        let dim = dims.total();
        if diag.len() != dim {
            return Err(Error::Shape {
                expected: format!("{dim} diagonal entries"),
                found: format!("{}", diag.len()),
            });
        }
        let matrix = Mat::from_fn(dim, dim, |i, j| {
            if i == j {
                c64::new(diag[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        Ok(Self { matrix, dims })
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    /// Max-entry norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &HermitianOperator) -> f64 {
        let a = self.matrix.as_ref();
        let b = other.matrix.as_ref();
        let c = a * b - b * a;
        max_abs(c.as_ref())
    }
}

/// Report produced by [`validate_density`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub tolerances: Tolerances,
}

impl ValidationReport {
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect <= self.tolerances.hermiticity
    }

    pub fn has_unit_trace(&self) -> bool {
        self.trace_defect <= self.tolerances.trace
    }

    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= -self.tolerances.psd
    }

    pub fn passed(&self) -> bool {
        self.is_hermitian() && self.has_unit_trace() && self.is_positive()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        write!(
            f,
            "hermiticity defect {:.3e} [{}], trace defect {:.3e} [{}], min eigenvalue {:.3e} [{}]",
            self.hermiticity_defect,
            mark(self.is_hermitian()),
            self.trace_defect,
            mark(self.has_unit_trace()),
            self.min_eigenvalue,
            mark(self.is_positive()),
        )
    }
}

/// Checks Hermiticity, unit trace and positivity of a candidate density matrix.
///
/// The eigenvalue check runs on the Hermitian part `(M + M^H)/2` so that a
/// non-Hermitian input still gets a meaningful positivity figure.
pub fn validate_density(
    matrix: MatRef<'_, c64>,
    dims: BipartiteDims,
    tolerances: &Tolerances,
) -> Result<ValidationReport> {
    dims.check_square(matrix)?;
    let hermiticity_defect = hermiticity_defect(matrix);
    let trace = trace(matrix);
    let trace_defect = ((trace.re - 1.0).powi(2) + trace.im.powi(2)).sqrt();
    let herm = hermitian_part(matrix);
    let values = eigvalsh(herm.as_ref())?;
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    Ok(ValidationReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        tolerances: *tolerances,
    })
}

/// A validated density operator on a bipartite space.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    matrix: Mat<c64>,
    dims: BipartiteDims,
}

impl DensityOperator {
    pub fn new(matrix: Mat<c64>, dims: BipartiteDims) -> Result<Self> {
        Self::with_tolerances(matrix, dims, &Tolerances::default())
    }

    pub fn with_tolerances(
        matrix: Mat<c64>,
        dims: BipartiteDims,
        tolerances: &Tolerances,
    ) -> Result<Self> {
        let report = validate_density(matrix.as_ref(), dims, tolerances)?;
        if !report.passed() {
            return Err(Error::InvalidDensity(report));
        }
        Ok(Self { matrix, dims })
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let dim = dims.total();
        let w = 1.0 / dim as f64;
        let matrix = Mat::from_fn(dim, dim, |i, j| {
            if i == j {
                c64::new(w, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        Self { matrix, dims }
    }

    /// `|psi><psi|` for the normalized `psi`.
    pub fn from_pure(psi: &[c64], dims: BipartiteDims) -> Result<Self> {
        let dim = dims.total();
        if psi.len() != dim {
            return Err(Error::Shape {
                expected: format!("state vector of length {dim}"),
                found: format!("{}", psi.len()),
            });
        }
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::Parameter(
                "state vector has zero or non-finite norm".into(),
            ));
        }
        let matrix = Mat::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj() / norm2);
        Self::new(matrix, dims)
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn report(&self) -> ValidationReport {
        validate_density(self.matrix.as_ref(), self.dims, &Tolerances::default())
            .expect("shape checked at construction")
    }

    /// `Re Tr(rho A)`.
    pub fn expectation(&self, op: &HermitianOperator) -> f64 {
        let n = self.dim();
        let (r, a) = (self.matrix.as_ref(), op.matrix());
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += (r[(i, k)] * a[(k, i)]).re;
            }
        }
        acc
    }

    /// Population of the highest boson level, summed over subsystem A.
    /// A sizable value means the truncation is too small.
    pub fn top_level_weight(&self) -> f64 {
        let d_b = self.dims.d_b();
        (0..self.dims.d_a())
            .map(|s| self.matrix[(s * d_b + d_b - 1, s * d_b + d_b - 1)].re)
            .sum()
    }
}

/// Partial transpose over subsystem A:
/// `<i,j| rho^PT |k,l> = <k,j| rho |i,l>`.
pub fn partial_transpose(rho: &DensityOperator) -> Mat<c64> {
    partial_transpose_matrix(rho.matrix(), rho.dims())
}

/// Partial transpose over subsystem A for an arbitrary square matrix.
///
/// # Panics
/// If `m` is not `dims.total()` square.
pub fn partial_transpose_matrix(m: MatRef<'_, c64>, dims: BipartiteDims) -> Mat<c64> {
    let dim = dims.total();
    assert!(
        m.nrows() == dim && m.ncols() == dim,
        "matrix does not match dims"
    );
    let d_b = dims.d_b();
    Mat::from_fn(dim, dim, |row, col| {
        let (i, j) = (row / d_b, row % d_b);
        let (k, l) = (col / d_b, col % d_b);
        m[(k * d_b + j, i * d_b + l)]
    })
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored column-wise.
#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Mat<c64>,
}

impl Eigensystem {
    pub fn vector(&self, k: usize) -> Vec<c64> {
        (0..self.vectors.nrows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

pub fn hermitian_eigensystem(h: &HermitianOperator) -> Result<Eigensystem> {
    eigh(h.matrix())
}

/// Dense Hermitian eigendecomposition of a raw matrix; only the lower triangle
/// is read.
pub(crate) fn eigh(m: MatRef<'_, c64>) -> Result<Eigensystem> {
    if m.nrows() == 0 {
        return Ok(Eigensystem {
            values: Vec::new(),
            vectors: Mat::zeros(0, 0),
        });
    }
    let m = flush_negligible(m);
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..m.nrows()).map(|i| s[i].re).collect();
    Ok(Eigensystem {
        values,
        vectors: evd.U().to_owned(),
    })
}

/// Entries below `NEGLIGIBLE * max|M|` set to zero. This moves eigenvalues by
/// at most `dim * NEGLIGIBLE * max|M|`, far below double precision, and keeps
/// the dense eigensolver away from the underflow range where it fails to
/// converge (e.g. Gibbs states at large `beta`).
fn flush_negligible(m: MatRef<'_, c64>) -> Mat<c64> {
    const NEGLIGIBLE: f64 = 1e-150;
    let floor = max_abs(m) * NEGLIGIBLE;
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        c64::new(
            if z.re.abs() < floor { 0.0 } else { z.re },
            if z.im.abs() < floor { 0.0 } else { z.im },
        )
    })
}

pub(crate) fn eigvalsh(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let values = flush_negligible(m)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    Ok(values)
}

pub(crate) fn hermiticity_defect(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitian_part(m: MatRef<'_, c64>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    })
}

pub(crate) fn trace(m: MatRef<'_, c64>) -> c64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

pub(crate) fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

pub(crate) fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Mat<c64> {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> c64 {
        c64::new(re, 0.0)
    }

    fn bell() -> DensityOperator {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityOperator::from_pure(&[c(s), c(0.0), c(0.0), c(s)], dims).unwrap()
    }

    #[test]
    fn product_index_convention() {
        let dims = BipartiteDims::new(2, 46).unwrap();
        assert_eq!(product_index(0, 0, dims).unwrap(), 0);
        assert_eq!(product_index(1, 0, dims).unwrap(), 46);
        assert_eq!(product_index(1, 45, dims).unwrap(), 91);
        assert!(matches!(
            product_index(2, 0, dims),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            product_index(0, 46, dims),
            Err(Error::IndexOutOfRange { .. })
        ));
        for idx in 0..dims.total() {
            let (s, n) = dims.split(idx).unwrap();
            assert_eq!(dims.index(s, n).unwrap(), idx);
        }
        assert!(BipartiteDims::new(0, 3).is_err());
    }

    #[test]
    fn bell_partial_transpose() {
        let pt = partial_transpose(&bell());
        // |0,1> is index 1 and |1,0> is index 2
        assert!((pt[(2, 1)] - c(0.5)).norm() < 1e-15);
        assert!((pt[(1, 2)] - c(0.5)).norm() < 1e-15);
        let diag: Vec<f64> = (0..4).map(|i| pt[(i, i)].re).collect();
        assert_eq!(diag, vec![0.5, 0.0, 0.0, 0.5]);
        assert!(pt[(0, 3)].norm() < 1e-15 && pt[(3, 0)].norm() < 1e-15);
    }

    #[test]
    fn product_state_transposes_factor_a() {
        let rho_a = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.7),
            (1, 1) => c(0.3),
            (0, 1) => c64::new(0.1, 0.2),
            _ => c64::new(0.1, -0.2),
        });
        let rho_b = Mat::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => c(0.5),
            (1, 1) => c(0.25),
            (2, 2) => c(0.25),
            (0, 2) => c64::new(0.05, 0.1),
            (2, 0) => c64::new(0.05, -0.1),
            _ => c(0.0),
        });
        let dims = BipartiteDims::new(2, 3).unwrap();
        let rho = DensityOperator::new(kron(rho_a.as_ref(), rho_b.as_ref()), dims).unwrap();
        let expected = kron(rho_a.transpose(), rho_b.as_ref());
        let pt = partial_transpose(&rho);
        assert!(max_abs((pt - expected).as_ref()) < 1e-15);
    }

    #[test]
    fn diagonal_state_is_pt_invariant() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let h = HermitianOperator::from_real_diagonal(&[0.1, 0.2, 0.3, 0.4], dims).unwrap();
        let rho = DensityOperator::new(h.into_matrix(), dims).unwrap();
        let pt = partial_transpose(&rho);
        assert!(max_abs((pt - rho.matrix()).as_ref()) == 0.0);
    }

    #[test]
    fn validation_reports() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let mixed = DensityOperator::maximally_mixed(dims);
        assert!(mixed.report().passed());

        let twice = Mat::from_fn(6, 6, |i, j| if i == j { c(2.0 / 6.0) } else { c(0.0) });
        let r = validate_density(twice.as_ref(), dims, &Tolerances::default()).unwrap();
        assert!(!r.passed());
        assert!((r.trace_defect - 1.0).abs() < 1e-12);

        let d1 = BipartiteDims::new(1, 2).unwrap();
        let neg = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.5),
            (1, 1) => c(-0.5),
            _ => c(0.0),
        });
        let r = validate_density(neg.as_ref(), d1, &Tolerances::default()).unwrap();
        assert!(!r.is_positive());
        assert!(r.has_unit_trace());
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(matches!(
            DensityOperator::new(neg, d1),
            Err(Error::InvalidDensity(_))
        ));

        let wrong = Mat::<c64>::zeros(3, 3);
        assert!(matches!(
            validate_density(wrong.as_ref(), dims, &Tolerances::default()),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn eigensystem_examples() {
        let d = BipartiteDims::new(1, 3).unwrap();
        let h = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 2.0], d).unwrap();
        let es = hermitian_eigensystem(&h).unwrap();
        assert_eq!(es.values.len(), 3);
        for (v, e) in es.values.iter().zip([1.0, 2.0, 3.0]) {
            assert!((v - e).abs() < TOL_EIG);
        }

        let d2 = BipartiteDims::new(2, 1).unwrap();
        let sx = Mat::from_fn(2, 2, |i, j| if i != j { c(1.0) } else { c(0.0) });
        let es = hermitian_eigensystem(&HermitianOperator::new(sx, d2).unwrap()).unwrap();
        assert!((es.values[0] + 1.0).abs() < TOL_EIG && (es.values[1] - 1.0).abs() < TOL_EIG);
        // (|down> - |up>)/sqrt(2) up to a phase
        let v = es.vector(0);
        assert!((v[0] + v[1]).norm() < TOL_EIG);
        assert!((v[0].norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < TOL_EIG);
    }

    #[test]
    fn non_hermitian_rejected() {
        let d = BipartiteDims::new(2, 1).unwrap();
        let m = Mat::from_fn(2, 2, |i, j| if i < j { c(1.0) } else { c(0.0) });
        assert!(matches!(
            HermitianOperator::new(m, d),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn pt_is_an_involution() {
        let rho = bell();
        let twice = partial_transpose_matrix(partial_transpose(&rho).as_ref(), rho.dims());
        assert!(max_abs((twice - rho.matrix()).as_ref()) == 0.0);
    }
}
