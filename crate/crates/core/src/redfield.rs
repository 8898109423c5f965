//! Full (non-secular) Redfield dynamics in the energy eigenbasis and its
//! stationary state.
//!
//! Superoperators act on row-major vectorized matrices: entry `(m, n)` of `rho`
//! sits at `m * d + n`.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::models::{coupling_operator, parity_projectors};
use crate::operators::{eigh, BipartiteDims, DensityOperator, HermitianOperator};

/// Gaps with `|omega| <= TOL_GAP` carry zero rate.
pub const TOL_GAP: f64 = 1e-9;
/// Relative residual `|L rho| / (|L|_F |rho|)` accepted for a steady state.
pub const TOL_SS: f64 = 1e-8;
/// Condition estimates of the bordered system above this flag a nullspace of
/// dimension two or more.
pub const MAX_CONDITION: f64 = 1e12;

const CONDITION_ITERATIONS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralDensity {
    /// `J(omega) = omega exp(-omega / cutoff)`
    Ohmic { cutoff: f64 },
}

impl SpectralDensity {
    pub fn eval(&self, omega: f64) -> f64 {
        match *self {
            SpectralDensity::Ohmic { cutoff } => omega * (-omega / cutoff).exp(),
        }
    }
}

/// One independent bosonic bath: system coupling operator, spectral density,
/// inverse temperature and a prefactor `gamma` that multiplies the coupling
/// operator (rates scale as `gamma^2`).
#[derive(Clone, Debug)]
pub struct BathSpec {
    coupling: HermitianOperator,
    density: SpectralDensity,
    beta: f64,
    gamma: f64,
}

impl BathSpec {
    pub fn new(
        coupling: HermitianOperator,
        density: SpectralDensity,
        beta: f64,
        gamma: f64,
    ) -> Result<Self> {
        let SpectralDensity::Ohmic { cutoff } = density;
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::Parameter(format!(
                "spectral cutoff must be positive, got {cutoff}"
            )));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Parameter(format!(
                "bath inverse temperature must be positive, got {beta}"
            )));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::Parameter(format!(
                "coupling prefactor must be nonnegative, got {gamma}"
            )));
        }
        Ok(Self {
            coupling,
            density,
            beta,
            gamma,
        })
    }

    pub fn coupling(&self) -> &HermitianOperator {
        &self.coupling
    }

    pub fn density(&self) -> SpectralDensity {
        self.density
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `sigma_x (a + a^dagger)` coupled to a single bath.
pub fn unprojected_bath(
    dims: BipartiteDims,
    beta: f64,
    gamma: f64,
    cutoff: f64,
) -> Result<BathSpec> {
    BathSpec::new(
        coupling_operator(dims)?,
        SpectralDensity::Ohmic { cutoff },
        beta,
        gamma,
    )
}

/// Even and odd baths coupling through `P_e T P_e` and `P_o T P_o`, with
/// `T = sigma_x (a + a^dagger)`. The pair conserves the parity-sector
/// populations of any parity-symmetric Hamiltonian.
pub fn projected_baths(
    dims: BipartiteDims,
    beta_even: f64,
    beta_odd: f64,
    gamma_even: f64,
    gamma_odd: f64,
    cutoff: f64,
) -> Result<[BathSpec; 2]> {
    let t = coupling_operator(dims)?;
    let (pe, po) = parity_projectors(dims)?;
    let sandwich = |p: &HermitianOperator| -> Result<HermitianOperator> {
        let m = p.matrix() * t.matrix() * p.matrix();
        HermitianOperator::new(m, dims)
    };
    let density = SpectralDensity::Ohmic { cutoff };
    Ok([
        BathSpec::new(sandwich(&pe)?, density, beta_even, gamma_even)?,
        BathSpec::new(sandwich(&po)?, density, beta_odd, gamma_odd)?,
    ])
}

/// `pi J(omega) n_B(omega)` for absorption, `pi J(|omega|) (n_B(|omega|) + 1)`
/// for emission and zero inside the `TOL_GAP` band. Excludes `gamma`.
pub fn half_fourier_rate(bath: &BathSpec, omega: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let w = omega.abs();
    if w <= TOL_GAP {
        return 0.0;
    }
    let occupation = 1.0 / (bath.beta * w).exp_m1();
    let j = bath.density.eval(w);
    if omega > 0.0 {
        pi * j * occupation
    } else {
        pi * j * (occupation + 1.0)
    }
}

/// Energies, eigenbasis transform and gap table of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct EigenbasisContext {
    energies: Vec<f64>,
    transform: Mat<c64>,
    dims: BipartiteDims,
}

impl EigenbasisContext {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        let es = eigh(h.matrix())?;
        Ok(Self {
            energies: es.values,
            transform: es.vectors,
            dims: h.dims(),
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Columns are the energy eigenvectors in the product basis.
    pub fn transform(&self) -> MatRef<'_, c64> {
        self.transform.as_ref()
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `E_m - E_n`; antisymmetric by construction.
    pub fn gap(&self, m: usize, n: usize) -> f64 {
        self.energies[m] - self.energies[n]
    }

    /// `V^H X V`
    pub fn to_eigenbasis(&self, x: MatRef<'_, c64>) -> Mat<c64> {
        let v = self.transform.as_ref();
        v.adjoint() * x * v
    }

    /// `V X V^H`
    pub fn from_eigenbasis(&self, x: MatRef<'_, c64>) -> Mat<c64> {
        let v = self.transform.as_ref();
        v * x * v.adjoint()
    }
}

/// Bath-summed `Gamma_{mn,op} = sum_j A^j_mn B^j_op` held in factored form,
/// with `A^j` the scaled coupling operator in the eigenbasis and
/// `B^j_op = A^j_op * rate_j(E_o - E_p)`.
#[derive(Clone, Debug)]
pub struct GammaTensor {
    dim: usize,
    coupling: Vec<Mat<c64>>,
    weighted: Vec<Mat<c64>>,
}

impl GammaTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize, o: usize, p: usize) -> c64 {
        self.coupling
            .iter()
            .zip(&self.weighted)
            .map(|(a, b)| a[(m, n)] * b[(o, p)])
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weighted.iter().all(|b| {
            b.col_iter()
                .all(|c| c.iter().all(|z| *z == c64::new(0.0, 0.0)))
        })
    }
}

pub fn gamma_tensor(ctx: &EigenbasisContext, baths: &[BathSpec]) -> Result<GammaTensor> {
    let d = ctx.dim();
    let mut coupling = Vec::with_capacity(baths.len());
    let mut weighted = Vec::with_capacity(baths.len());
    for bath in baths {
        if bath.coupling.dim() != d {
            return Err(Error::Shape {
                expected: format!("{d}x{d} coupling operator"),
                found: format!("{0}x{0}", bath.coupling.dim()),
            });
        }
        let a = ctx.to_eigenbasis(bath.coupling.matrix());
        let a = Mat::from_fn(d, d, |i, j| a[(i, j)] * bath.gamma);
        let b = Mat::from_fn(d, d, |o, p| {
            a[(o, p)] * half_fourier_rate(bath, ctx.gap(o, p))
        });
        coupling.push(a);
        weighted.push(b);
    }
    Ok(GammaTensor {
        dim: d,
        coupling,
        weighted,
    })
}

/// `R_{mn,op} = Gamma_{pn,mo} + Gamma*_{om,np} - delta_np sum_q Gamma_{mq,qo}
/// - delta_mo sum_q Gamma*_{nq,qp}` as a `d^2 x d^2` superoperator.
pub fn redfield_tensor(gamma: &GammaTensor) -> Mat<c64> {
    let d = gamma.dim;
    let mut r = Mat::<c64>::zeros(d * d, d * d);
    for (a, b) in gamma.coupling.iter().zip(&gamma.weighted) {
        // sum_q Gamma_{mq,qo} for this bath
        let c = a * b;
        for m in 0..d {
            for n in 0..d {
                let row = m * d + n;
                for o in 0..d {
                    let b_mo = b[(m, o)];
                    let a_om = a[(o, m)].conj();
                    for p in 0..d {
                        let mut v = a[(p, n)] * b_mo + a_om * b[(n, p)].conj();
                        if n == p {
                            v -= c[(m, o)];
                        }
                        if m == o {
                            v -= c[(n, p)].conj();
                        }
                        r[(row, o * d + p)] += v;
                    }
                }
            }
        }
    }
    r
}

/// Generator `L[rho]_mn = -i omega_mn rho_mn + sum_op R_{mn,op} rho_op` in the
/// energy eigenbasis of `H`.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    context: EigenbasisContext,
    matrix: Mat<c64>,
}

pub fn build_liouvillian(h: &HermitianOperator, baths: &[BathSpec]) -> Result<Liouvillian> {
    let context = EigenbasisContext::new(h)?;
    let gamma = gamma_tensor(&context, baths)?;
    let mut matrix = redfield_tensor(&gamma);
    let d = context.dim();
    for m in 0..d {
        for n in 0..d {
            let k = m * d + n;
            matrix[(k, k)] += c64::new(0.0, -context.gap(m, n));
        }
    }
    Ok(Liouvillian { context, matrix })
}

impl Liouvillian {
    pub fn context(&self) -> &EigenbasisContext {
        &self.context
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.context.dim()
    }

    /// `L[rho]` for `rho` given in the energy eigenbasis.
    pub fn apply(&self, rho: MatRef<'_, c64>) -> Mat<c64> {
        let d = self.dim();
        let v = Mat::from_fn(d * d, 1, |k, _| rho[(k / d, k % d)]);
        let out = &self.matrix * &v;
        Mat::from_fn(d, d, |m, n| out[(m * d + n, 0)])
    }

    /// `L[rho]` for `rho` given in the product basis; result in the product
    /// basis.
    pub fn apply_product(&self, rho: MatRef<'_, c64>) -> Mat<c64> {
        let eig = self.context.to_eigenbasis(rho);
        self.context
            .from_eigenbasis(self.apply(eig.as_ref()).as_ref())
    }

    /// `|L[rho]|_F / (|L|_F |rho|_F)` for `rho` in the product basis.
    pub fn relative_residual(&self, rho: MatRef<'_, c64>) -> f64 {
        let out = self.apply_product(rho);
        out.norm_l2() / (self.matrix.norm_l2() * rho.norm_l2())
    }
}

/// Stationary state with the diagnostics of its extraction.
#[derive(Clone, Debug)]
pub struct RedfieldSteadyState {
    /// Product-basis density operator.
    pub state: DensityOperator,
    /// Relative residual of the corrected state.
    pub residual: f64,
    /// Estimated 2-norm condition number of the bordered system.
    pub condition_estimate: f64,
    /// Hermiticity defect of the raw kernel vector before symmetrization.
    pub hermiticity_defect: f64,
    /// Trace of the raw kernel vector before renormalization.
    pub raw_trace: c64,
}

/// Kernel of `L` normalized to unit trace.
///
/// The population equation of `(0, 0)` is replaced by the trace condition and
/// the bordered system is solved by row-equilibrated LU. A second kernel
/// direction makes that system singular, which shows up as a condition
/// estimate above [`MAX_CONDITION`].
pub fn redfield_steady_state(l: &Liouvillian) -> Result<RedfieldSteadyState> {
    let d = l.dim();
    let dd = d * d;
    let mut a = l.matrix.clone();
    for k in 0..dd {
        a[(0, k)] = c64::new(0.0, 0.0);
    }
    for k in 0..d {
        a[(0, k * d + k)] = c64::new(1.0, 0.0);
    }
    for i in 0..dd {
        let scale = (0..dd).map(|j| a[(i, j)].norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            for j in 0..dd {
                a[(i, j)] /= scale;
            }
        }
    }
    // row 0 keeps unit scale, so the right-hand side is unchanged
    let mut rhs = Mat::<c64>::zeros(dd, 1);
    rhs[(0, 0)] = c64::new(1.0, 0.0);

    let lu = a.partial_piv_lu();
    let x = lu.solve(&rhs);
    let condition = condition_estimate(&lu, a.norm_l2(), dd);
    if !condition.is_finite() || condition > MAX_CONDITION || !x.norm_l2().is_finite() {
        return Err(Error::DegenerateSteadyState { condition });
    }

    let raw = Mat::from_fn(d, d, |m, n| x[(m * d + n, 0)]);
    let raw_trace: c64 = (0..d).map(|k| raw[(k, k)]).sum();
    let mut hermiticity_defect = 0.0f64;
    for m in 0..d {
        for n in 0..=m {
            hermiticity_defect = hermiticity_defect.max((raw[(m, n)] - raw[(n, m)].conj()).norm());
        }
    }
    let t = raw_trace.re;
    let eig = Mat::from_fn(d, d, |m, n| (raw[(m, n)] + raw[(n, m)].conj()) * (0.5 / t));

    let out = l.apply(eig.as_ref());
    let residual = out.norm_l2() / (l.matrix.norm_l2() * eig.norm_l2());
    // negated so that a NaN residual is rejected
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(residual <= TOL_SS) {
        return Err(Error::Convergence {
            residual,
            tolerance: TOL_SS,
        });
    }

    let product = l.context.from_eigenbasis(eig.as_ref());
    let product = Mat::from_fn(d, d, |i, j| {
        (product[(i, j)] + product[(j, i)].conj()) * 0.5
    });
    let state = DensityOperator::new(product, l.context.dims)?;
    Ok(RedfieldSteadyState {
        state,
        residual,
        condition_estimate: condition,
        hermiticity_defect,
        raw_trace,
    })
}

/// `|A|_F * |A^{-1}|_2`, the inverse norm from power iteration on
/// `(A^H A)^{-1}`.
fn condition_estimate(lu: &PartialPivLu<c64>, frobenius: f64, n: usize) -> f64 {
    let mut v = Mat::from_fn(n, 1, |k, _| c64::new(1.0 + 0.1 * (k % 7) as f64, 0.0));
    let mut norm = v.norm_l2();
    v = Mat::from_fn(n, 1, |k, _| v[(k, 0)] / norm);
    let mut sigma_inv = 0.0;
    for _ in 0..CONDITION_ITERATIONS {
        let w = lu.solve(lu.solve_adjoint(&v));
        norm = w.norm_l2();
        if !norm.is_finite() {
            return f64::INFINITY;
        }
        if norm == 0.0 {
            break;
        }
        sigma_inv = norm.sqrt();
        v = Mat::from_fn(n, 1, |k, _| w[(k, 0)] / norm);
    }
    frobenius * sigma_inv
}
