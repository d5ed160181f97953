//! Dense complex matrices for density matrices and multi-register product states.
//!
//! Registers are ordered with register 1 as the most significant tensor factor,
//! so a basis index `x` of an `M`-register state decomposes as
//! `x = Σ_k x_k d^(M-1-k)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Max absolute deviation from Hermiticity accepted by `validate`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max deviation of the trace from one accepted by `validate`.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted by `validate`.
pub const PSD_TOL: f64 = 1e-10;

/// Environment variable overriding [`DenseCap::default`].
pub const DENSE_CAP_ENV: &str = "PURIFY_DENSE_CAP";

/// Upper bound on the total Hilbert-space dimension `d^M` of a dense state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseCap(pub usize);

impl Default for DenseCap {
    fn default() -> Self {
        DenseCap(4096)
    }
}

impl DenseCap {
    /// Reads the cap from `PURIFY_DENSE_CAP`, falling back to the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(DENSE_CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .map(DenseCap)
                .map_err(|_| Error::InvalidArgument(format!("{DENSE_CAP_ENV}={v} is not an integer"))),
            Err(_) => Ok(DenseCap::default()),
        }
    }

    pub fn check(self, dim: usize) -> Result<()> {
        if dim > self.0 {
            Err(Error::DenseCapExceeded { dim, cap: self.0 })
        } else {
            Ok(())
        }
    }

    /// Checks `d^m` without overflowing.
    pub fn check_power(self, d: usize, m: usize) -> Result<usize> {
        let mut dim: usize = 1;
        for _ in 0..m {
            dim = dim.checked_mul(d).ok_or(Error::DenseCapExceeded { dim: usize::MAX, cap: self.0 })?;
            if dim > self.0 {
                return Err(Error::DenseCapExceeded { dim, cap: self.0 });
            }
        }
        Ok(dim)
    }
}

/// Common access to the dense matrix behind an operator type.
pub trait DenseOperator: Sized {
    fn matrix(&self) -> &CMatrix;
    fn from_matrix_unchecked(m: CMatrix) -> Self;

    fn dim(&self) -> usize {
        self.matrix().nrows()
    }

    fn trace(&self) -> Complex64 {
        self.matrix().trace()
    }

    /// Largest `|A - A^†|` entry.
    fn hermitian_deviation(&self) -> f64 {
        let m = self.matrix();
        let n = m.nrows();
        let mut dev = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Real eigenvalues of the Hermitian part, ascending.
    fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(self.matrix())).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}

/// A dense `d × d` density matrix.
///
/// Construction only checks that the matrix is square; call [`DensityMatrix::validate`]
/// to check Hermiticity, unit trace and positivity.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DenseOperator for DensityMatrix {
    fn matrix(&self) -> &CMatrix {
        &self.entries
    }
    fn from_matrix_unchecked(m: CMatrix) -> Self {
        DensityMatrix { entries: m }
    }
}

impl DensityMatrix {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        Ok(DensityMatrix { entries: m })
    }

    /// `|ψ⟩⟨ψ|` for the normalised amplitude vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || norm == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        let n = v.len();
        Ok(DensityMatrix { entries: CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()) })
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::DimensionMismatch { expected: d, found: k + 1 });
        }
        let mut m = CMatrix::zeros(d, d);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { entries: m })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix { entries: CMatrix::identity(d, d).scale(1.0 / d as f64) }
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    /// Checks Hermiticity, unit trace and positivity at the crate tolerances.
    pub fn validate(&self) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace: tr.re });
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(())
    }

    pub fn purity(&self) -> f64 {
        trace_of_product(&self.entries, &self.entries).re
    }

    /// Divides by the trace.
    pub fn normalised(&self) -> Result<Self> {
        let tr = self.trace();
        if tr.norm() == 0.0 {
            return Err(Error::NotUnitTrace { trace: 0.0 });
        }
        Ok(DensityMatrix { entries: self.entries.map(|z| z / tr) })
    }

    /// Hermitian part; removes rounding asymmetry.
    pub fn hermitised(&self) -> Self {
        DensityMatrix { entries: hermitian_part(&self.entries) }
    }
}

/// A dense Hermitian operator (observable or perturbation direction).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl DenseOperator for HermitianOperator {
    fn matrix(&self) -> &CMatrix {
        &self.entries
    }
    fn from_matrix_unchecked(m: CMatrix) -> Self {
        HermitianOperator { entries: m }
    }
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let op = HermitianOperator { entries: m };
        let deviation = op.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(op)
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn is_trace_free(&self, tol: f64) -> bool {
        self.trace().norm() <= tol
    }
}

/// The joint state of `copies` registers of local dimension `local_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiRegisterState {
    copies: usize,
    local_dim: usize,
    state: DensityMatrix,
}

impl MultiRegisterState {
    pub fn new(state: DensityMatrix, copies: usize, local_dim: usize) -> Result<Self> {
        let expected = local_dim
            .checked_pow(copies as u32)
            .ok_or(Error::DimensionMismatch { expected: usize::MAX, found: state.dim() })?;
        if state.dim() != expected {
            return Err(Error::DimensionMismatch { expected, found: state.dim() });
        }
        Ok(MultiRegisterState { copies, local_dim, state })
    }

    /// `ρ_1 ⊗ ρ_2 ⊗ … ⊗ ρ_M` for possibly distinct inputs.
    pub fn product(inputs: &[DensityMatrix], cap: DenseCap) -> Result<Self> {
        let first = inputs.first().ok_or_else(|| Error::InvalidArgument("no input registers".into()))?;
        let d = first.dim();
        for r in inputs {
            if r.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: r.dim() });
            }
        }
        cap.check_power(d, inputs.len())?;
        let mut m = first.matrix().clone();
        for r in &inputs[1..] {
            m = m.kronecker(r.matrix());
        }
        Ok(MultiRegisterState { copies: inputs.len(), local_dim: d, state: DensityMatrix { entries: m } })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }
    pub fn matrix(&self) -> &CMatrix {
        self.state.matrix()
    }
    pub fn into_state(self) -> DensityMatrix {
        self.state
    }
}

/// `A ⊗ B`, with `A` as the most significant factor.
pub fn tensor_product<T: DenseOperator>(a: &T, b: &T, cap: DenseCap) -> Result<T> {
    cap.check(a.dim().saturating_mul(b.dim()))?;
    Ok(T::from_matrix_unchecked(a.matrix().kronecker(b.matrix())))
}

/// `ρ^{⊗m}`.
pub fn tensor_power(rho: &DensityMatrix, m: usize, cap: DenseCap) -> Result<MultiRegisterState> {
    if m == 0 {
        return Err(Error::InvalidArgument("tensor power needs at least one copy".into()));
    }
    cap.check_power(rho.dim(), m)?;
    let mut acc = rho.matrix().clone();
    for _ in 1..m {
        acc = acc.kronecker(rho.matrix());
    }
    Ok(MultiRegisterState { copies: m, local_dim: rho.dim(), state: DensityMatrix { entries: acc } })
}

/// `Tr_{2..M}` of a multi-register state, keeping register 1.
pub fn partial_trace_keep_first(s: &MultiRegisterState) -> DensityMatrix {
    DensityMatrix { entries: partial_trace_first(s.matrix(), s.local_dim) }
}

/// Keeps the leading factor of dimension `d` from a `D × D` matrix.
pub(crate) fn partial_trace_first(m: &CMatrix, d: usize) -> CMatrix {
    let rest = m.nrows() / d;
    CMatrix::from_fn(d, d, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..rest {
            acc += m[(i * rest + r, j * rest + r)];
        }
        acc
    })
}

/// `Tr[ρ^m]` for `m ≥ 1`.
pub fn trace_moment(rho: &DensityMatrix, m: u32) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::InvalidArgument("trace moment order must be ≥ 1".into()));
    }
    if m == 1 {
        return Ok(rho.trace());
    }
    let half = matrix_power(rho.matrix(), m / 2);
    Ok(if m.is_multiple_of(2) {
        trace_of_product(&half, &half)
    } else {
        trace_of_product(&(&half * rho.matrix()), &half)
    })
}

/// Fidelity `Tr[ρ₀ρ]` against a pure target, and purity `Tr[ρ²]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMetrics {
    pub fidelity: f64,
    pub purity: f64,
}

pub fn state_metrics(rho: &DensityMatrix, rho0: &DensityMatrix) -> Result<StateMetrics> {
    if rho.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch { expected: rho0.dim(), found: rho.dim() });
    }
    Ok(StateMetrics {
        fidelity: trace_of_product(rho0.matrix(), rho.matrix()).re,
        purity: rho.purity(),
    })
}

/// Random density matrix of exact rank `rank`, from a seeded Ginibre draw.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(d, rank, |_, _| {
        Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    Ok(DensityMatrix { entries: hermitian_part(&m.map(|z| z / tr)) })
}

/// `m^k` by repeated squaring; `k = 0` gives the identity.
pub fn matrix_power(m: &CMatrix, mut k: u32) -> CMatrix {
    let n = m.nrows();
    let mut result = CMatrix::identity(n, n);
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// `Tr[AB]` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            acc += a[(j, i)] * b[(i, j)];
        }
    }
    acc
}

/// Trace distance `½‖A − B‖₁` for Hermitian arguments.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let diff = DensityMatrix { entries: a.matrix() - b.matrix() };
    0.5 * diff.eigenvalues().iter().map(|x| x.abs()).sum::<f64>()
}

pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}
