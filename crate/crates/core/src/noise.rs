//! Input-noise families: depolarisation, coherent drift, stochastic perturbation
//! and general stochastic mixtures.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::analytic::TRACE_FREE_TOL;
use crate::densmat::{
    hermitian_part, partial_trace_first, random_density, trace_of_product, CMatrix, DenseCap, DenseOperator, DensityMatrix,
    HermitianOperator, MultiRegisterState, PSD_TOL,
};
use crate::error::{Error, Result};
use crate::gadgets::unnormalised_output;
use crate::permgroup::PermutationGroup;

/// Truncation order for noisy inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Exact,
    /// Keep only terms linear in the perturbation.
    First,
}

/// `(1-p)ρ₀ + p·I/d`.
pub fn depolarise(rho0: &DensityMatrix, p: f64, d: usize) -> Result<DensityMatrix> {
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rho0.dim() });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("error rate {p} outside [0, 1]")));
    }
    let m = rho0.matrix().scale(1.0 - p) + CMatrix::identity(d, d).scale(p / d as f64);
    DensityMatrix::from_matrix(m)
}

/// Leading eigenvector of a pure target.
pub fn state_vector(target: &DensityMatrix) -> Result<DVector<Complex64>> {
    let purity = target.purity();
    if (purity - 1.0).abs() > 1e-10 {
        return Err(Error::NotPure { purity });
    }
    let eig = SymmetricEigen::new(hermitian_part(target.matrix()));
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("non-empty spectrum");
    Ok(eig.eigenvectors.column(idx).into_owned())
}

fn kron_vec(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    DVector::from_fn(a.len() * b.len(), |i, _| a[i / b.len()] * b[i % b.len()])
}

fn outer(v: &DVector<Complex64>) -> CMatrix {
    v * v.adjoint()
}

/// Gaussian (GUE) Hermitian matrix with entry scale `scale`.
pub fn random_hermitian(d: usize, scale: f64, rng: &mut impl Rng) -> HermitianOperator {
    let g = CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    HermitianOperator::from_matrix_unchecked(hermitian_part(&g).scale(scale / 2f64.sqrt()))
}

/// `V f(Λ) V^†` for a Hermitian `H = V Λ V^†`.
fn spectral_map(h: &CMatrix, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let eig = SymmetricEigen::new(hermitian_part(h));
    let v = &eig.eigenvectors;
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| f(l))));
    v * diag * v.adjoint()
}

/// `e^{iHt}`.
pub fn unitary(h: &HermitianOperator, t: f64) -> CMatrix {
    spectral_map(h.matrix(), |l| Complex64::from_polar(1.0, l * t))
}

/// Independent Hamiltonian drift `e^{iH_k δt}` on each register.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentDriftEnsemble {
    pub copies: usize,
    pub local_dim: usize,
    pub hamiltonians: Vec<HermitianOperator>,
    pub epsilon: f64,
    pub delta_t: f64,
}

impl CoherentDriftEnsemble {
    pub fn new(hamiltonians: Vec<HermitianOperator>, epsilon: f64, delta_t: f64) -> Result<Self> {
        let d = hamiltonians.first().ok_or_else(|| Error::InvalidArgument("no Hamiltonians".into()))?.dim();
        for h in &hamiltonians {
            if h.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: h.dim() });
            }
            let radius = h.eigenvalues().iter().fold(0.0f64, |a, l| a.max(l.abs()));
            if radius > epsilon * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!("Hamiltonian spectral radius {radius} exceeds ε = {epsilon}")));
            }
        }
        Ok(CoherentDriftEnsemble { copies: hamiltonians.len(), local_dim: d, hamiltonians, epsilon, delta_t })
    }

    /// Independent GUE draws with their spectra clipped to `[-ε, ε]`.
    pub fn random(copies: usize, d: usize, epsilon: f64, delta_t: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = epsilon / (2.0 * (d as f64).sqrt());
        let hams = (0..copies)
            .map(|_| {
                let h = random_hermitian(d, scale, &mut rng);
                HermitianOperator::from_matrix_unchecked(hermitian_part(&spectral_map(h.matrix(), |l| {
                    Complex64::new(l.clamp(-epsilon, epsilon), 0.0)
                })))
            })
            .collect();
        Self::new(hams, epsilon, delta_t)
    }

    /// The same Hamiltonian on every register.
    pub fn identical(h: HermitianOperator, copies: usize, epsilon: f64, delta_t: f64) -> Result<Self> {
        Self::new(vec![h; copies], epsilon, delta_t)
    }

    /// `|λ⊥,k⟩ = (I - |λ₀⟩⟨λ₀|) H_k |λ₀⟩` for each register.
    pub fn perp_components(&self, target: &DensityMatrix) -> Result<Vec<DVector<Complex64>>> {
        let v0 = state_vector(target)?;
        Ok(self
            .hamiltonians
            .iter()
            .map(|h| {
                let hv = h.matrix() * &v0;
                let a = v0.dotc(&hv);
                hv - &v0 * a
            })
            .collect())
    }

    /// `⟨λ̃⊥|λ̃⊥⟩` with `|λ̃⊥⟩ = (1/√M) Σ_k |λ⊥,k⟩`.
    pub fn averaged_perp_norm_sq(&self, target: &DensityMatrix) -> Result<f64> {
        let perps = self.perp_components(target)?;
        let d = self.local_dim;
        let sum = perps.iter().fold(DVector::zeros(d), |acc: DVector<Complex64>, v| acc + v);
        Ok(sum.norm_squared() / self.copies as f64)
    }
}

/// Drifted inputs `⊗_k e^{iH_kδt}|λ₀⟩` or their first-order truncation (renormalised).
pub fn coherent_inputs(e: &CoherentDriftEnsemble, target: &DensityMatrix, order: Order, cap: DenseCap) -> Result<MultiRegisterState> {
    if target.dim() != e.local_dim {
        return Err(Error::DimensionMismatch { expected: e.local_dim, found: target.dim() });
    }
    cap.check_power(e.local_dim, e.copies)?;
    let v0 = state_vector(target)?;
    let dt = e.delta_t;
    let psi = match order {
        Order::Exact => {
            let mut psi = DVector::from_element(1, Complex64::new(1.0, 0.0));
            for h in &e.hamiltonians {
                psi = kron_vec(&psi, &(unitary(h, dt) * &v0));
            }
            psi
        }
        Order::First => {
            let i_dt = Complex64::new(0.0, dt);
            let perps = e.perp_components(target)?;
            let shift: Complex64 = e.hamiltonians.iter().map(|h| v0.dotc(&(h.matrix() * &v0))).sum();
            let mut base = DVector::from_element(1, Complex64::new(1.0, 0.0));
            for _ in 0..e.copies {
                base = kron_vec(&base, &v0);
            }
            let mut psi = base * (Complex64::new(1.0, 0.0) + i_dt * shift);
            for (k, perp) in perps.iter().enumerate() {
                let mut term = DVector::from_element(1, Complex64::new(1.0, 0.0));
                for j in 0..e.copies {
                    term = kron_vec(&term, if j == k { perp } else { &v0 });
                }
                psi += term * i_dt;
            }
            let n = psi.norm();
            psi / Complex64::new(n, 0.0)
        }
    };
    MultiRegisterState::new(DensityMatrix::from_matrix(outer(&psi))?, e.copies, e.local_dim)
}

/// Trace-free perturbation directions `σᵢ`, applied as `ρ₀ + ε·σᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticPerturbation {
    pub copies: usize,
    pub sigmas: Vec<HermitianOperator>,
    pub scale: f64,
}

impl StochasticPerturbation {
    pub fn new(sigmas: Vec<HermitianOperator>, scale: f64) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(Error::InvalidArgument("no perturbation directions".into()));
        }
        for s in &sigmas {
            let tr = s.trace().norm();
            if tr > TRACE_FREE_TOL {
                return Err(Error::NotTraceFree { trace: tr });
            }
        }
        Ok(StochasticPerturbation { copies: sigmas.len(), sigmas, scale })
    }

    /// `σᵢ = τᵢ - ρ₀` for seeded random full-rank states `τᵢ`.
    ///
    /// Then `ρ₀ + εσᵢ = (1-ε)ρ₀ + ετᵢ` is a state for every `ε ∈ [0, 1]`.
    pub fn random(copies: usize, rho0: &DensityMatrix, scale: f64, seed: u64) -> Result<Self> {
        let d = rho0.dim();
        let sigmas = (0..copies)
            .map(|i| {
                let tau = random_density(d, d, seed.wrapping_mul(0x9E37_79B9).wrapping_add(i as u64))?;
                Ok(HermitianOperator::from_matrix_unchecked(tau.matrix() - rho0.matrix()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sigmas, scale)
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        StochasticPerturbation { scale, ..self.clone() }
    }

    /// `ε·σᵢ`.
    pub fn scaled_sigmas(&self) -> Vec<HermitianOperator> {
        self.sigmas.iter().map(|s| HermitianOperator::from_matrix_unchecked(s.matrix().scale(self.scale))).collect()
    }
}

/// `⊗ᵢ(ρ₀ + εσᵢ)`, or the unnormalised first-order sum `ρ₀^{⊗M} + Σᵢ ρ₀ ⊗ … ⊗ εσᵢ ⊗ … ⊗ ρ₀`.
pub fn perturbed_inputs(s: &StochasticPerturbation, rho0: &DensityMatrix, order: Order, cap: DenseCap) -> Result<MultiRegisterState> {
    let d = rho0.dim();
    for sigma in &s.sigmas {
        if sigma.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: sigma.dim() });
        }
    }
    let locals: Vec<DensityMatrix> = s
        .scaled_sigmas()
        .into_iter()
        .map(|es| DensityMatrix::from_matrix(rho0.matrix() + es.matrix()))
        .collect::<Result<_>>()?;
    for r in &locals {
        let min = r.eigenvalues()[0];
        if min < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    match order {
        Order::Exact => MultiRegisterState::product(&locals, cap),
        Order::First => {
            cap.check_power(d, s.copies)?;
            let base = vec![rho0.clone(); s.copies];
            let mut acc = MultiRegisterState::product(&base, cap)?.into_state().into_matrix();
            for (i, es) in s.scaled_sigmas().into_iter().enumerate() {
                let mut regs = base.clone();
                regs[i] = DensityMatrix::from_matrix(es.into_matrix())?;
                acc += MultiRegisterState::product(&regs, cap)?.matrix();
            }
            MultiRegisterState::new(DensityMatrix::from_matrix(acc)?, s.copies, d)
        }
    }
}

/// Unnormalised weight of register 1 outside the target, `Tr[(Q ⊗ I) X]` with
/// `Q = I - ρ₀` and `X` either the state or its group projection.
pub fn deviation_probability(
    state: &MultiRegisterState,
    target: &DensityMatrix,
    projected: bool,
    group: &PermutationGroup,
) -> Result<f64> {
    let d = state.local_dim();
    if target.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: target.dim() });
    }
    let reduced = if projected { unnormalised_output(state, group)? } else { partial_trace_first(state.matrix(), d) };
    let q = CMatrix::identity(d, d) - target.matrix();
    Ok(trace_of_product(&q, &reduced).re)
}

/// `(1-p)ρ₀ + pσ` for a pure target and an arbitrary error state.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralStochastic {
    pub rho0: DensityMatrix,
    pub sigma: DensityMatrix,
    pub p: f64,
}

impl GeneralStochastic {
    pub fn new(rho0: DensityMatrix, sigma: DensityMatrix, p: f64) -> Result<Self> {
        if rho0.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch { expected: rho0.dim(), found: sigma.dim() });
        }
        let g = GeneralStochastic { rho0, sigma, p };
        g.state()?.validate()?;
        Ok(g)
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_matrix(self.rho0.matrix().scale(1.0 - self.p) + self.sigma.matrix().scale(self.p))
    }
}
