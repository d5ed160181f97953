//! Dense simulation of the purification gadgets.
//!
//! A gadget post-selects `M` input registers onto the symmetric subspace of a
//! permutation group and returns register 1: `Tr_{2..M}[P S P] / Tr[P S]`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::analytic;
use crate::densmat::{
    partial_trace_first, tensor_power, trace_moment, trace_of_product, CMatrix, DenseCap, DenseOperator, DensityMatrix,
    HermitianOperator, MultiRegisterState,
};
use crate::error::{Error, Result};
use crate::permgroup::{build_group, GroupLabel, Permutation, PermutationGroup, RegisterMap};

/// Acceptance probabilities at or below this are reported as vanishing.
pub const VANISHING_ACCEPT: f64 = 1e-12;

/// Upper bound on `|G| · D²` for a dense gadget application.
pub const WORK_LIMIT: u128 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    Swap,
    Sgg,
    Cgg,
    Gsg,
    Esd,
    Rsg,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 6] =
        [GadgetKind::Swap, GadgetKind::Sgg, GadgetKind::Cgg, GadgetKind::Gsg, GadgetKind::Esd, GadgetKind::Rsg];

    pub fn as_str(self) -> &'static str {
        match self {
            GadgetKind::Swap => "SWAP",
            GadgetKind::Sgg => "SGG",
            GadgetKind::Cgg => "CGG",
            GadgetKind::Gsg => "GSG",
            GadgetKind::Esd => "ESD",
            GadgetKind::Rsg => "RSG",
        }
    }

    /// Whether `m` copies is a valid input count.
    pub fn check_copies(self, m: usize) -> Result<()> {
        let ok = match self {
            GadgetKind::Swap => m == 2,
            GadgetKind::Gsg | GadgetKind::Rsg => m.is_power_of_two(),
            GadgetKind::Sgg | GadgetKind::Cgg | GadgetKind::Esd => m >= 1,
        };
        if ok {
            Ok(())
        } else if matches!(self, GadgetKind::Gsg | GadgetKind::Rsg) && m > 0 {
            Err(Error::NotPowerOfTwo(m))
        } else {
            Err(Error::IncompatibleCopies { kind: self.to_string(), copies: m })
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GadgetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GadgetKind::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownGadget(s.to_string()))
    }
}

/// Normalised register-1 output and the post-selection probability.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetOutcome {
    pub purified: DensityMatrix,
    pub accept_prob: f64,
}

impl GadgetOutcome {
    /// Normalises an unnormalised output, flagging vanishing acceptance.
    pub(crate) fn from_unnormalised(m: CMatrix, accept_prob: f64) -> Result<Self> {
        if !(accept_prob > VANISHING_ACCEPT) {
            return Err(Error::VanishingPostSelection { accept_prob });
        }
        let m = m.map(|z| z / accept_prob);
        Ok(GadgetOutcome { purified: DensityMatrix::from_matrix(m)?.hermitised(), accept_prob })
    }
}

/// Weighted sum `Σ c_j P_j` of register permutations.
pub(crate) struct PermutationSum {
    pub terms: Vec<(f64, RegisterMap)>,
}

impl PermutationSum {
    /// The group average, or the Kraus operator `(I + D)/2` for the derangement pair.
    pub fn for_group(group: &PermutationGroup, d: usize) -> Self {
        match group.label() {
            GroupLabel::DerangementPair if group.copies() > 1 => PermutationSum {
                terms: group.elements().iter().map(|g| (0.5, RegisterMap::new(g, d))).collect(),
            },
            _ => {
                let w = 1.0 / group.order() as f64;
                PermutationSum { terms: group.elements().iter().map(|g| (w, RegisterMap::new(g, d))).collect() }
            }
        }
    }

    /// `S · A^†`.
    pub fn right_adjoint(&self, s: &CMatrix) -> CMatrix {
        let dim = s.nrows();
        let mut x = CMatrix::zeros(dim, dim);
        for b in 0..dim {
            let mut col = x.column_mut(b);
            for (c, map) in &self.terms {
                col.axpy(Complex64::new(*c, 0.0), &s.column(map.inv[b]), Complex64::new(1.0, 0.0));
            }
        }
        x
    }

    /// `A · X`.
    pub fn left(&self, x: &CMatrix) -> CMatrix {
        let dim = x.nrows();
        let mut y = CMatrix::zeros(dim, dim);
        for z in 0..dim {
            let src = x.column(z);
            let mut dst = y.column_mut(z);
            for (c, map) in &self.terms {
                for (row, &from) in map.inv.iter().enumerate() {
                    dst[row] += src[from] * *c;
                }
            }
        }
        y
    }

    /// `Tr_{2..M}[A · X]` for a leading register of dimension `d`.
    pub fn left_reduced(&self, x: &CMatrix, d: usize) -> CMatrix {
        let rest = x.nrows() / d;
        let mut out = CMatrix::zeros(d, d);
        for k in 0..d {
            for r in 0..rest {
                let col = x.column(k * rest + r);
                for (c, map) in &self.terms {
                    for i in 0..d {
                        out[(i, k)] += col[map.inv[i * rest + r]] * *c;
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn check_work(terms: usize, dim: usize) -> Result<()> {
    let work = terms as u128 * (dim as u128) * (dim as u128);
    if work > WORK_LIMIT {
        Err(Error::WorkLimitExceeded { work, limit: WORK_LIMIT })
    } else {
        Ok(())
    }
}

/// `Tr_{2..M}[A S A^†]` for the group's projector (or Kraus operator).
pub fn unnormalised_output(inputs: &MultiRegisterState, group: &PermutationGroup) -> Result<CMatrix> {
    if group.copies() != inputs.copies() {
        return Err(Error::DimensionMismatch { expected: inputs.copies(), found: group.copies() });
    }
    let d = inputs.local_dim();
    check_work(group.order(), inputs.matrix().nrows())?;
    let ops = PermutationSum::for_group(group, d);
    let x = ops.right_adjoint(inputs.matrix());
    Ok(ops.left_reduced(&x, d))
}

/// Post-selects `inputs` onto the group's symmetric subspace and keeps register 1.
///
/// For `DERANGEMENT_PAIR` with `M > 2` the Kraus operator `(I + D)/2` is used,
/// which reproduces the ESD output `(ρ + ρ^M)/2` for identical inputs.
pub fn apply_group_gadget(inputs: &MultiRegisterState, group: &PermutationGroup) -> Result<GadgetOutcome> {
    let out = unnormalised_output(inputs, group)?;
    let accept = out.trace().re;
    GadgetOutcome::from_unnormalised(out, accept)
}

/// The two-register SWAP gadget in closed form.
pub fn swap_gadget(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<GadgetOutcome> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let (r, s) = (rho.matrix(), sigma.matrix());
    let overlap = trace_of_product(r, s).re;
    let accept = 0.5 * (1.0 + overlap);
    let sum = r + r * s + s * r + s;
    GadgetOutcome::from_unnormalised(sum.scale(0.25), accept)
}

/// A balanced binary cascade of SWAP gadgets over `2^depth` copies of `rho`.
///
/// `accept_prob` is the joint probability that all `2^depth - 1` gadgets succeed.
pub fn rsg_purify(rho: &DensityMatrix, depth: u32) -> Result<GadgetOutcome> {
    let mut state = rho.clone();
    let mut log_accept = 0.0f64;
    for level in 1..=depth {
        let step = swap_gadget(&state, &state)?;
        // 2^(depth-level) gadgets run in parallel at this level.
        log_accept += step.accept_prob.ln() * 2f64.powi((depth - level) as i32);
        state = step.purified;
    }
    let accept_prob = log_accept.exp();
    if !(accept_prob > VANISHING_ACCEPT) && depth > 0 {
        return Err(Error::VanishingPostSelection { accept_prob });
    }
    Ok(GadgetOutcome { purified: state, accept_prob })
}

/// Runs a named gadget on `m` identical copies of `rho`.
///
/// SWAP, SGG, CGG and GSG are simulated densely; ESD uses its closed form and
/// RSG the SWAP cascade.
pub fn run_named_gadget(kind: GadgetKind, rho: &DensityMatrix, m: usize, cap: DenseCap) -> Result<GadgetOutcome> {
    kind.check_copies(m)?;
    let label = match kind {
        GadgetKind::Esd => return analytic::closed_form_outcome(kind, rho, m),
        GadgetKind::Rsg => return rsg_purify(rho, m.trailing_zeros()),
        GadgetKind::Swap | GadgetKind::Cgg => GroupLabel::Cyclic,
        GadgetKind::Sgg => GroupLabel::Symmetric,
        GadgetKind::Gsg => GroupLabel::ParallelSwap,
    };
    let group = build_group(label, m)?;
    check_work(group.order(), cap.check_power(rho.dim(), m)?)?;
    let inputs = tensor_power(rho, m, cap)?;
    apply_group_gadget(&inputs, &group)
}

/// `Tr[ρ^M O] / Tr[ρ^M]`.
pub fn esd_mitigated_expectation(rho: &DensityMatrix, m: usize, obs: &HermitianOperator) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: obs.dim() });
    }
    if m == 0 {
        return Err(Error::IncompatibleCopies { kind: "ESD".into(), copies: 0 });
    }
    let rm = crate::densmat::matrix_power(rho.matrix(), m as u32);
    let num = trace_of_product(&rm, obs.matrix()).re;
    let den = trace_moment(rho, m as u32)?.re;
    Ok(num / den)
}

/// Hadamard-test estimate of `Tr[ρ^M O]`, `Tr[ρ^M]` and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardTestEstimate {
    /// Ancilla `|0⟩` probability of the controlled-`(O ⊗ I)·D` test.
    pub p0_numerator: f64,
    /// Ancilla `|0⟩` probability of the controlled-`D` test.
    pub p0_denominator: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub expectation: f64,
}

/// Simulates the two Hadamard tests on `ρ^{⊗M}` with the full cyclic shift `D`.
pub fn esd_hadamard_test(rho: &DensityMatrix, m: usize, obs: &HermitianOperator, cap: DenseCap) -> Result<HadamardTestEstimate> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: obs.dim() });
    }
    let d = rho.dim();
    let s = tensor_power(rho, m, cap)?;
    let shift = RegisterMap::new(&Permutation::cyclic_shift(m, 1), d);
    let rest = s.matrix().nrows() / d;
    // Tr[(O ⊗ I) D S] = Σ O[i,i'] (D S)[(i',r),(i,r)] with (D S)[y,z] = S[inv[y], z].
    let controlled_trace = |o: &CMatrix| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for ip in 0..d {
                let w = o[(i, ip)];
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..rest {
                    acc += w * s.matrix()[(shift.inv[ip * rest + r], i * rest + r)];
                }
            }
        }
        acc.re
    };
    let p0_numerator = 0.5 * (1.0 + controlled_trace(obs.matrix()));
    let p0_denominator = 0.5 * (1.0 + controlled_trace(&CMatrix::identity(d, d)));
    let numerator = 2.0 * p0_numerator - 1.0;
    let denominator = 2.0 * p0_denominator - 1.0;
    Ok(HadamardTestEstimate { p0_numerator, p0_denominator, numerator, denominator, expectation: numerator / denominator })
}

/// Result of the parallel-SWAP overlap test on `φ ⊗ ψ^{⊗(M-1)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapTest {
    pub accept_prob: f64,
    /// `|⟨φ|ψ⟩|²` recovered from `accept_prob = 1/M + (M-1)/M · |⟨φ|ψ⟩|²`.
    pub overlap: f64,
}

pub fn gsg_overlap_test(phi: &DensityMatrix, psi: &DensityMatrix, m: usize, cap: DenseCap) -> Result<OverlapTest> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m));
    }
    for s in [phi, psi] {
        let purity = s.purity();
        if (purity - 1.0).abs() > 1e-10 {
            return Err(Error::NotPure { purity });
        }
    }
    let mut regs = vec![phi.clone()];
    regs.extend(std::iter::repeat_n(psi.clone(), m - 1));
    let inputs = MultiRegisterState::product(&regs, cap)?;
    let group = build_group(GroupLabel::ParallelSwap, m)?;
    let accept_prob = unnormalised_output(&inputs, &group)?.trace().re;
    let mf = m as f64;
    Ok(OverlapTest { accept_prob, overlap: (mf * accept_prob - 1.0) / (mf - 1.0) })
}

/// The full post-selected joint state `P S P` (unnormalised), used by the Zeno simulation.
pub(crate) fn project_joint(s: &CMatrix, ops: &PermutationSum) -> CMatrix {
    let x = ops.right_adjoint(s);
    ops.left(&x)
}

pub(crate) fn reduce_first(s: &CMatrix, d: usize) -> CMatrix {
    partial_trace_first(s, d)
}
