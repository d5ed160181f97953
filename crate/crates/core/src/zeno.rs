//! Repeated stabilisation: alternate a noisy step on every copy with a perfect
//! gadget across the copies, and track register 1.

use num_complex::Complex64;

use crate::densmat::{tensor_power, trace_of_product, CMatrix, DenseCap, DenseOperator, DensityMatrix};
use crate::error::{Error, Result};
use crate::gadgets::{check_work, project_joint, reduce_first, GadgetKind, PermutationSum, VANISHING_ACCEPT};
use crate::noise::{unitary, CoherentDriftEnsemble};
use crate::permgroup::{build_group, GroupLabel};

/// Largest one-step fidelity loss before a trajectory is flagged.
pub const STEP_ERROR_GUARD: f64 = 0.1;

/// Noise applied to every copy between gadget rounds.
#[derive(Debug, Clone, PartialEq)]
pub enum ZenoNoise {
    /// Complete dephasing in the computational basis, occurring with probability `eta`.
    Dephasing { eta: f64 },
    /// `e^{iH_kδt}` on register `k` each step.
    CoherentDrift(CoherentDriftEnsemble),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoPoint {
    pub step: usize,
    /// `Tr[ρ₀ ρ₁]` for the register-1 state.
    pub fidelity: f64,
    /// Product of the acceptance probabilities so far.
    pub cumulative_accept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZenoRun {
    pub steps: usize,
    pub copies: usize,
    pub gadget: GadgetKind,
    pub noise: ZenoNoise,
    /// `steps + 1` points, starting at step 0.
    pub trajectory: Vec<ZenoPoint>,
    /// Set when some step lost more than [`STEP_ERROR_GUARD`] fidelity.
    pub flagged: bool,
}

impl ZenoRun {
    pub fn new(steps: usize, copies: usize, gadget: GadgetKind, noise: ZenoNoise) -> Result<Self> {
        if copies == 0 {
            return Err(Error::IncompatibleCopies { kind: gadget.to_string(), copies });
        }
        if copies > 1 {
            gadget.check_copies(copies)?;
            if matches!(gadget, GadgetKind::Esd | GadgetKind::Rsg) {
                return Err(Error::InvalidArgument(format!("{gadget} does not return all copies to the task")));
            }
        }
        if let ZenoNoise::Dephasing { eta } = noise {
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::InvalidArgument(format!("dephasing probability {eta} outside [0, 1]")));
            }
        }
        if let ZenoNoise::CoherentDrift(e) = &noise {
            if e.copies != copies {
                return Err(Error::DimensionMismatch { expected: copies, found: e.copies });
            }
        }
        Ok(ZenoRun { steps, copies, gadget, noise, trajectory: Vec::new(), flagged: false })
    }

    pub fn fidelities(&self) -> Vec<f64> {
        self.trajectory.iter().map(|p| p.fidelity).collect()
    }
}

fn group_for(kind: GadgetKind) -> GroupLabel {
    match kind {
        GadgetKind::Sgg => GroupLabel::Symmetric,
        GadgetKind::Gsg => GroupLabel::ParallelSwap,
        _ => GroupLabel::Cyclic,
    }
}

/// Multiplies each entry `(a, b)` by `(1-η)` per register whose digits differ.
fn dephase_all(s: &mut CMatrix, d: usize, m: usize, eta: f64) {
    let dim = s.nrows();
    let digits: Vec<Vec<usize>> = (0..dim)
        .map(|x| {
            let mut r = x;
            let mut v = vec![0; m];
            for slot in v.iter_mut().rev() {
                *slot = r % d;
                r /= d;
            }
            v
        })
        .collect();
    let keep = 1.0 - eta;
    let powers: Vec<f64> = (0..=m).map(|k| keep.powi(k as i32)).collect();
    for b in 0..dim {
        for a in 0..dim {
            let differ = digits[a].iter().zip(&digits[b]).filter(|(x, y)| x != y).count();
            if differ > 0 {
                s[(a, b)] *= powers[differ];
            }
        }
    }
}

pub fn run_zeno(mut run: ZenoRun, rho0: &DensityMatrix, cap: DenseCap) -> Result<ZenoRun> {
    let d = rho0.dim();
    let m = run.copies;
    let mut state = tensor_power(rho0, m, cap)?.into_state().into_matrix();
    let dim = state.nrows();
    let ops = if m > 1 {
        let group = build_group(group_for(run.gadget), m)?;
        check_work(2 * group.order(), dim)?;
        Some(PermutationSum::for_group(&group, d))
    } else {
        None
    };
    let drift = match &run.noise {
        ZenoNoise::CoherentDrift(e) => {
            let mut u = CMatrix::identity(1, 1);
            for h in &e.hamiltonians {
                u = u.kronecker(&unitary(h, e.delta_t));
            }
            Some(u)
        }
        ZenoNoise::Dephasing { .. } => None,
    };
    let fidelity = |s: &CMatrix| trace_of_product(rho0.matrix(), &reduce_first(s, d)).re;
    let mut cumulative = 1.0;
    let mut trajectory = vec![ZenoPoint { step: 0, fidelity: fidelity(&state), cumulative_accept: 1.0 }];
    let mut flagged = false;
    for step in 1..=run.steps {
        match (&run.noise, &drift) {
            (ZenoNoise::Dephasing { eta }, _) => dephase_all(&mut state, d, m, *eta),
            (ZenoNoise::CoherentDrift(_), Some(u)) => state = u * &state * u.adjoint(),
            _ => unreachable!(),
        }
        let before = fidelity(&state);
        let prev = trajectory.last().unwrap().fidelity;
        if let Some(ops) = &ops {
            let projected = project_joint(&state, ops);
            let accept = projected.trace().re;
            if !(accept > VANISHING_ACCEPT) {
                return Err(Error::VanishingPostSelection { accept_prob: accept });
            }
            state = projected.map(|z| z / Complex64::new(accept, 0.0));
            state = (&state + state.adjoint()).scale(0.5);
            cumulative *= accept;
        }
        let f = fidelity(&state);
        // The unprotected loss of this step is what the guard bounds.
        if prev - before > STEP_ERROR_GUARD || prev - f > STEP_ERROR_GUARD {
            flagged = true;
        }
        trajectory.push(ZenoPoint { step, fidelity: f.clamp(0.0, 1.0), cumulative_accept: cumulative });
    }
    run.trajectory = trajectory;
    run.flagged = flagged;
    Ok(run)
}

/// Least-squares slope of `-ln F` against the step index, through the origin.
pub fn fit_decay_exponent(trajectory: &[ZenoPoint]) -> f64 {
    let (num, den) = trajectory.iter().fold((0.0, 0.0), |(n, d), p| {
        let x = p.step as f64;
        (n - x * p.fidelity.ln(), d + x * x)
    });
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `M = ⌈-ηN / ln(1-δ)⌉` copies to keep the survival probability above `1-δ`.
pub fn copy_budget(eta: f64, steps: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) || !(eta >= 0.0) {
        return Err(Error::InvalidArgument(format!("copy budget needs 0 < δ < 1 and η ≥ 0, got δ={delta}, η={eta}")));
    }
    Ok(((-eta * steps as f64 / (1.0 - delta).ln()).ceil() as usize).max(1))
}
