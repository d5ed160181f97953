use std::collections::BTreeMap;

use super::totient::cgg_weights;
use crate::densmat::{trace_of_product, CMatrix, DenseOperator, DensityMatrix};
use crate::error::{Error, Result};
use crate::gadgets::{rsg_purify, GadgetKind, GadgetOutcome};

/// Output of a gadget on `m` identical copies of `rho`, from trace moments and matrix powers.
pub fn closed_form_outcome(kind: GadgetKind, rho: &DensityMatrix, m: usize) -> Result<GadgetOutcome> {
    kind.check_copies(m)?;
    match kind {
        GadgetKind::Swap | GadgetKind::Cgg => cgg_closed_form_with_weights(rho, m, &cgg_weights(m as u64)),
        GadgetKind::Rsg => rsg_purify(rho, m.trailing_zeros()),
        GadgetKind::Gsg => {
            if m == 1 {
                return GadgetOutcome::from_unnormalised(rho.matrix().clone(), 1.0);
            }
            let powers = Powers::new(rho, 2);
            let mf = m as f64;
            let t2 = powers.moment(2);
            let half = (m / 2) as i32;
            let w = (mf - 1.0) / mf * t2.powi(half - 1);
            let out = powers.get(1).scale(1.0 / mf) + powers.get(2).scale(w);
            GadgetOutcome::from_unnormalised(out, 1.0 / mf + (mf - 1.0) / mf * t2.powi(half))
        }
        GadgetKind::Esd => {
            let powers = Powers::new(rho, m);
            let out = (powers.get(1) + powers.get(m)).scale(0.5);
            GadgetOutcome::from_unnormalised(out, 0.5 * (1.0 + powers.moment(m)))
        }
        GadgetKind::Sgg => {
            let powers = Powers::new(rho, m);
            let h = complete_homogeneous(&(1..=m).map(|k| powers.moment(k)).collect::<Vec<_>>());
            let d = rho.dim();
            let mut out = CMatrix::zeros(d, d);
            for k in 1..=m {
                out += powers.get(k).scale(h[m - k]);
            }
            GadgetOutcome::from_unnormalised(out.scale(1.0 / m as f64), h[m])
        }
    }
}

/// CGG output `(1/M) Σ_{m|M} w_m T_m^{M/m-1} ρ^m` for explicit weights `w_m`.
pub fn cgg_closed_form_with_weights(rho: &DensityMatrix, m: usize, weights: &BTreeMap<u64, u64>) -> Result<GadgetOutcome> {
    let max = weights.keys().copied().max().unwrap_or(1) as usize;
    let powers = Powers::new(rho, max);
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    let mut accept = 0.0;
    for (&k, &w) in weights {
        if !(m as u64).is_multiple_of(k) {
            return Err(Error::InvalidArgument(format!("{k} does not divide {m}")));
        }
        let reps = (m as u64 / k) as i32;
        let t = powers.moment(k as usize);
        out += powers.get(k as usize).scale(w as f64 * t.powi(reps - 1));
        accept += w as f64 * t.powi(reps);
    }
    let mf = m as f64;
    GadgetOutcome::from_unnormalised(out.scale(1.0 / mf), accept / mf)
}

/// `h_0..h_n` of the eigenvalues from the power sums `p_1..p_n` (Newton's identities).
pub fn complete_homogeneous(power_sums: &[f64]) -> Vec<f64> {
    let n = power_sums.len();
    let mut h = vec![1.0; n + 1];
    for k in 1..=n {
        h[k] = (1..=k).map(|j| power_sums[j - 1] * h[k - j]).sum::<f64>() / k as f64;
    }
    h
}

/// Cached `ρ, ρ², …, ρ^n` and their traces.
struct Powers {
    mats: Vec<CMatrix>,
}

impl Powers {
    fn new(rho: &DensityMatrix, n: usize) -> Self {
        let mut mats = vec![rho.matrix().clone()];
        for k in 1..n {
            let next = &mats[k - 1] * rho.matrix();
            mats.push(next);
        }
        Powers { mats }
    }

    fn get(&self, k: usize) -> &CMatrix {
        &self.mats[k - 1]
    }

    fn moment(&self, k: usize) -> f64 {
        if k == 1 {
            return self.mats[0].trace().re;
        }
        let a = k / 2;
        trace_of_product(self.get(a), self.get(k - a)).re
    }
}
