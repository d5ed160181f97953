//! Single-shot gadget evaluation on a depolarised input.

use purify_core::analytic::{depolarised_ptilde, extract_ptilde, DepolarisedSpec, Dimension};
use purify_core::densmat::{state_metrics, DenseCap};
use purify_core::gadgets::run_named_gadget;
use purify_core::noise::depolarise;
use purify_core::{DensityMatrix, GadgetKind};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct DenseResult {
    pub ptilde: f64,
    pub accept_prob: f64,
    pub fidelity: f64,
    pub purity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticResult {
    pub ptilde: f64,
    pub accept_prob: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GadgetReport {
    pub kind: String,
    pub p: f64,
    pub d: String,
    pub m: usize,
    pub input_fidelity: Option<f64>,
    pub dense: Option<DenseResult>,
    pub analytic: Option<AnalyticResult>,
    pub notes: Vec<String>,
}

/// Dense run on `(1-p)|0⟩⟨0| + p·I/d` when it fits, closed form when one exists.
pub fn cmd_gadget(kind: GadgetKind, p: f64, d: Dimension, m: usize, cap: DenseCap) -> anyhow::Result<GadgetReport> {
    kind.check_copies(m)?;
    let spec = DepolarisedSpec::new(p, d)?;
    let mut notes = Vec::new();
    let analytic = match depolarised_ptilde(kind, spec, m) {
        Ok(r) => Some(AnalyticResult { ptilde: r.ptilde, accept_prob: r.accept_prob }),
        Err(e) => {
            notes.push(format!("analytic: {e}"));
            None
        }
    };
    let (dense, input_fidelity) = match d {
        Dimension::Finite(df) => {
            let df = df as usize;
            let rho0 = DensityMatrix::basis(df, 0)?;
            let rho = depolarise(&rho0, p, df)?;
            let f_in = state_metrics(&rho, &rho0)?.fidelity;
            match run_named_gadget(kind, &rho, m, cap) {
                Ok(out) => {
                    let metrics = state_metrics(&out.purified, &rho0)?;
                    let ptilde = extract_ptilde(&out.purified, &rho0)?;
                    (
                        Some(DenseResult { ptilde, accept_prob: out.accept_prob, fidelity: metrics.fidelity, purity: metrics.purity }),
                        Some(f_in),
                    )
                }
                Err(e) => {
                    notes.push(format!("dense: {e}"));
                    (None, Some(f_in))
                }
            }
        }
        Dimension::Infinite => {
            notes.push("dense: infinite dimension is analytic only".into());
            (None, None)
        }
    };
    Ok(GadgetReport { kind: kind.to_string(), p, d: d.to_string(), m, input_fidelity, dense, analytic, notes })
}
