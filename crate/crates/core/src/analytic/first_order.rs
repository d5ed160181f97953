use crate::densmat::{trace_of_product, CMatrix, DenseOperator, DensityMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// Trace tolerance for perturbation directions.
pub const TRACE_FREE_TOL: f64 = 1e-12;

/// Predicted fidelity and purity after a gadget on `ρ₀ + σᵢ`, to first order in the `σᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderPrediction {
    /// `σ̃ = (1/M) Σ σᵢ`.
    pub sigma_bar: HermitianOperator,
    /// `Tr[ρ₀σ̃]`.
    pub overlap: f64,
    /// `1 + Tr[ρ₀σ̃]/M`.
    pub fidelity_pred: f64,
    /// `1 + 2Tr[ρ₀σ̃]/M`.
    pub purity_pred: f64,
    /// Mean unpurified fidelity `1 + Tr[ρ₀σ̃]`.
    pub fidelity_baseline: f64,
    /// First-order mean unpurified purity `1 + 2Tr[ρ₀σ̃]`.
    pub purity_baseline: f64,
}

pub fn first_order_predictions(rho0: &DensityMatrix, sigmas: &[HermitianOperator], m: usize) -> Result<FirstOrderPrediction> {
    if sigmas.len() != m || m == 0 {
        return Err(Error::DimensionMismatch { expected: m, found: sigmas.len() });
    }
    let d = rho0.dim();
    let mut sum = CMatrix::zeros(d, d);
    for s in sigmas {
        if s.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
        let tr = s.trace().norm();
        if tr > TRACE_FREE_TOL {
            return Err(Error::NotTraceFree { trace: tr });
        }
        sum += s.matrix();
    }
    let sigma_bar = HermitianOperator::from_matrix_unchecked(sum.scale(1.0 / m as f64));
    let overlap = trace_of_product(rho0.matrix(), sigma_bar.matrix()).re;
    let mf = m as f64;
    Ok(FirstOrderPrediction {
        sigma_bar,
        overlap,
        fidelity_pred: 1.0 + overlap / mf,
        purity_pred: 1.0 + 2.0 * overlap / mf,
        fidelity_baseline: 1.0 + overlap,
        purity_baseline: 1.0 + 2.0 * overlap,
    })
}
