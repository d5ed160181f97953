//! Closed-form purification rates and fidelity expansions.

mod closed_form;
mod depolarised;
mod first_order;
mod general;
mod optimal;
mod totient;

pub use closed_form::{cgg_closed_form_with_weights, closed_form_outcome, complete_homogeneous};
pub use depolarised::{depolarised_ptilde, rsg_iterate, swap_step, DepolarisedRate, DepolarisedSpec, Dimension, RsgLevel, RsgTrajectory};
pub use first_order::{first_order_predictions, FirstOrderPrediction, TRACE_FREE_TOL};
pub use general::{
    fidelity_general, partition_weight, partitions_with_parts, pure_sigma_coefficient, trace_rho0_rhom, TraceMode,
    MAX_PARTITION_ORDER,
};
pub use optimal::{cgg_copies_simplified, dptilde_dm, optimal_point, ptilde_infinite, sampling_costs, OptimalPoint, SamplingCosts};
pub use totient::{cgg_weights, cgg_weights_with, divisors, euler_totient, is_prime};

pub use extract::extract_ptilde;

mod extract {
    use crate::densmat::{state_metrics, DenseOperator, DensityMatrix};
    use crate::error::{Error, Result};

    const SPECTRUM_TOL: f64 = 1e-9;

    /// `p̃ = (1 - Tr[ρ₀ρ̃])·d/(d-1)` after checking that `out` is depolarised.
    pub fn extract_ptilde(out: &DensityMatrix, rho0: &DensityMatrix) -> Result<f64> {
        let d = out.dim();
        if d < 2 {
            return Err(Error::InvalidArgument("extraction needs d ≥ 2".into()));
        }
        let ev = out.eigenvalues();
        let minor = &ev[..d - 1];
        let spread = minor.last().unwrap() - minor.first().unwrap();
        if spread > SPECTRUM_TOL {
            return Err(Error::NotDepolarised(format!("minor eigenvalues spread by {spread:e}")));
        }
        let f = state_metrics(out, rho0)?.fidelity;
        Ok((1.0 - f) * d as f64 / (d as f64 - 1.0))
    }
}
