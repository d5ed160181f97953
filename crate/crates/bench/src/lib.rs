//! Shared inputs for the benchmarks.

use purify_core::densmat::random_density;
use purify_core::noise::depolarise;
use purify_core::DensityMatrix;

/// Depolarised random pure state.
pub fn noisy_state(d: usize, p: f64, seed: u64) -> DensityMatrix {
    let rho0 = random_density(d, 1, seed).expect("valid dimension");
    depolarise(&rho0, p, d).expect("valid rate")
}
