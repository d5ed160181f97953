mod common;

use common::{c, kron_ref, max_abs, mixed, pure};
use proptest::prelude::*;
use purify_core::densmat::{
    partial_trace_keep_first, random_density, state_metrics, tensor_power, tensor_product, trace_moment, CMatrix, DenseCap,
};
use purify_core::permgroup::{permutation_matrix, Permutation};
use purify_core::{DenseOperator, DensityMatrix, HermitianOperator, MultiRegisterState};

#[test]
fn identity_tensor_identity() {
    let i2 = HermitianOperator::new(CMatrix::identity(2, 2)).unwrap();
    let i4 = tensor_product(&i2, &i2, DenseCap::default()).unwrap();
    assert_eq!(i4.matrix(), &CMatrix::identity(4, 4));
}

#[test]
fn basis_product_is_ket_01() {
    let zero = DensityMatrix::basis(2, 0).unwrap();
    let one = DensityMatrix::basis(2, 1).unwrap();
    let s = tensor_product(&zero, &one, DenseCap::default()).unwrap();
    assert_eq!(s, DensityMatrix::basis(4, 1).unwrap());
}

#[test]
fn tensor_power_examples() {
    let cap = DenseCap::default();
    let r = mixed(2, 1);
    assert_eq!(tensor_power(&r, 1, cap).unwrap().state(), &r);
    let z = DensityMatrix::basis(2, 0).unwrap();
    assert_eq!(tensor_power(&z, 3, cap).unwrap().into_state(), DensityMatrix::basis(8, 0).unwrap());
    let mm = tensor_power(&DensityMatrix::maximally_mixed(2), 2, cap).unwrap();
    assert!(max_abs(mm.matrix(), DensityMatrix::maximally_mixed(4).matrix()) < 1e-16);
}

#[test]
fn swap_identity_on_two_registers() {
    // Tr₂[(ρ⊗σ)·SWAP] = ρσ.
    let cap = DenseCap::default();
    for d in [2, 3, 4] {
        for seed in 0..5 {
            let (r, s) = (mixed(d, seed), mixed(d, 100 + seed));
            let swap = permutation_matrix(&Permutation::from_one_based(&[2, 1]).unwrap(), d, cap).unwrap();
            let prod = tensor_product(&r, &s, cap).unwrap();
            let st = MultiRegisterState::new(DensityMatrix::from_matrix(prod.matrix() * swap).unwrap(), 2, d).unwrap();
            let out = partial_trace_keep_first(&st);
            assert!(max_abs(out.matrix(), &(r.matrix() * s.matrix())) <= 1e-12);
        }
    }
}

#[test]
fn trace_moment_examples() {
    let p = pure(3, 4);
    for m in 1..6 {
        assert!((trace_moment(&p, m).unwrap().re - 1.0).abs() < 1e-12);
    }
    let mm = DensityMatrix::maximally_mixed(4);
    assert!((trace_moment(&mm, 3).unwrap().re - 4f64.powi(-2)).abs() < 1e-15);
    let dep = DensityMatrix::from_matrix(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.9), c(0.1)]))).unwrap();
    assert!((trace_moment(&dep, 2).unwrap().re - 0.82).abs() < 1e-15);
}

#[test]
fn state_metric_examples() {
    let r0 = pure(3, 9);
    let m = state_metrics(&r0, &r0).unwrap();
    assert!((m.fidelity - 1.0).abs() < 1e-12 && (m.purity - 1.0).abs() < 1e-12);
    let m = state_metrics(&DensityMatrix::maximally_mixed(3), &r0).unwrap();
    assert!((m.fidelity - 1.0 / 3.0).abs() < 1e-12 && (m.purity - 1.0 / 3.0).abs() < 1e-12);
    assert!(state_metrics(&r0, &pure(2, 1)).is_err());
}

#[test]
fn random_density_is_seeded() {
    assert_eq!(random_density(4, 2, 17).unwrap(), random_density(4, 2, 17).unwrap());
    assert_ne!(random_density(4, 2, 17).unwrap(), random_density(4, 2, 18).unwrap());
    assert!((random_density(2, 1, 3).unwrap().purity() - 1.0).abs() < 1e-12);
    assert!(random_density(4, 4, 3).unwrap().eigenvalues()[0] > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_states_validate(d in 1usize..7, seed in any::<u64>(), rank_frac in 0.0f64..1.0) {
        let rank = 1 + ((d - 1) as f64 * rank_frac) as usize;
        random_density(d, rank, seed).unwrap().validate().unwrap();
    }

    #[test]
    fn kron_matches_reference(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
        let (a, b) = (mixed(d1, seed), mixed(d2, seed ^ 1));
        let k = tensor_product(&a, &b, DenseCap::default()).unwrap();
        prop_assert!(max_abs(k.matrix(), &kron_ref(a.matrix(), b.matrix())) == 0.0);
        prop_assert!((k.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), d in 2usize..4, m in 1usize..4, scale in 0.1f64..3.0) {
        // Unnormalised operator: random positive matrix times a scale.
        let dim = d.pow(m as u32);
        let r = random_density(dim, dim, seed).unwrap();
        let s = MultiRegisterState::new(DensityMatrix::from_matrix(r.matrix().scale(scale)).unwrap(), m, d).unwrap();
        let out = partial_trace_keep_first(&s);
        prop_assert!((out.trace() - s.state().trace()).norm() <= 1e-12);
    }

    #[test]
    fn moments_match_spectrum(seed in any::<u64>(), d in 1usize..9, m in 1u32..17) {
        let r = mixed(d, seed);
        let want: f64 = r.eigenvalues().iter().map(|l| l.powi(m as i32)).sum();
        let got = trace_moment(&r, m).unwrap();
        prop_assert!((got.re - want).abs() <= 1e-10);
        prop_assert!(got.im.abs() <= 1e-12);
    }

    #[test]
    fn tensor_power_purity_multiplies(seed in any::<u64>(), d in 2usize..4, m in 1usize..5) {
        let r = mixed(d, seed);
        let s = tensor_power(&r, m, DenseCap::default()).unwrap();
        prop_assert!((s.state().trace().re - 1.0).abs() < 1e-12);
        prop_assert!((s.state().purity() - r.purity().powi(m as i32)).abs() < 1e-12);
    }
}
