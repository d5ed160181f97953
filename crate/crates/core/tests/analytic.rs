mod common;

use std::f64::consts::E;

use common::{commuting_sigma, depolarised_zero, max_abs, mixed, power_ref, pure};
use proptest::prelude::*;
use purify_core::analytic::{
    cgg_copies_simplified, cgg_weights, closed_form_outcome, complete_homogeneous, depolarised_ptilde, divisors,
    dptilde_dm, euler_totient, extract_ptilde, fidelity_general, first_order_predictions, is_prime, optimal_point,
    partitions_with_parts, ptilde_infinite, rsg_iterate, sampling_costs, swap_step, trace_rho0_rhom, TraceMode,
};
use purify_core::densmat::{state_metrics, trace_moment, CMatrix, DenseCap};
use purify_core::gadgets::run_named_gadget;
use purify_core::{DenseOperator, DensityMatrix, DepolarisedSpec, Dimension, Error, GadgetKind, HermitianOperator};

const CAP: DenseCap = DenseCap(4096);

fn spec(p: f64, d: u64) -> DepolarisedSpec {
    DepolarisedSpec::new(p, Dimension::Finite(d)).unwrap()
}

fn inf(p: f64) -> DepolarisedSpec {
    DepolarisedSpec::new(p, Dimension::Infinite).unwrap()
}

/// Trial-division totient oracle.
fn totient_ref(n: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    (1..=n).filter(|k| gcd(*k, n) == 1).count() as u64
}

#[test]
fn totient_examples() {
    assert_eq!(euler_totient(1), 1);
    assert_eq!(euler_totient(8), 4);
    assert_eq!(euler_totient(7), 6);
    for n in 1..500 {
        assert_eq!(euler_totient(n), totient_ref(n), "n={n}");
    }
}

#[test]
fn weight_examples() {
    let w8: Vec<_> = cgg_weights(8).into_iter().collect();
    assert_eq!(w8, vec![(1, 1), (2, 1), (4, 2), (8, 4)]);
    let w6: Vec<_> = cgg_weights(6).into_iter().collect();
    assert_eq!(w6, vec![(1, 1), (2, 1), (3, 2), (6, 2)]);
    for p in [2u64, 3, 5, 7, 11, 13] {
        assert!(is_prime(p));
        let w: Vec<_> = cgg_weights(p).into_iter().collect();
        assert_eq!(w, vec![(1, 1), (p, p - 1)]);
    }
    for m in 1..200u64 {
        let w = cgg_weights(m);
        assert_eq!(w.values().sum::<u64>(), m);
        assert_eq!(w.keys().copied().collect::<Vec<_>>(), divisors(m));
    }
}

#[test]
fn closed_form_examples() {
    let r = mixed(3, 2);
    let one = closed_form_outcome(GadgetKind::Cgg, &r, 1).unwrap();
    assert!(max_abs(one.purified.matrix(), r.matrix()) < 1e-15 && (one.accept_prob - 1.0).abs() < 1e-15);
    let t5 = trace_moment(&r, 5).unwrap().re;
    let out = closed_form_outcome(GadgetKind::Cgg, &r, 5).unwrap();
    let want = (r.matrix() + power_ref(&r, 5).scale(4.0)).map(|z| z / (1.0 + 4.0 * t5));
    assert!(max_abs(out.purified.matrix(), &want) < 1e-14);
    assert!((out.accept_prob - (1.0 + 4.0 * t5) / 5.0).abs() < 1e-15);
    let q = mixed(2, 31);
    let t2 = q.purity();
    let out = closed_form_outcome(GadgetKind::Gsg, &q, 8).unwrap();
    let un = q.matrix().scale(1.0 / 8.0) + power_ref(&q, 2).scale(7.0 / 8.0 * t2.powi(3));
    let want = un.map(|z| z / un.trace().re);
    assert!(max_abs(out.purified.matrix(), &want) < 1e-14);
    let dense = run_named_gadget(GadgetKind::Gsg, &q, 8, CAP).unwrap();
    assert!(max_abs(out.purified.matrix(), dense.purified.matrix()) < 1e-10);
}

#[test]
fn complete_homogeneous_from_power_sums() {
    // Eigenvalues {a, b}: h_2 = a² + ab + b².
    let (a, b): (f64, f64) = (0.7, 0.3);
    let h = complete_homogeneous(&[a + b, a * a + b * b, a.powi(3) + b.powi(3)]);
    assert!((h[0] - 1.0).abs() < 1e-15);
    assert!((h[2] - (a * a + a * b + b * b)).abs() < 1e-15);
    assert!((h[3] - (a.powi(3) + a * a * b + a * b * b + b.powi(3))).abs() < 1e-15);
}

#[test]
fn depolarised_examples() {
    for d in [2u64, 3, 8] {
        for m in 1..6 {
            let r = depolarised_ptilde(GadgetKind::Cgg, spec(0.0, d), m).unwrap();
            assert_eq!(r.ptilde, 0.0);
            assert!((r.accept_prob - 1.0).abs() < 1e-15);
        }
    }
    let (p, b, g) = (0.2, 0.9, 0.1);
    let r = depolarised_ptilde(GadgetKind::Cgg, spec(p, 2), 2).unwrap();
    assert!((r.ptilde - (1.0 + g) / (1.0 + b * b + g * (1.0 - b)) * p).abs() < 1e-15);
    let r = depolarised_ptilde(GadgetKind::Cgg, inf(0.5), 2).unwrap();
    assert!((r.ptilde - 0.4).abs() < 1e-15);
    let s = spec(0.3, 5);
    assert!((s.beta() - (1.0 - 0.8 * 0.3)).abs() < 1e-15 && (s.gamma() - 0.06).abs() < 1e-15);
    assert!(depolarised_ptilde(GadgetKind::Sgg, s, 3).is_err());
    assert!(depolarised_ptilde(GadgetKind::Gsg, s, 3).is_err());
}

#[test]
fn depolarised_rates_match_dense_extraction() {
    for kind in [GadgetKind::Swap, GadgetKind::Cgg, GadgetKind::Gsg, GadgetKind::Esd, GadgetKind::Rsg] {
        for d in [2usize, 3] {
            for m in 2..=5usize {
                if kind.check_copies(m).is_err() {
                    continue;
                }
                let p = 0.35;
                let out = run_named_gadget(kind, &depolarised_zero(p, d), m, CAP).unwrap();
                let got = extract_ptilde(&out.purified, &DensityMatrix::basis(d, 0).unwrap()).unwrap();
                let want = depolarised_ptilde(kind, spec(p, d as u64), m).unwrap();
                assert!((got - want.ptilde).abs() < 1e-10, "{kind} d={d} m={m}");
                assert!((out.accept_prob - want.accept_prob).abs() < 1e-10, "{kind} d={d} m={m}");
            }
        }
    }
}

#[test]
fn extraction_rejects_non_depolarised_outputs() {
    let r = mixed(3, 1);
    assert!(matches!(extract_ptilde(&r, &DensityMatrix::basis(3, 0).unwrap()), Err(Error::NotDepolarised(_))));
}

#[test]
fn finite_dimension_converges_to_infinite() {
    for kind in [GadgetKind::Cgg, GadgetKind::Gsg] {
        for p in [0.05, 0.2, 0.5] {
            for m in [2usize, 4, 8, 16] {
                let limit = depolarised_ptilde(kind, inf(p), m).unwrap().ptilde;
                let gaps: Vec<f64> = [2u64, 8, 32, 128, 512]
                    .iter()
                    .map(|&d| (depolarised_ptilde(kind, spec(p, d), m).unwrap().ptilde - limit).abs())
                    .collect();
                assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{kind} p={p} m={m}: {gaps:?}");
            }
        }
    }
}

#[test]
fn cgg_and_gsg_coincide_at_infinite_dimension() {
    for p in [0.01, 0.1, 0.3, 0.7] {
        for n in 0..8 {
            let m = 1usize << n;
            let a = depolarised_ptilde(GadgetKind::Cgg, inf(p), m).unwrap();
            let b = depolarised_ptilde(GadgetKind::Gsg, inf(p), m).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn rates_stay_below_input() {
    for p in [0.05, 0.3, 0.8] {
        for d in [2u64, 4, 16] {
            for m in 2..=16usize {
                for kind in [GadgetKind::Cgg, GadgetKind::Gsg, GadgetKind::Rsg] {
                    if kind.check_copies(m).is_ok() {
                        assert!(depolarised_ptilde(kind, spec(p, d), m).unwrap().ptilde < p);
                    }
                }
            }
        }
        for m in 2..=16 {
            let esd = depolarised_ptilde(GadgetKind::Esd, inf(p), m).unwrap().ptilde;
            assert!(esd > p / (2.0 - p));
        }
    }
}

#[test]
fn derivative_changes_sign_at_optimum() {
    for p in [0.3, 0.1, 0.03, 1e-2, 1e-3] {
        let opt = optimal_point(p).unwrap();
        assert!(opt.certified);
        for k in 1..40 {
            let m = 1.0 + (opt.m_star - 1.0) * k as f64 / 40.0;
            assert!(dptilde_dm(p, m) < 0.0, "p={p} m={m}");
            let m = opt.m_star * (1.0 + k as f64 / 10.0);
            assert!(dptilde_dm(p, m) > 0.0, "p={p} m={m}");
        }
        // Central difference oracle for the derivative.
        let h = 1e-5;
        let m = 0.5 * opt.m_star + 1.0;
        let fd = (ptilde_infinite(p, m + h) - ptilde_infinite(p, m - h)) / (2.0 * h);
        assert!((fd - dptilde_dm(p, m)).abs() <= 1e-6 * fd.abs().max(1e-12));
    }
}

#[test]
fn optimal_point_examples() {
    let opt = optimal_point(0.1).unwrap();
    assert!((opt.m_star - 10.49).abs() < 0.01);
    let argmin = (1..=40u64).min_by(|a, b| ptilde_infinite(0.1, *a as f64).total_cmp(&ptilde_infinite(0.1, *b as f64))).unwrap();
    assert!(argmin == 10 || argmin == 11);
    assert_eq!(opt.best_integer_m, argmin);
    assert!((opt.ptilde_star - ptilde_infinite(0.1, opt.m_star)).abs() < 1e-15);
    for p in [0.5, 0.1, 1e-2, 1e-3, 1e-4, 1e-5] {
        let o = optimal_point(p).unwrap();
        assert!(o.m_star > 1.0);
        let r = o.ptilde_star / p;
        assert!(o.ratio_lower < r && r < o.ratio_upper, "p={p}");
        // Valley line.
        assert!(r.ln() < -o.m_star.ln() + 1.0, "p={p}");
    }
    let tiny = optimal_point(1e-6).unwrap();
    assert!((tiny.ptilde_star / (E * 1e-12) - 1.0).abs() < 1e-3);
    assert!(optimal_point(0.0).is_err() && optimal_point(1.0).is_err());
}

#[test]
fn linear_regime_holds() {
    for p in [1e-2, 1e-3] {
        let top = (0.1 / p) as usize;
        for m in 1..=top {
            let r = depolarised_ptilde(GadgetKind::Cgg, inf(p), m).unwrap().ratio(p);
            assert!(r <= 2.0 / m as f64, "p={p} m={m}");
        }
    }
}

#[test]
fn sampling_cost_examples() {
    let s = sampling_costs(1e-4).unwrap();
    assert!((s.cgg_copies * 1e-4 / E - 1.0).abs() < 0.01);
    assert!((s.rsg_copies_bound.unwrap() * 1e-4 / (2.0 / E) - 1.0).abs() < 0.01);
    for p in [1e-2, 1e-3] {
        let (a, b) = (sampling_costs(p / 10.0).unwrap(), sampling_costs(p).unwrap());
        assert!(a.cgg_copies > b.cgg_copies);
        assert!(a.rsg_copies_bound.unwrap() > b.rsg_copies_bound.unwrap());
    }
    for p in [1e-1, 1e-2, 1e-3] {
        let s = sampling_costs(p).unwrap();
        assert!((cgg_copies_simplified(p) / s.cgg_copies - 1.0).abs() < 1e-12, "p={p}");
    }
    assert!(sampling_costs(0.6).unwrap().rsg_copies_bound.is_none());
}

#[test]
fn rsg_examples() {
    let s = spec(0.2, 2);
    let t = rsg_iterate(s, 0).unwrap();
    assert!(t.levels.is_empty() && t.p == 0.2);
    let one = rsg_iterate(s, 1).unwrap().levels[0];
    let cgg = depolarised_ptilde(GadgetKind::Cgg, s, 2).unwrap();
    assert!((one.ptilde - cgg.ptilde).abs() < 1e-15 && (one.step_accept - cgg.accept_prob).abs() < 1e-15);
    assert_eq!(swap_step(s), (one.ptilde, one.step_accept));
    let last = *rsg_iterate(spec(0.3, 2), 4).unwrap().levels.last().unwrap();
    assert!(last.ptilde < 0.3 / (16.0 * 0.4 + 0.6));
    assert!(rsg_iterate(spec(0.6, 2), 3).unwrap().levels.iter().all(|l| l.bound.is_none()));
}

#[test]
fn first_order_examples() {
    let r0 = pure(3, 1);
    let zero = vec![HermitianOperator::new(CMatrix::zeros(3, 3)).unwrap(); 4];
    let f = first_order_predictions(&r0, &zero, 4).unwrap();
    assert_eq!((f.fidelity_pred, f.purity_pred), (1.0, 1.0));
    let sig = HermitianOperator::new(mixed(3, 4).matrix() - r0.matrix()).unwrap();
    let f = first_order_predictions(&r0, std::slice::from_ref(&sig), 1).unwrap();
    assert_eq!((f.fidelity_pred, f.purity_pred), (f.fidelity_baseline, f.purity_baseline));
    assert!(f.overlap <= 0.0);
    let bad = HermitianOperator::new(CMatrix::identity(3, 3)).unwrap();
    assert!(matches!(first_order_predictions(&r0, &[bad], 1), Err(Error::NotTraceFree { .. })));
    assert!(first_order_predictions(&r0, &[sig], 2).is_err());
}

/// Brute-force partition count by enumerating non-increasing sequences.
fn count_partitions(n: u32, parts: u32, max: u32) -> usize {
    if parts == 0 {
        return (n == 0) as usize;
    }
    (1..=max.min(n)).map(|first| count_partitions(n - first, parts - 1, first)).sum()
}

#[test]
fn partitions_are_exact() {
    for n in 1..=12 {
        for l in 1..=n {
            let ps = partitions_with_parts(n, l);
            assert_eq!(ps.len(), count_partitions(n, l, n), "n={n} l={l}");
            for mult in ps {
                assert_eq!(mult.iter().sum::<u32>(), l);
                assert_eq!(mult.iter().enumerate().map(|(k, j)| (k as u32 + 1) * j).sum::<u32>(), n);
            }
        }
    }
}

#[test]
fn trace_modes_examples() {
    let r0 = DensityMatrix::basis(3, 0).unwrap();
    let s = commuting_sigma(3, 0.4, 2);
    for mode in [TraceMode::Partition, TraceMode::Commuting, TraceMode::Dense] {
        assert!((trace_rho0_rhom(mode, &r0, &s, 0.0, 5).unwrap() - 1.0).abs() < 1e-15);
        let want = (1.0 - 0.3 * 0.6f64).powi(5);
        assert!((trace_rho0_rhom(mode, &r0, &s, 0.3, 5).unwrap() - want).abs() < 1e-12);
    }
    let ps = pure(3, 77);
    let dense = trace_rho0_rhom(TraceMode::Dense, &r0, &ps, 0.3, 5).unwrap();
    for mode in [TraceMode::Partition, TraceMode::PureSigma] {
        assert!((trace_rho0_rhom(mode, &r0, &ps, 0.3, 5).unwrap() - dense).abs() < 1e-12);
    }
    assert!(trace_rho0_rhom(TraceMode::PureSigma, &r0, &mixed(3, 1), 0.3, 5).is_err());
    assert!(trace_rho0_rhom(TraceMode::Commuting, &r0, &mixed(3, 1), 0.3, 5).is_err());
    assert!(trace_rho0_rhom(TraceMode::Dense, &mixed(3, 1), &ps, 0.3, 5).is_err());
}

#[test]
fn general_fidelity_examples() {
    let r0 = DensityMatrix::basis(2, 0).unwrap();
    let s = DensityMatrix::basis(2, 1).unwrap();
    assert_eq!(fidelity_general(&r0, &s, 0.0, 3).unwrap(), 1.0);
    let p: f64 = 0.3;
    let rho = DensityMatrix::from_matrix(r0.matrix().scale(1.0 - p) + s.matrix().scale(p)).unwrap();
    let tm = trace_moment(&rho, 3).unwrap().re;
    let want = (1.0 - p + 2.0 * (1.0 - p).powi(3)) / (1.0 + 2.0 * tm);
    assert!((fidelity_general(&r0, &s, p, 3).unwrap() - want).abs() < 1e-14);
    let dense = run_named_gadget(GadgetKind::Cgg, &rho, 3, CAP).unwrap();
    assert!((state_metrics(&dense.purified, &r0).unwrap().fidelity - want).abs() < 1e-12);
    assert_eq!(fidelity_general(&r0, &r0, 0.4, 5).unwrap(), 1.0);
    assert!(matches!(fidelity_general(&r0, &s, 0.3, 4), Err(Error::NotPrime(4))));
}

#[test]
fn general_fidelity_matches_dense_for_non_commuting_sigma() {
    let r0 = DensityMatrix::basis(2, 0).unwrap();
    for seed in 0..5 {
        let s = mixed(2, seed);
        let rho = DensityMatrix::from_matrix(r0.matrix().scale(0.8) + s.matrix().scale(0.2)).unwrap();
        let dense = run_named_gadget(GadgetKind::Cgg, &rho, 5, CAP).unwrap();
        let want = state_metrics(&dense.purified, &r0).unwrap().fidelity;
        assert!((fidelity_general(&r0, &s, 0.2, 5).unwrap() - want).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn spec_parameters_are_ordered(p in 1e-6f64..0.999, d in 2u64..1000) {
        let s = spec(p, d);
        prop_assert!(0.0 < s.gamma() && s.gamma() < s.beta() && s.beta() <= 1.0);
    }

    #[test]
    fn partition_mode_matches_dense(seed in any::<u64>(), d in 2usize..5, m in 1u32..9, p in 0.0f64..1.0) {
        let r0 = pure(d, seed);
        let s = mixed(d, seed ^ 0xabc);
        let dense = trace_rho0_rhom(TraceMode::Dense, &r0, &s, p, m).unwrap();
        let part = trace_rho0_rhom(TraceMode::Partition, &r0, &s, p, m).unwrap();
        prop_assert!((dense - part).abs() < 1e-9);
    }

    #[test]
    fn cgg_closed_form_is_a_state(seed in any::<u64>(), d in 2usize..6, m in 1usize..40) {
        let out = closed_form_outcome(GadgetKind::Cgg, &mixed(d, seed), m).unwrap();
        out.purified.validate().unwrap();
        prop_assert!(out.accept_prob > 0.0 && out.accept_prob <= 1.0 + 1e-12);
    }

    #[test]
    fn infinite_rate_is_finite_limit(p in 0.01f64..0.9, m in 1usize..20) {
        let exact = depolarised_ptilde(GadgetKind::Cgg, inf(p), m).unwrap().ptilde;
        prop_assert!((exact - ptilde_infinite(p, m as f64)).abs() < 1e-15);
        let huge = depolarised_ptilde(GadgetKind::Cgg, spec(p, 1 << 40), m).unwrap().ptilde;
        prop_assert!((huge - exact).abs() < 1e-9);
    }
}
