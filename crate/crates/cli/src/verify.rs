//! Self-check suite run by `purify verify`.

use std::fmt::Write as _;

use purify_core::analytic::{
    cgg_closed_form_with_weights, cgg_weights_with, closed_form_outcome, depolarised_ptilde, euler_totient, extract_ptilde,
    optimal_point, ptilde_infinite, rsg_iterate, trace_rho0_rhom, DepolarisedSpec, Dimension, TraceMode,
};
use purify_core::densmat::{random_density, tensor_power, DenseCap, DenseOperator};
use purify_core::gadgets::apply_group_gadget;
use purify_core::noise::depolarise;
use purify_core::permgroup::{build_group, group_projector};
use purify_core::zeno::{run_zeno, ZenoNoise, ZenoRun};
use purify_core::{CMatrix, DensityMatrix, GadgetKind, GroupLabel, Result};

use crate::zeno::plus_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

/// Deliberate corruption used to confirm the suite detects faults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    None,
    /// Replaces `φ(n)` with `n`.
    Totient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {:<44} max_error={:.3e} tolerance={:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_error,
                c.tolerance
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

struct Suite {
    level: Level,
    fault: Fault,
    cap: DenseCap,
    checks: Vec<Check>,
}

fn max_abs(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).camax()
}

impl Suite {
    fn totient(&self, n: u64) -> u64 {
        match self.fault {
            Fault::None => euler_totient(n),
            Fault::Totient => n,
        }
    }

    fn pick<T>(&self, fast: T, full: T) -> T {
        match self.level {
            Level::Fast => fast,
            Level::Full => full,
        }
    }

    fn record(&mut self, name: &str, tolerance: f64, result: Result<f64>) {
        let (max_error, passed) = match result {
            Ok(e) => (e, e <= tolerance),
            Err(_) => (f64::INFINITY, false),
        };
        self.checks.push(Check { name: name.to_string(), max_error, tolerance, passed });
    }

    fn totient_weights(&mut self) {
        let top = self.pick(64, 512);
        let err = (1..=top)
            .map(|m| {
                let w = cgg_weights_with(m, |n| self.totient(n));
                (w.values().sum::<u64>() as f64 - m as f64).abs()
            })
            .fold(0.0, f64::max);
        self.record("cgg weights sum to M", 0.0, Ok(err));
    }

    fn cgg_closed_form(&mut self) {
        let (mmax, seeds) = self.pick((6, 3), (8, 20));
        let res = (|| {
            let mut err = 0.0f64;
            for m in 2..=mmax {
                let weights = cgg_weights_with(m as u64, |n| self.totient(n));
                let group = build_group(GroupLabel::Cyclic, m)?;
                for s in 0..seeds {
                    let rho = random_density(2, 2, 1000 + s)?;
                    let dense = apply_group_gadget(&tensor_power(&rho, m, self.cap)?, &group)?;
                    let closed = cgg_closed_form_with_weights(&rho, m, &weights)?;
                    err = err
                        .max(max_abs(dense.purified.matrix(), closed.purified.matrix()))
                        .max((dense.accept_prob - closed.accept_prob).abs());
                }
            }
            Ok(err)
        })();
        self.record("CGG closed form vs dense projection", 1e-10, res);
    }

    fn group_closed_forms(&mut self) {
        let seeds = self.pick(3, 10);
        let cases: Vec<(GadgetKind, GroupLabel, Vec<usize>)> = vec![
            (GadgetKind::Gsg, GroupLabel::ParallelSwap, self.pick(vec![2, 4], vec![2, 4, 8])),
            (GadgetKind::Sgg, GroupLabel::Symmetric, self.pick(vec![2, 3, 4], vec![2, 3, 4, 5])),
            (GadgetKind::Esd, GroupLabel::DerangementPair, self.pick(vec![2, 3, 4], vec![2, 3, 4, 5, 6])),
        ];
        for (kind, label, ms) in cases {
            let res = (|| {
                let mut err = 0.0f64;
                for &m in &ms {
                    let group = build_group(label, m)?;
                    for s in 0..seeds {
                        let rho = random_density(2, 2, 2000 + s)?;
                        let dense = apply_group_gadget(&tensor_power(&rho, m, self.cap)?, &group)?;
                        let closed = closed_form_outcome(kind, &rho, m)?;
                        err = err
                            .max(max_abs(dense.purified.matrix(), closed.purified.matrix()))
                            .max((dense.accept_prob - closed.accept_prob).abs());
                    }
                }
                Ok(err)
            })();
            self.record(&format!("{kind} closed form vs dense projection"), 1e-10, res);
        }
    }

    fn depolarised_rates(&mut self) {
        let ps: Vec<f64> = self.pick(vec![0.1, 0.5], vec![0.05, 0.2, 0.35, 0.5, 0.65, 0.8]);
        let mmax = self.pick(4, 6);
        let res = (|| {
            let mut err = 0.0f64;
            for d in [2usize, 4] {
                let rho0 = DensityMatrix::basis(d, 0)?;
                for &p in &ps {
                    let rho = depolarise(&rho0, p, d)?;
                    let spec = DepolarisedSpec::new(p, Dimension::Finite(d as u64))?;
                    for m in 1..=mmax {
                        if self.cap.check_power(d, m).is_err() {
                            continue;
                        }
                        for (kind, label) in
                            [(GadgetKind::Cgg, GroupLabel::Cyclic), (GadgetKind::Gsg, GroupLabel::ParallelSwap), (GadgetKind::Esd, GroupLabel::DerangementPair)]
                        {
                            if kind.check_copies(m).is_err() {
                                continue;
                            }
                            let out = apply_group_gadget(&tensor_power(&rho, m, self.cap)?, &build_group(label, m)?)?;
                            let want = depolarised_ptilde(kind, spec, m)?;
                            err = err
                                .max((extract_ptilde(&out.purified, &rho0)? - want.ptilde).abs())
                                .max((out.accept_prob - want.accept_prob).abs());
                        }
                    }
                }
            }
            Ok(err)
        })();
        self.record("depolarised rates vs dense extraction", 1e-10, res);
    }

    fn rsg_bound(&mut self) {
        let res = (|| {
            let mut worst = f64::NEG_INFINITY;
            for p in [0.1, 0.2, 0.3, 0.4] {
                let t = rsg_iterate(DepolarisedSpec::new(p, Dimension::Finite(2))?, 5)?;
                for l in &t.levels {
                    worst = worst.max(l.ptilde - l.bound.unwrap());
                }
            }
            // Strict inequality: report the margin as an error only when violated.
            Ok(if worst < 0.0 { 0.0 } else { worst.max(f64::MIN_POSITIVE) })
        })();
        self.record("SWAP cascade below its bound", 0.0, res);
    }

    fn optimal_points(&mut self) {
        let res = (|| {
            let mut bad = 0.0;
            for p in [1e-1, 1e-2, 1e-3] {
                let o = optimal_point(p)?;
                let r = o.ptilde_star / p;
                let top = (3.0 * o.m_star).ceil() as u64;
                let argmin = (1..=top)
                    .min_by(|a, b| ptilde_infinite(p, *a as f64).total_cmp(&ptilde_infinite(p, *b as f64)))
                    .unwrap();
                let in_bracket = argmin == o.m_star.floor() as u64 || argmin == o.m_star.ceil() as u64;
                if !(o.certified && o.ratio_lower < r && r < o.ratio_upper && in_bracket) {
                    bad += 1.0;
                }
            }
            Ok(bad)
        })();
        self.record("optimal copy number and rate sandwich", 0.0, res);
    }

    fn partitions(&mut self) {
        let (mmax, seeds) = self.pick((6, 3), (8, 20));
        let res = (|| {
            let mut err = 0.0f64;
            for s in 0..seeds {
                let d = 2 + (s as usize % 3);
                let rho0 = random_density(d, 1, 3000 + s)?;
                let sigma = random_density(d, d, 4000 + s)?;
                for m in 1..=mmax {
                    let want = trace_rho0_rhom(TraceMode::Dense, &rho0, &sigma, 0.3, m)?;
                    err = err.max((trace_rho0_rhom(TraceMode::Partition, &rho0, &sigma, 0.3, m)? - want).abs());
                }
            }
            Ok(err)
        })();
        self.record("partition expansion vs matrix powers", 1e-9, res);
    }

    fn projectors(&mut self) {
        let res = (|| {
            let mut err = 0.0f64;
            for (label, m) in [(GroupLabel::Symmetric, 3), (GroupLabel::Cyclic, 4), (GroupLabel::ParallelSwap, 4), (GroupLabel::Cyclic, 5)] {
                let p = group_projector(&build_group(label, m)?, 2, self.cap)?.entries;
                err = err.max(max_abs(&(&p * &p), &p)).max(max_abs(&p.adjoint(), &p));
            }
            Ok(err)
        })();
        self.record("group projectors idempotent and Hermitian", 1e-10, res);
    }

    fn zeno_bare(&mut self) {
        let res = (|| {
            let eta = 0.03;
            let run = run_zeno(ZenoRun::new(40, 1, GadgetKind::Cgg, ZenoNoise::Dephasing { eta })?, &plus_state(), self.cap)?;
            Ok(run
                .trajectory
                .iter()
                .map(|p| (p.fidelity - 0.5 * (1.0 + (1.0 - eta).powi(p.step as i32))).abs())
                .fold(0.0, f64::max))
        })();
        self.record("bare dephasing trajectory", 1e-12, res);
    }
}

/// Runs every check; `fault` corrupts one ingredient to exercise the failure path.
pub fn cmd_verify(level: Level, fault: Fault, cap: DenseCap) -> VerifyReport {
    let mut s = Suite { level, fault, cap, checks: Vec::new() };
    s.totient_weights();
    s.cgg_closed_form();
    s.group_closed_forms();
    s.depolarised_rates();
    s.rsg_bound();
    s.optimal_points();
    s.partitions();
    s.projectors();
    s.zeno_bare();
    VerifyReport { checks: s.checks }
}
