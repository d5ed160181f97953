use super::totient::is_prime;
use crate::densmat::{matrix_power, trace_moment, trace_of_product, CMatrix, DenseOperator, DensityMatrix};
use crate::error::{Error, Result};

/// Evaluation route for `Tr[ρ₀ρ^m]` with `ρ = (1-p)ρ₀ + pσ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMode {
    /// Sum over partitions of the `σ` count, weighted by `F_k = Tr[ρ₀σ^k]`.
    Partition,
    /// Partition sum collapsed for pure `σ`, where every `F_k = F_1`.
    PureSigma,
    /// `(1 - p(1-λ₀))^m` for `σ` commuting with `ρ₀`.
    Commuting,
    /// Matrix powers.
    Dense,
}

/// Largest `m` for which the exact integer coefficients are evaluated.
pub const MAX_PARTITION_ORDER: u32 = 30;

const COMMUTE_TOL: f64 = 1e-10;

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Partitions of `n` into exactly `parts` positive parts, as multiplicity vectors
/// `j` with `j[k-1]` copies of part `k`.
pub fn partitions_with_parts(n: u32, parts: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, parts: u32, max: u32, mult: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if n == 0 {
                out.push(mult.clone());
            }
            return;
        }
        // The remaining parts are ≤ max and ≥ 1.
        let hi = max.min(n.saturating_sub(parts - 1));
        for k in (1..=hi).rev() {
            if k * parts < n {
                break;
            }
            mult[k as usize - 1] += 1;
            rec(n - k, parts - 1, k, mult, out);
            mult[k as usize - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    if n == 0 || parts == 0 || parts > n {
        if n == 0 && parts == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, parts, n, &mut vec![0; n as usize], &mut out);
    out
}

/// `l! / Π j_k!` for a multiplicity vector with `Σ j_k = l`.
fn arrangements(mult: &[u32]) -> u128 {
    let l: u32 = mult.iter().sum();
    mult.iter().fold(factorial(l), |acc, &j| acc / factorial(j))
}

/// Exact coefficient of `(1-p)^(m-i) p^i F_1^l` when `σ` is pure.
pub fn pure_sigma_coefficient(m: u32, i: u32, l: u32) -> u128 {
    if l == 0 {
        return (i == 0) as u128;
    }
    binomial(i - 1, l - 1) * binomial(m - i + 1, l)
}

fn mixture(rho0: &DensityMatrix, sigma: &DensityMatrix, p: f64) -> CMatrix {
    rho0.matrix().scale(1.0 - p) + sigma.matrix().scale(p)
}

fn commutes(a: &CMatrix, b: &CMatrix) -> bool {
    (a * b - b * a).camax() <= COMMUTE_TOL
}

pub fn trace_rho0_rhom(mode: TraceMode, rho0: &DensityMatrix, sigma: &DensityMatrix, p: f64, m: u32) -> Result<f64> {
    if rho0.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho0.dim(), found: sigma.dim() });
    }
    if m == 0 {
        return Err(Error::InvalidArgument("moment order must be ≥ 1".into()));
    }
    let purity0 = rho0.purity();
    if (purity0 - 1.0).abs() > 1e-10 {
        return Err(Error::NotPure { purity: purity0 });
    }
    let f1 = trace_of_product(rho0.matrix(), sigma.matrix()).re;
    match mode {
        TraceMode::Dense => {
            let rm = matrix_power(&mixture(rho0, sigma, p), m);
            Ok(trace_of_product(rho0.matrix(), &rm).re)
        }
        TraceMode::Commuting => {
            if !commutes(rho0.matrix(), sigma.matrix()) {
                return Err(Error::InvalidArgument("σ does not commute with ρ₀".into()));
            }
            Ok((1.0 - p * (1.0 - f1)).powi(m as i32))
        }
        TraceMode::PureSigma => {
            let purity = sigma.purity();
            if (purity - 1.0).abs() > 1e-10 {
                return Err(Error::NotPure { purity });
            }
            check_order(m)?;
            Ok(sum_over_sigma_counts(m, p, |i| {
                (1..=i.min(m - i + 1)).map(|l| pure_sigma_coefficient(m, i, l) as f64 * f1.powi(l as i32)).sum()
            }))
        }
        TraceMode::Partition => {
            check_order(m)?;
            // F_k = Tr[ρ₀σ^k], k = 1..m.
            let mut f = Vec::with_capacity(m as usize);
            let mut sk = sigma.matrix().clone();
            for k in 1..=m {
                if k > 1 {
                    sk = &sk * sigma.matrix();
                }
                f.push(trace_of_product(rho0.matrix(), &sk).re);
            }
            Ok(sum_over_sigma_counts(m, p, |i| partition_weight(m, i, &f)))
        }
    }
}

/// `Σ_l C(m-i+1, l) Σ_{j ⊢ i, l parts} (l!/Πj_k!) Π F_k^{j_k}`.
pub fn partition_weight(m: u32, i: u32, f: &[f64]) -> f64 {
    let mut total = 0.0;
    for l in 1..=i.min(m - i + 1) {
        let slots = binomial(m - i + 1, l);
        for mult in partitions_with_parts(i, l) {
            let prod: f64 = mult.iter().enumerate().map(|(k, &j)| f[k].powi(j as i32)).product();
            total += (slots * arrangements(&mult)) as f64 * prod;
        }
    }
    total
}

fn check_order(m: u32) -> Result<()> {
    if m > MAX_PARTITION_ORDER {
        Err(Error::InvalidArgument(format!("partition expansion limited to m ≤ {MAX_PARTITION_ORDER}")))
    } else {
        Ok(())
    }
}

fn sum_over_sigma_counts(m: u32, p: f64, weight: impl Fn(u32) -> f64) -> f64 {
    let q = 1.0 - p;
    (0..=m)
        .map(|i| {
            let w = if i == 0 { 1.0 } else { weight(i) };
            q.powi((m - i) as i32) * p.powi(i as i32) * w
        })
        .sum()
}

/// CGG output fidelity `(F₁ + (M-1)Tr[ρ₀ρ^M]) / (1 + (M-1)Tr[ρ^M])` for prime `M`.
///
/// Uses the eigenvalue form when `σ` commutes with `ρ₀`, and the partition sum otherwise.
pub fn fidelity_general(rho0: &DensityMatrix, sigma: &DensityMatrix, p: f64, m: u32) -> Result<f64> {
    if !is_prime(m as u64) {
        return Err(Error::NotPrime(m as usize));
    }
    if rho0.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho0.dim(), found: sigma.dim() });
    }
    if p == 0.0 {
        return Ok(1.0);
    }
    let mf = m as f64;
    let lambda0 = trace_of_product(rho0.matrix(), sigma.matrix()).re;
    if commutes(rho0.matrix(), sigma.matrix()) {
        if (lambda0 - 1.0).abs() <= 1e-12 {
            return Ok(1.0);
        }
        // Spectrum of σ on the complement of ρ₀: drop one copy of λ₀.
        let mut ev = sigma.eigenvalues();
        let idx = ev
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - lambda0).abs().partial_cmp(&(b.1 - lambda0).abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        ev.remove(idx);
        let f = 1.0 - p * (1.0 - lambda0);
        let fm = f.powi(m as i32);
        let tm = fm + ev.iter().map(|l| (p * l).powi(m as i32)).sum::<f64>();
        return Ok((f + (mf - 1.0) * fm) / (1.0 + (mf - 1.0) * tm));
    }
    let f = 1.0 - p * (1.0 - lambda0);
    let mode = if m <= MAX_PARTITION_ORDER { TraceMode::Partition } else { TraceMode::Dense };
    let overlap = trace_rho0_rhom(mode, rho0, sigma, p, m)?;
    let rho = DensityMatrix::from_matrix(mixture(rho0, sigma, p))?;
    let tm = trace_moment(&rho, m)?.re;
    Ok((f + (mf - 1.0) * overlap) / (1.0 + (mf - 1.0) * tm))
}
