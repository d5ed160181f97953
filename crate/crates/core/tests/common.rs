#![allow(dead_code)]

use purify_core::densmat::{random_density, CMatrix};
use purify_core::{Complex64, DenseOperator, DensityMatrix};

pub fn max_abs(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn mixed(d: usize, seed: u64) -> DensityMatrix {
    random_density(d, d, seed).unwrap()
}

pub fn pure(d: usize, seed: u64) -> DensityMatrix {
    random_density(d, 1, seed).unwrap()
}

/// Reference Kronecker product by explicit index arithmetic.
pub fn kron_ref(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m) = (a.nrows(), b.nrows());
    CMatrix::from_fn(n * m, n * m, |i, j| a[(i / m, j / m)] * b[(i % m, j % m)])
}

/// Reference `ρ^k` by repeated multiplication.
pub fn power_ref(r: &DensityMatrix, k: usize) -> CMatrix {
    let mut acc = r.matrix().clone();
    for _ in 1..k {
        acc = &acc * r.matrix();
    }
    acc
}

/// Brute-force `Tr_{2..M}[P S P]` using the explicit projector matrix.
pub fn sandwich_ref(s: &CMatrix, p: &CMatrix, d: usize) -> CMatrix {
    let full = p * s * p;
    let rest = full.nrows() / d;
    CMatrix::from_fn(d, d, |i, k| (0..rest).map(|r| full[(i * rest + r, k * rest + r)]).sum())
}

/// Product state `⊗ₖ ρₖ` via the reference Kronecker product.
pub fn product_ref(regs: &[DensityMatrix]) -> CMatrix {
    regs[1..].iter().fold(regs[0].matrix().clone(), |acc, r| kron_ref(&acc, r.matrix()))
}

pub fn depolarised_zero(p: f64, d: usize) -> DensityMatrix {
    let m = CMatrix::from_fn(d, d, |i, j| {
        let base = if i == j { p / d as f64 } else { 0.0 };
        c(base + if i == 0 && j == 0 { 1.0 - p } else { 0.0 })
    });
    DensityMatrix::from_matrix(m).unwrap()
}

/// `λ₀|0⟩⟨0| ⊕ (1-λ₀)τ`, an error state commuting with `|0⟩⟨0|`.
pub fn commuting_sigma(d: usize, lambda0: f64, seed: u64) -> DensityMatrix {
    let tau = mixed(d - 1, seed);
    let m = CMatrix::from_fn(d, d, |i, j| match (i, j) {
        (0, 0) => c(lambda0),
        (0, _) | (_, 0) => c(0.0),
        _ => tau.matrix()[(i - 1, j - 1)] * (1.0 - lambda0),
    });
    DensityMatrix::from_matrix(m).unwrap()
}
