use std::f64::consts::E;

use crate::error::{Error, Result};

/// `p̃(M) = p / (1 + (M-1)(1-p)^M)`, the infinite-dimension CGG/GSG rate at real `M`.
pub fn ptilde_infinite(p: f64, m: f64) -> f64 {
    p / (1.0 + (m - 1.0) * (1.0 - p).powf(m))
}

/// `dp̃/dM` of [`ptilde_infinite`].
pub fn dptilde_dm(p: f64, m: f64) -> f64 {
    let q = 1.0 - p;
    let l = q.ln();
    let den = 1.0 + (m - 1.0) * q.powf(m);
    -q.powf(m) * (1.0 + (m - 1.0) * l) * p / (den * den)
}

/// The minimiser of [`ptilde_infinite`] over real `M ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPoint {
    pub p: f64,
    /// `1 - 1/ln(1-p)`.
    pub m_star: f64,
    /// `e·ln(1-p)·p / (e·ln(1-p) + p - 1)`.
    pub ptilde_star: f64,
    /// `e/(M* + e - 1) < p̃*/p`.
    pub ratio_lower: f64,
    /// `p̃*/p < e²/(M* + e² - 1)`.
    pub ratio_upper: f64,
    /// Integer `M` with the smaller rate among `⌊M*⌋` and `⌈M*⌉`.
    pub best_integer_m: u64,
    /// Whether `dp̃/dM` changes sign from negative to positive across `M*`.
    pub certified: bool,
}

pub fn optimal_point(p: f64) -> Result<OptimalPoint> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("optimal point needs 0 < p < 1, got {p}")));
    }
    let l = (1.0 - p).ln();
    let m_star = 1.0 - 1.0 / l;
    let ptilde_star = E * l * p / (E * l + p - 1.0);
    let lo = m_star.floor().max(1.0);
    let hi = m_star.ceil().max(1.0);
    let best = if ptilde_infinite(p, lo) <= ptilde_infinite(p, hi) { lo } else { hi };
    let h = 1e-3 * m_star.max(1.0);
    let certified = dptilde_dm(p, m_star - h) < 0.0 && dptilde_dm(p, m_star + h) > 0.0;
    Ok(OptimalPoint {
        p,
        m_star,
        ptilde_star,
        ratio_lower: E / (m_star + E - 1.0),
        ratio_upper: E * E / (m_star + E * E - 1.0),
        best_integer_m: best as u64,
        certified,
    })
}

/// Expected input copies per accepted output at the optimal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingCosts {
    pub p: f64,
    /// `M*/P₀(M*)` for the cyclic gadget.
    pub cgg_copies: f64,
    /// Leading term `e/p`.
    pub cgg_leading: f64,
    /// Upper bound `2p / (p̃*(1-2p)²)` for the SWAP cascade reaching `p̃*`; needs `p < 1/2`.
    pub rsg_copies_bound: Option<f64>,
    /// Leading term `2/(e·p)`.
    pub rsg_leading: f64,
}

pub fn sampling_costs(p: f64) -> Result<SamplingCosts> {
    let opt = optimal_point(p)?;
    let m = opt.m_star;
    let accept = (1.0 + (m - 1.0) * (1.0 - p).powf(m)) / m;
    let rsg = (p < 0.5).then(|| 2.0 * p / (opt.ptilde_star * (1.0 - 2.0 * p).powi(2)));
    Ok(SamplingCosts { p, cgg_copies: m / accept, cgg_leading: E / p, rsg_copies_bound: rsg, rsg_leading: 2.0 / (E * p) })
}

/// `(ln(1-p) - 1)² / ((ln(1-p) - (1-p)/e) ln(1-p))`, the simplified CGG cost.
pub fn cgg_copies_simplified(p: f64) -> f64 {
    let l = (1.0 - p).ln();
    (l - 1.0).powi(2) / ((l - (1.0 - p) / E) * l)
}
