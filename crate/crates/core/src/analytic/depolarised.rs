use std::fmt;
use std::str::FromStr;

use super::totient::cgg_weights;
use crate::error::{Error, Result};
use crate::gadgets::GadgetKind;

/// Local dimension of a depolarised register; `Infinite` is the symbolic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dimension::Finite(d) => Some(d),
            Dimension::Infinite => None,
        }
    }

    /// `1/d`, zero in the infinite limit.
    pub fn inverse(self) -> f64 {
        match self {
            Dimension::Finite(d) => 1.0 / d as f64,
            Dimension::Infinite => 0.0,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Dimension {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Dimension::Infinite);
        }
        match t.parse::<u64>() {
            Ok(d) if d >= 2 => Ok(Dimension::Finite(d)),
            _ => Err(Error::InvalidArgument(format!("dimension `{s}` must be an integer ≥ 2 or `inf`"))),
        }
    }
}

/// `ρ = (1-p)ρ₀ + p·I/d` for a pure `ρ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarisedSpec {
    pub p: f64,
    pub dim: Dimension,
}

impl DepolarisedSpec {
    pub fn new(p: f64, dim: Dimension) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("error rate {p} outside [0, 1]")));
        }
        if let Dimension::Finite(d) = dim {
            if d < 2 {
                return Err(Error::InvalidArgument(format!("dimension {d} must be ≥ 2")));
            }
        }
        Ok(DepolarisedSpec { p, dim })
    }

    /// Dominant eigenvalue `1 - (1 - 1/d)p`.
    pub fn beta(&self) -> f64 {
        1.0 - (1.0 - self.dim.inverse()) * self.p
    }

    /// Minor eigenvalue `p/d`.
    pub fn gamma(&self) -> f64 {
        self.p * self.dim.inverse()
    }

    /// `Tr[ρ^m] = β^m + (1-β)γ^(m-1)`.
    pub fn trace_moment(&self, m: u32) -> f64 {
        let (b, g) = (self.beta(), self.gamma());
        b.powi(m as i32) + (1.0 - b) * g.powi(m as i32 - 1)
    }
}

/// Output error rate and post-selection probability of a gadget on depolarised inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarisedRate {
    pub ptilde: f64,
    pub accept_prob: f64,
}

impl DepolarisedRate {
    pub fn ratio(&self, p: f64) -> f64 {
        self.ptilde / p
    }
}

/// `p̃` and `P₀` for `M` depolarised copies.
///
/// Supported kinds are SWAP, CGG, GSG, ESD and RSG; the infinite-dimension
/// limit is evaluated symbolically.
pub fn depolarised_ptilde(kind: GadgetKind, spec: DepolarisedSpec, m: usize) -> Result<DepolarisedRate> {
    kind.check_copies(m)?;
    let p = spec.p;
    let mf = m as f64;
    let q = 1.0 - p;
    let rate = match (kind, spec.dim) {
        (GadgetKind::Swap | GadgetKind::Cgg, Dimension::Finite(_)) => {
            let (g, mut num, mut den) = (spec.gamma(), 0.0, 0.0);
            for (k, phi) in cgg_weights(m as u64) {
                let t = spec.trace_moment(k as u32);
                let reps = (m as u64 / k) as i32;
                num += phi as f64 * t.powi(reps - 1) * g.powi(k as i32 - 1);
                den += phi as f64 * t.powi(reps);
            }
            DepolarisedRate { ptilde: p * num / den, accept_prob: den / mf }
        }
        (GadgetKind::Gsg, _) if m == 1 => DepolarisedRate { ptilde: p, accept_prob: 1.0 },
        (GadgetKind::Gsg, Dimension::Finite(_)) => {
            let t2 = spec.trace_moment(2);
            let half = (m / 2) as i32;
            let den = 1.0 + (mf - 1.0) * t2.powi(half);
            DepolarisedRate {
                ptilde: p * (1.0 + (mf - 1.0) * t2.powi(half - 1) * spec.gamma()) / den,
                accept_prob: den / mf,
            }
        }
        (GadgetKind::Swap | GadgetKind::Cgg | GadgetKind::Gsg, Dimension::Infinite) => {
            let den = 1.0 + (mf - 1.0) * q.powi(m as i32);
            DepolarisedRate { ptilde: p / den, accept_prob: den / mf }
        }
        (GadgetKind::Esd, Dimension::Finite(_)) => {
            let den = 1.0 + spec.trace_moment(m as u32);
            DepolarisedRate { ptilde: p * (1.0 + spec.gamma().powi(m as i32 - 1)) / den, accept_prob: den / 2.0 }
        }
        (GadgetKind::Esd, Dimension::Infinite) => {
            if m == 1 {
                DepolarisedRate { ptilde: p, accept_prob: 1.0 }
            } else {
                let den = 1.0 + q.powi(m as i32);
                DepolarisedRate { ptilde: p / den, accept_prob: den / 2.0 }
            }
        }
        (GadgetKind::Rsg, _) => {
            let traj = rsg_iterate(spec, m.trailing_zeros())?;
            match traj.levels.last() {
                Some(l) => DepolarisedRate { ptilde: l.ptilde, accept_prob: l.joint_accept },
                None => DepolarisedRate { ptilde: p, accept_prob: 1.0 },
            }
        }
        (GadgetKind::Sgg, _) => {
            return Err(Error::InvalidArgument("SGG has no closed-form depolarised rate; simulate it densely".into()))
        }
    };
    Ok(rate)
}

/// One level of the recursive SWAP cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsgLevel {
    pub level: u32,
    pub ptilde: f64,
    /// Acceptance of a single SWAP gadget at this level.
    pub step_accept: f64,
    /// Joint acceptance of all gadgets up to and including this level.
    pub joint_accept: f64,
    /// `p / (2^n (1-2p) + 2p)`, defined for `p < 1/2`.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsgTrajectory {
    pub p: f64,
    pub levels: Vec<RsgLevel>,
}

/// Single SWAP step on depolarised inputs: `(p̃, P₀)`.
pub fn swap_step(spec: DepolarisedSpec) -> (f64, f64) {
    let (p, inv_d) = (spec.p, spec.dim.inverse());
    let accept = 1.0 - (1.0 - inv_d) * p + 0.5 * (1.0 - inv_d) * p * p;
    (p * (1.0 + p * inv_d) / (2.0 * accept), accept)
}

pub fn rsg_iterate(spec: DepolarisedSpec, depth: u32) -> Result<RsgTrajectory> {
    let p = spec.p;
    let mut levels: Vec<RsgLevel> = Vec::with_capacity(depth as usize);
    let mut current = spec;
    for level in 1..=depth {
        let (next, accept) = swap_step(current);
        // A depth-n tree runs 2^(n-k) gadgets at level k.
        let log_joint: f64 = levels
            .iter()
            .map(|l| l.step_accept.ln() * 2f64.powi((level - l.level) as i32))
            .sum::<f64>()
            + accept.ln();
        let bound = (p < 0.5).then(|| p / (2f64.powi(level as i32) * (1.0 - 2.0 * p) + 2.0 * p));
        levels.push(RsgLevel { level, ptilde: next, step_accept: accept, joint_accept: log_joint.exp(), bound });
        current = DepolarisedSpec::new(next.clamp(0.0, 1.0), spec.dim)?;
    }
    Ok(RsgTrajectory { p, levels })
}
