//! Resource counts for the gadget circuits.

use std::fmt;
use std::str::FromStr;

use super::GroupLabel;
use crate::error::{Error, Result};

/// Gadget names accepted by the cost model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetName {
    Sgg,
    RsgSingle,
    RsgMOutputs,
    Esd,
    Cgg,
    Gsg,
}

impl GadgetName {
    pub const ALL: [GadgetName; 6] =
        [GadgetName::Sgg, GadgetName::RsgSingle, GadgetName::RsgMOutputs, GadgetName::Esd, GadgetName::Cgg, GadgetName::Gsg];

    pub fn as_str(self) -> &'static str {
        match self {
            GadgetName::Sgg => "SGG",
            GadgetName::RsgSingle => "RSG_single",
            GadgetName::RsgMOutputs => "RSG_M_outputs",
            GadgetName::Esd => "ESD",
            GadgetName::Cgg => "CGG",
            GadgetName::Gsg => "GSG",
        }
    }
}

impl fmt::Display for GadgetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GadgetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GadgetName::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownGadget(s.to_string()))
    }
}

/// Asymptotic growth of a resource in `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Constant,
    Log,
    Linear,
    MLogM,
    MSquaredLogM,
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthClass::Constant => "O(1)",
            GrowthClass::Log => "O(log M)",
            GrowthClass::Linear => "O(M)",
            GrowthClass::MLogM => "O(M log M)",
            GrowthClass::MSquaredLogM => "O(M^2 log M)",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub gadget: GadgetName,
    pub copies: usize,
    pub ancilla_qubits: u64,
    /// Controlled-SWAPs in the controlled-permutation stage.
    pub cswap_count: u64,
    /// Gates preparing and un-preparing the ancilla superposition.
    pub superposition_gates: u64,
    pub output_count: usize,
    pub group: Option<GroupLabel>,
    pub ancilla_class: GrowthClass,
    pub cswap_class: GrowthClass,
}

/// `⌈log2 n⌉` for `n ≥ 1`.
fn ceil_log2(n: u64) -> u64 {
    (u64::BITS - (n - 1).leading_zeros()) as u64
}

/// `⌈log2 M!⌉`, exact up to round-off only where `M!` is far from a power of two.
fn ceil_log2_factorial(m: usize) -> u64 {
    if m <= 2 {
        return ceil_log2(m.max(1) as u64);
    }
    let bits: f64 = (2..=m).map(|k| (k as f64).log2()).sum();
    bits.ceil() as u64
}

/// Ancilla superposition over `2^n` (Hadamards) or `N` (QFT) branches, applied twice.
fn superposition_cost(branches_pow2: bool, n: u64) -> u64 {
    if branches_pow2 {
        2 * n
    } else {
        n * (n + 1)
    }
}

pub fn cost_model(gadget: GadgetName, m: usize) -> Result<CostReport> {
    if m == 0 {
        return Err(Error::IncompatibleCopies { kind: gadget.to_string(), copies: m });
    }
    let mu = m as u64;
    let needs_pow2 = matches!(gadget, GadgetName::Gsg | GadgetName::RsgSingle | GadgetName::RsgMOutputs);
    if needs_pow2 && !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m));
    }
    let log_m = ceil_log2(mu);
    let report = match gadget {
        GadgetName::Sgg => {
            let n = ceil_log2_factorial(m);
            CostReport {
                gadget,
                copies: m,
                ancilla_qubits: n,
                cswap_count: (mu - 1) * n,
                superposition_gates: superposition_cost(m <= 2, n),
                output_count: m,
                group: Some(GroupLabel::Symmetric),
                ancilla_class: GrowthClass::MLogM,
                cswap_class: GrowthClass::MSquaredLogM,
            }
        }
        GadgetName::Cgg => CostReport {
            gadget,
            copies: m,
            ancilla_qubits: log_m,
            cswap_count: (mu - 1) * log_m,
            superposition_gates: superposition_cost(m.is_power_of_two(), log_m),
            output_count: m,
            group: Some(GroupLabel::Cyclic),
            ancilla_class: GrowthClass::Log,
            cswap_class: GrowthClass::MLogM,
        },
        GadgetName::Gsg => CostReport {
            gadget,
            copies: m,
            ancilla_qubits: log_m,
            cswap_count: mu / 2 * log_m,
            superposition_gates: 2 * log_m,
            output_count: m,
            group: Some(GroupLabel::ParallelSwap),
            ancilla_class: GrowthClass::Log,
            cswap_class: GrowthClass::MLogM,
        },
        GadgetName::Esd => CostReport {
            gadget,
            copies: m,
            ancilla_qubits: 1,
            cswap_count: mu - 1,
            superposition_gates: 2,
            output_count: m,
            group: Some(GroupLabel::DerangementPair),
            ancilla_class: GrowthClass::Constant,
            cswap_class: GrowthClass::Linear,
        },
        GadgetName::RsgSingle => CostReport {
            gadget,
            copies: m,
            ancilla_qubits: mu - 1,
            cswap_count: mu - 1,
            superposition_gates: 2 * (mu - 1),
            output_count: m.min(2),
            group: None,
            ancilla_class: GrowthClass::Linear,
            cswap_class: GrowthClass::Linear,
        },
        GadgetName::RsgMOutputs => CostReport {
            gadget,
            copies: m,
            ancilla_qubits: mu / 2 * log_m,
            cswap_count: mu / 2 * log_m,
            superposition_gates: mu * log_m,
            output_count: m,
            group: None,
            ancilla_class: GrowthClass::MLogM,
            cswap_class: GrowthClass::MLogM,
        },
    };
    Ok(report)
}
