//! Register permutations, the purification groups and their projectors.
//!
//! A permutation is stored as its image list: the content of register `k` is
//! moved to register `image[k]`. Composition `σ.compose(τ)` applies `τ` first,
//! so that `matrix(σ∘τ) = matrix(σ)·matrix(τ)`.

mod cost;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;

use crate::densmat::{CMatrix, DenseCap};
use crate::error::{Error, Result};

pub use cost::{cost_model, CostReport, GadgetName, GrowthClass};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// From zero-based images.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::InvalidArgument(format!("{image:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    /// From one-based images, e.g. `[2, 1]` for the SWAP of two registers.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::InvalidArgument("one-based images must be ≥ 1".into()));
        }
        Self::from_images(image.iter().map(|i| i - 1).collect())
    }

    /// `k ↦ k + shift mod n`.
    pub fn cyclic_shift(n: usize, shift: usize) -> Self {
        Permutation { image: (0..n).map(|k| (k + shift) % n).collect() }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, k: usize) -> usize {
        self.image[k]
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "composing permutations of different sizes");
        Permutation { image: other.image.iter().map(|&k| self.image[k]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (k, &i) in self.image.iter().enumerate() {
            inv[i] = k;
        }
        Permutation { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &i)| k == i)
    }

    pub fn is_derangement(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &i)| k != i)
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.size()];
        let mut lens = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.image[k];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{}", self.image.iter().map(|i| (i + 1).to_string()).join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    /// All `M!` register permutations.
    Symmetric,
    /// Cyclic shifts `k ↦ k + i mod M`.
    Cyclic,
    /// `(Z/2)^n` generated by the layered pairwise swaps, `M = 2^n`.
    ParallelSwap,
    /// `{I, full cyclic shift}`; a group only for `M ≤ 2`.
    DerangementPair,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupLabel::Symmetric => "SYMMETRIC",
            GroupLabel::Cyclic => "CYCLIC",
            GroupLabel::ParallelSwap => "PARALLEL_SWAP",
            GroupLabel::DerangementPair => "DERANGEMENT_PAIR",
        })
    }
}

/// An explicit list of register permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationGroup {
    label: GroupLabel,
    copies: usize,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    pub fn label(&self) -> GroupLabel {
        self.label
    }
    pub fn copies(&self) -> usize {
        self.copies
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    /// Closure under composition and inverses, and presence of the identity.
    pub fn is_closed(&self) -> bool {
        let set: HashSet<&Permutation> = self.elements.iter().collect();
        self.elements.iter().any(Permutation::is_identity)
            && self.elements.iter().all(|a| set.contains(&a.inverse()))
            && self.elements.iter().all(|a| self.elements.iter().all(|b| set.contains(&a.compose(b))))
    }
}

/// Builds the named group on `m` registers.
pub fn build_group(label: GroupLabel, m: usize) -> Result<PermutationGroup> {
    if m == 0 {
        return Err(Error::InvalidArgument("a group needs at least one register".into()));
    }
    let elements = match label {
        GroupLabel::Symmetric => {
            if m > 10 {
                return Err(Error::InvalidArgument(format!("S_{m} is too large to enumerate")));
            }
            (0..m).permutations(m).map(|image| Permutation { image }).collect()
        }
        GroupLabel::Cyclic => (0..m).map(|i| Permutation::cyclic_shift(m, i)).collect(),
        GroupLabel::ParallelSwap => {
            if !m.is_power_of_two() {
                return Err(Error::NotPowerOfTwo(m));
            }
            closure(&layer_swaps(m), m)
        }
        GroupLabel::DerangementPair => {
            if m == 1 {
                vec![Permutation::identity(1)]
            } else {
                vec![Permutation::identity(m), Permutation::cyclic_shift(m, 1)]
            }
        }
    };
    Ok(PermutationGroup { label, copies: m, elements })
}

/// The layer generators `S_k`, each swapping registers `a ↔ a + 2^{k-1}` in blocks.
pub fn layer_swaps(m: usize) -> Vec<Permutation> {
    let n = m.trailing_zeros();
    (0..n)
        .map(|k| {
            let half = 1usize << k;
            Permutation { image: (0..m).map(|a| a ^ half).collect() }
        })
        .collect()
}

fn closure(generators: &[Permutation], m: usize) -> Vec<Permutation> {
    let id = Permutation::identity(m);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                out.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    out
}

/// Basis-index action of a register permutation on `(C^d)^{⊗M}`.
#[derive(Debug, Clone)]
pub(crate) struct RegisterMap {
    /// `P|x⟩ = |fwd[x]⟩`.
    pub fwd: Vec<usize>,
    /// `P^†|y⟩ = |inv[y]⟩`.
    pub inv: Vec<usize>,
}

impl RegisterMap {
    pub fn new(perm: &Permutation, d: usize) -> Self {
        let m = perm.size();
        let dim = d.pow(m as u32);
        let mut fwd = vec![0; dim];
        let mut inv = vec![0; dim];
        let mut digits = vec![0usize; m];
        let weights: Vec<usize> = (0..m).map(|k| d.pow((m - 1 - k) as u32)).collect();
        for (x, slot) in fwd.iter_mut().enumerate() {
            let mut r = x;
            for dk in digits.iter_mut().rev() {
                *dk = r % d;
                r /= d;
            }
            let y: usize = (0..m).map(|k| digits[k] * weights[perm.image[k]]).sum();
            *slot = y;
            inv[y] = x;
        }
        RegisterMap { fwd, inv }
    }
}

/// The `d^M × d^M` matrix of a register permutation.
pub fn permutation_matrix(perm: &Permutation, d: usize, cap: DenseCap) -> Result<CMatrix> {
    let dim = cap.check_power(d, perm.size())?;
    let map = RegisterMap::new(perm, d);
    let mut m = CMatrix::zeros(dim, dim);
    for (x, &y) in map.fwd.iter().enumerate() {
        m[(y, x)] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// The group-averaged projector `(1/|G|) Σ_g P_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorMatrix {
    pub label: GroupLabel,
    pub entries: CMatrix,
}

pub fn group_projector(group: &PermutationGroup, d: usize, cap: DenseCap) -> Result<ProjectorMatrix> {
    if !group.is_closed() {
        return Err(Error::InvalidArgument(format!(
            "{} on {} registers is not closed, so its average is not a projector",
            group.label, group.copies
        )));
    }
    let dim = cap.check_power(d, group.copies)?;
    let w = Complex64::new(1.0 / group.order() as f64, 0.0);
    let mut m = CMatrix::zeros(dim, dim);
    for g in &group.elements {
        let map = RegisterMap::new(g, d);
        for (x, &y) in map.fwd.iter().enumerate() {
            m[(y, x)] += w;
        }
    }
    Ok(ProjectorMatrix { label: group.label, entries: m })
}
