//! Purification-ratio sweeps over `(gadget, p, d, M)` tuples.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;

use purify_core::analytic::{depolarised_ptilde, extract_ptilde, DepolarisedSpec, Dimension};
use purify_core::densmat::DenseCap;
use purify_core::gadgets::run_named_gadget;
use purify_core::noise::depolarise;
use purify_core::{DensityMatrix, GadgetKind};
use rayon::prelude::*;

use crate::config::{parse, ConfigError, FlatConfig};
use crate::format::float;

pub const SWEEP_KEYS: &[&str] = &["gadgets", "p", "d", "m", "dense"];

pub const CSV_HEADER: [&str; 8] = ["gadget", "p", "d", "M", "ptilde", "ratio", "accept_prob", "source"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    Analytic,
    Dense,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Analytic => "ANALYTIC",
            Source::Dense => "DENSE",
        })
    }
}

/// A gadget curve, or the reference line `p̃/p = e/M` through the optimal points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepGadget {
    Kind(GadgetKind),
    Valley,
}

impl SweepGadget {
    fn parse(s: &str) -> Result<Self, purify_core::Error> {
        if s.eq_ignore_ascii_case("VALLEY") {
            Ok(SweepGadget::Valley)
        } else {
            s.parse().map(SweepGadget::Kind)
        }
    }
}

impl fmt::Display for SweepGadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepGadget::Kind(k) => write!(f, "{k}"),
            SweepGadget::Valley => f.write_str("VALLEY"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gadget: SweepGadget,
    pub p: f64,
    pub d: Dimension,
    pub m: usize,
    pub ptilde: f64,
    pub ratio: f64,
    pub accept_prob: f64,
    pub source: Source,
}

impl SweepRow {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.gadget
            .cmp(&other.gadget)
            .then(self.p.total_cmp(&other.p))
            .then(self.d.cmp(&other.d))
            .then(self.m.cmp(&other.m))
            .then(self.source.cmp(&other.source))
    }

    pub fn record(&self) -> [String; 8] {
        [
            self.gadget.to_string(),
            float(self.p),
            self.d.to_string(),
            self.m.to_string(),
            float(self.ptilde),
            float(self.ratio),
            float(self.accept_prob),
            self.source.to_string(),
        ]
    }
}

/// Cross product of gadgets, error rates, dimensions and copy counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepBlock {
    pub gadgets: Vec<SweepGadget>,
    pub ps: Vec<f64>,
    pub dims: Vec<Dimension>,
    pub ms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub blocks: Vec<SweepBlock>,
    /// Emit a dense-simulation twin wherever `d^M` fits the cap.
    pub dense: bool,
}

fn powers_of_two(max_exp: u32) -> Vec<usize> {
    (0..=max_exp).map(|n| 1usize << n).collect()
}

/// Integer `M` on a log grid over `[1, max]`, merged with the powers of two.
fn curve_grid(max: usize, points: usize) -> Vec<usize> {
    let mut ms: Vec<usize> = (0..points)
        .map(|i| ((max as f64).ln() * i as f64 / (points - 1) as f64).exp().round() as usize)
        .chain(powers_of_two(max.trailing_zeros()))
        .collect();
    ms.sort_unstable();
    ms.dedup();
    ms
}

impl SweepConfig {
    /// Ratio-vs-`M` figures: `d = 32` points, `d = ∞` curves and the valley line
    /// for four error rates, plus a dimension sweep at `p = 10⁻³`.
    pub fn default_figures() -> Self {
        let ps = vec![1e-1, 1e-2, 1e-3, 1e-4];
        let points = powers_of_two(13);
        SweepConfig {
            blocks: vec![
                SweepBlock {
                    gadgets: vec![SweepGadget::Kind(GadgetKind::Cgg)],
                    ps: ps.clone(),
                    dims: vec![Dimension::Finite(32)],
                    ms: points.clone(),
                },
                SweepBlock {
                    gadgets: vec![SweepGadget::Kind(GadgetKind::Cgg)],
                    ps: ps.clone(),
                    dims: vec![Dimension::Infinite],
                    ms: curve_grid(1 << 13, 121),
                },
                SweepBlock { gadgets: vec![SweepGadget::Valley], ps, dims: vec![Dimension::Infinite], ms: points.clone() },
                SweepBlock {
                    gadgets: vec![SweepGadget::Kind(GadgetKind::Cgg)],
                    ps: vec![1e-3],
                    dims: [2, 4, 8, 16, 32, 64, 128, 256, 512].map(Dimension::Finite).into_iter().chain([Dimension::Infinite]).collect(),
                    ms: points,
                },
            ],
            dense: true,
        }
    }

    /// A single block from flat keys; no keys gives [`SweepConfig::default_figures`].
    pub fn from_flat(c: &FlatConfig) -> Result<Self, ConfigError> {
        let dense = c.scalar::<bool>("dense")?.unwrap_or(true);
        let keys = ["gadgets", "p", "d", "m"];
        if keys.iter().all(|k| c.get(k).is_none()) {
            return Ok(SweepConfig { dense, ..Self::default_figures() });
        }
        let gadgets = c.list("gadgets", SweepGadget::parse)?.unwrap_or_else(|| vec![SweepGadget::Kind(GadgetKind::Cgg)]);
        let ps = c.list("p", parse::<f64>)?.unwrap_or_else(|| vec![1e-3]);
        for &p in &ps {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::BadValue { key: "p".into(), value: p.to_string(), reason: "outside [0, 1]".into() });
            }
        }
        let dims = c.list("d", parse::<Dimension>)?.unwrap_or_else(|| vec![Dimension::Infinite]);
        let ms = c.list("m", parse::<usize>)?.unwrap_or_else(|| powers_of_two(13));
        if ms.contains(&0) {
            return Err(ConfigError::BadValue { key: "m".into(), value: "0".into(), reason: "copy counts must be ≥ 1".into() });
        }
        Ok(SweepConfig { blocks: vec![SweepBlock { gadgets, ps, dims, ms }], dense })
    }
}

fn dense_row(kind: GadgetKind, p: f64, d: u64, m: usize, cap: DenseCap) -> Option<SweepRow> {
    let d_us = d as usize;
    cap.check_power(d_us, m).ok()?;
    let rho0 = DensityMatrix::basis(d_us, 0).ok()?;
    let rho = depolarise(&rho0, p, d_us).ok()?;
    let out = run_named_gadget(kind, &rho, m, cap).ok()?;
    let ptilde = extract_ptilde(&out.purified, &rho0).ok()?;
    Some(SweepRow {
        gadget: SweepGadget::Kind(kind),
        p,
        d: Dimension::Finite(d),
        m,
        ptilde,
        ratio: ptilde / p,
        accept_prob: out.accept_prob,
        source: Source::Dense,
    })
}

fn tuple_rows(gadget: SweepGadget, p: f64, d: Dimension, m: usize, dense: bool, cap: DenseCap) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    match gadget {
        SweepGadget::Valley => {
            let ratio = std::f64::consts::E / m as f64;
            rows.push(SweepRow { gadget, p, d, m, ptilde: ratio * p, ratio, accept_prob: f64::NAN, source: Source::Analytic });
        }
        SweepGadget::Kind(kind) => {
            if kind.check_copies(m).is_err() {
                return rows;
            }
            if let Ok(spec) = DepolarisedSpec::new(p, d) {
                if let Ok(r) = depolarised_ptilde(kind, spec, m) {
                    rows.push(SweepRow {
                        gadget,
                        p,
                        d,
                        m,
                        ptilde: r.ptilde,
                        ratio: r.ptilde / p,
                        accept_prob: r.accept_prob,
                        source: Source::Analytic,
                    });
                }
            }
            if dense {
                if let Dimension::Finite(df) = d {
                    rows.extend(dense_row(kind, p, df, m, cap));
                }
            }
        }
    }
    rows
}

/// Evaluates every tuple in parallel and returns rows in `(gadget, p, d, M, source)` order.
pub fn run_sweep(config: &SweepConfig, cap: DenseCap) -> Vec<SweepRow> {
    let mut tuples = Vec::new();
    for b in &config.blocks {
        for &g in &b.gadgets {
            for &p in &b.ps {
                for &d in &b.dims {
                    for &m in &b.ms {
                        tuples.push((g, p, d, m));
                    }
                }
            }
        }
    }
    let mut rows: Vec<SweepRow> =
        tuples.into_par_iter().flat_map_iter(|(g, p, d, m)| tuple_rows(g, p, d, m, config.dense, cap)).collect();
    rows.sort_by(SweepRow::key_cmp);
    rows.dedup_by(|a, b| a.key_cmp(b) == Ordering::Equal);
    rows
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}
