//! Zeno trajectories written as one CSV per copy count.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use purify_core::densmat::DenseCap;
use purify_core::noise::CoherentDriftEnsemble;
use purify_core::zeno::{run_zeno, ZenoNoise, ZenoRun};
use purify_core::{Complex64, DensityMatrix, GadgetKind};

use crate::config::{parse, FlatConfig};
use crate::format::float;

pub const ZENO_KEYS: &[&str] = &["eta", "steps", "copies", "gadget", "noise", "epsilon", "dt", "seed", "out"];

#[derive(Debug, Clone, PartialEq)]
pub struct ZenoConfig {
    pub eta: f64,
    pub steps: usize,
    pub copies: Vec<usize>,
    pub gadget: GadgetKind,
    /// `dephasing` or `drift`.
    pub drift: bool,
    pub epsilon: f64,
    pub dt: f64,
    pub seed: u64,
    pub out: PathBuf,
}

impl ZenoConfig {
    pub fn from_flat(c: &FlatConfig) -> anyhow::Result<Self> {
        let drift = match c.get("noise").unwrap_or("dephasing") {
            "dephasing" => false,
            "drift" => true,
            other => bail!("invalid value `{other}` for key `noise`: expected `dephasing` or `drift`"),
        };
        Ok(ZenoConfig {
            eta: c.scalar("eta")?.unwrap_or(0.02),
            steps: c.scalar("steps")?.unwrap_or(50),
            copies: c.list("copies", parse::<usize>)?.unwrap_or_else(|| vec![1, 2, 4]),
            gadget: c.scalar("gadget")?.unwrap_or(GadgetKind::Cgg),
            drift,
            epsilon: c.scalar("epsilon")?.unwrap_or(1.0),
            dt: c.scalar("dt")?.unwrap_or(0.1),
            seed: c.scalar("seed")?.unwrap_or(0),
            out: c.get("out").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("zeno")),
        })
    }
}

/// The `|+⟩` qubit tracked by the Zeno runs.
pub fn plus_state() -> DensityMatrix {
    DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).expect("non-zero vector")
}

pub fn simulate(cfg: &ZenoConfig, m: usize, cap: DenseCap) -> anyhow::Result<ZenoRun> {
    let noise = if cfg.drift {
        ZenoNoise::CoherentDrift(CoherentDriftEnsemble::random(m, 2, cfg.epsilon, cfg.dt, cfg.seed)?)
    } else {
        ZenoNoise::Dephasing { eta: cfg.eta }
    };
    let run = ZenoRun::new(cfg.steps, m, cfg.gadget, noise)?;
    Ok(run_zeno(run, &plus_state(), cap)?)
}

pub fn write_trajectory<W: Write>(run: &ZenoRun, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "fidelity", "cumulative_accept"])?;
    for p in &run.trajectory {
        w.write_record([p.step.to_string(), float(p.fidelity), float(p.cumulative_accept)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn trajectory_path(dir: &Path, m: usize) -> PathBuf {
    dir.join(format!("zeno_M{m}.csv"))
}

/// Runs every copy count and writes `zeno_M{M}.csv` under `cfg.out`.
pub fn cmd_zeno(cfg: &ZenoConfig, cap: DenseCap) -> anyhow::Result<Vec<(PathBuf, ZenoRun)>> {
    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut written = Vec::new();
    for &m in &cfg.copies {
        let run = simulate(cfg, m, cap)?;
        let path = trajectory_path(&cfg.out, m);
        let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_trajectory(&run, std::io::BufWriter::new(file))?;
        written.push((path, run));
    }
    Ok(written)
}
