use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use purify_cli::config::FlatConfig;
use purify_cli::sweep::{run_sweep, SweepConfig, SWEEP_KEYS};
use purify_cli::verify::{cmd_verify, Fault, Level};
use purify_cli::zeno::{cmd_zeno, ZenoConfig, ZENO_KEYS};
use purify_cli::{costs, gadget, sweep};
use purify_core::analytic::Dimension;
use purify_core::densmat::DenseCap;
use purify_core::GadgetKind;

/// Permutation-group purification toolkit.
///
/// The dense-simulation dimension cap is read from PURIFY_DENSE_CAP (default 4096).
#[derive(Parser)]
#[command(name = "purify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Purification ratios over (gadget, p, d, M); keys: gadgets, p, d, m, dense.
    Sweep {
        /// Line-oriented `key = value` file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// `key=value` overrides, e.g. `gadgets=CGG,GSG p=1e-3 d=32,inf m=1,2,4`.
        settings: Vec<String>,
    },
    /// Run the invariant suite; exit status 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Corrupt one ingredient to confirm the suite catches it.
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Ancilla and controlled-SWAP counts per gadget.
    Costs {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8, 16, 64])]
        m: Vec<usize>,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Repeated stabilisation trajectories; keys: eta, steps, copies, gadget, noise, epsilon, dt, seed, out.
    Zeno {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed for the drift Hamiltonians (overrides `seed=`).
        #[arg(long)]
        seed: Option<u64>,
        settings: Vec<String>,
    },
    /// One gadget on a depolarised |0⟩, printed as JSON.
    Gadget {
        #[arg(long)]
        kind: GadgetKind,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: Dimension,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Totient,
}

fn flat(keys: &'static [&'static str], file: Option<&PathBuf>, settings: &[String]) -> anyhow::Result<FlatConfig> {
    let mut c = FlatConfig::new(keys);
    if let Some(path) = file {
        c.load_file(path)?;
    }
    for s in settings {
        c.set_pair(s)?;
    }
    Ok(c)
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cap = DenseCap::from_env()?;
    match cli.command {
        Command::Sweep { config, out, settings } => {
            let c = flat(SWEEP_KEYS, config.as_ref(), &settings)?;
            let rows = run_sweep(&SweepConfig::from_flat(&c)?, cap);
            sweep::write_csv(&rows, output(out.as_ref())?)?;
        }
        Command::Verify { level, report, inject_fault } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let fault = match inject_fault {
                Some(FaultArg::Totient) => Fault::Totient,
                None => Fault::None,
            };
            let r = cmd_verify(level, fault, cap);
            let text = r.render();
            print!("{text}");
            if let Some(path) = report {
                std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            if !r.all_passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Costs { m, csv } => {
            let rows = costs::cost_table(&m);
            print!("{}", costs::render_text(&rows));
            if let Some(path) = csv {
                costs::write_csv(&rows, output(Some(&path))?)?;
            }
        }
        Command::Zeno { config, seed, settings } => {
            let c = flat(ZENO_KEYS, config.as_ref(), &settings)?;
            let mut cfg = ZenoConfig::from_flat(&c)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            for (path, run) in cmd_zeno(&cfg, cap)? {
                let last = run.trajectory.last().map(|p| p.fidelity).unwrap_or(f64::NAN);
                let flag = if run.flagged { " (step-error guard exceeded)" } else { "" };
                println!("M={} final_fidelity={last:.6} -> {}{flag}", run.copies, path.display());
            }
        }
        Command::Gadget { kind, p, d, m } => {
            let report = gadget::cmd_gadget(kind, p, d, m, cap)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
