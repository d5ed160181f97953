use std::path::Path;
use std::process::{Command, Output};

use purify_cli::config::FlatConfig;
use purify_cli::costs::cost_table;
use purify_cli::sweep::{run_sweep, write_csv, Source, SweepConfig, SweepGadget, SWEEP_KEYS};
use purify_cli::verify::{cmd_verify, Fault, Level};
use purify_core::analytic::{optimal_point, Dimension};
use purify_core::densmat::DenseCap;
use purify_core::permgroup::GadgetName;
use purify_core::GadgetKind;

const CAP: DenseCap = DenseCap(4096);

fn purify(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_purify")).args(args).current_dir(dir).env_remove("PURIFY_DENSE_CAP").output().unwrap()
}

fn sweep_config(pairs: &[&str]) -> SweepConfig {
    let mut c = FlatConfig::new(SWEEP_KEYS);
    for p in pairs {
        c.set_pair(p).unwrap();
    }
    SweepConfig::from_flat(&c).unwrap()
}

fn csv_of(config: &SweepConfig) -> String {
    let mut buf = Vec::new();
    write_csv(&run_sweep(config, CAP), &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn empty_copy_list_gives_header_only() {
    assert_eq!(csv_of(&sweep_config(&["m="])), "gadget,p,d,M,ptilde,ratio,accept_prob,source\n");
}

#[test]
fn infinite_dimension_sweep_finds_the_optimum() {
    let rows = run_sweep(&sweep_config(&["gadgets=CGG", "p=1e-3", "d=inf"]), CAP);
    assert_eq!(rows.len(), 14);
    let best = rows.iter().min_by(|a, b| a.ratio.total_cmp(&b.ratio)).unwrap();
    let m_star = optimal_point(1e-3).unwrap().m_star;
    // The power-of-two grid brackets M*.
    assert!(best.m as f64 >= m_star / 2.0 && best.m as f64 <= 2.0 * m_star);
    assert_eq!(best.m, 1024);
}

#[test]
fn analytic_rows_match_dense_twins() {
    let rows = run_sweep(&sweep_config(&["gadgets=SWAP,CGG,GSG,ESD,RSG", "p=1e-3,0.2", "d=2,3,32", "m=1,2,3,4,5,6"]), CAP);
    let mut twins = 0;
    for dense in rows.iter().filter(|r| r.source == Source::Dense) {
        let analytic = rows
            .iter()
            .find(|r| r.source == Source::Analytic && (r.gadget, r.p, r.d, r.m) == (dense.gadget, dense.p, dense.d, dense.m))
            .unwrap();
        assert!((analytic.ptilde - dense.ptilde).abs() < 1e-10, "{dense:?}");
        assert!((analytic.accept_prob - dense.accept_prob).abs() < 1e-10, "{dense:?}");
        twins += 1;
    }
    assert!(twins > 30);
    assert!(rows.iter().any(|r| r.gadget == SweepGadget::Kind(GadgetKind::Cgg) && r.d == Dimension::Finite(32) && r.m == 2 && r.source == Source::Dense));
    // 32^3 exceeds the cap.
    assert!(!rows.iter().any(|r| r.d == Dimension::Finite(32) && r.m >= 3 && r.source == Source::Dense));
}

#[test]
fn rows_satisfy_schema_invariants() {
    let rows = run_sweep(&SweepConfig::default_figures(), CAP);
    for r in &rows {
        if r.gadget != SweepGadget::Valley {
            assert!((r.ratio - r.ptilde / r.p).abs() <= 1e-12 * r.ratio.abs().max(1.0));
        }
        if r.source == Source::Dense {
            let d = r.d.finite().unwrap() as usize;
            assert!(CAP.check_power(d, r.m).is_ok());
        }
    }
    assert!(rows.windows(2).all(|w| (w[0].gadget, w[0].p, w[0].d, w[0].m, w[0].source) < (w[1].gadget, w[1].p, w[1].d, w[1].m, w[1].source)));
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = purify(&["sweep", "-o", "a.csv"], dir.path());
    let b = purify(&["sweep", "-o", "b.csv"], dir.path());
    assert!(a.status.success() && b.status.success());
    let (a, b) = (std::fs::read(dir.path().join("a.csv")).unwrap(), std::fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().any(|l| l.starts_with("CGG,") && l.contains(",inf,")));
    assert!(text.lines().any(|l| l.starts_with("VALLEY,")));
    assert!(text.lines().any(|l| l.ends_with(",DENSE")));
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let out = purify(&["sweep", "colour=blue"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    std::fs::write(dir.path().join("sweep.cfg"), "# comment\ngadgets = CGG\nwidth = 3\n").unwrap();
    let out = purify(&["sweep", "--config", "sweep.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));
}

#[test]
fn config_file_and_overrides_combine() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("sweep.cfg"), "gadgets = CGG\np = 0.1\nd = 2\nm = 1,2\n").unwrap();
    let out = purify(&["sweep", "--config", "sweep.cfg", "m=3"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.starts_with("CGG,1.0000000000000001e-1,2,3,")));
}

#[test]
fn verify_fast_passes_and_fault_injection_fails() {
    let good = cmd_verify(Level::Fast, Fault::None, CAP);
    assert!(good.all_passed(), "{}", good.render());
    assert!(good.checks.iter().all(|c| c.max_error <= c.tolerance));
    let bad = cmd_verify(Level::Fast, Fault::Totient, CAP);
    assert!(!bad.all_passed());
    assert!(bad.checks.iter().any(|c| !c.passed && c.name.contains("CGG closed form")));

    let dir = tempfile::tempdir().unwrap();
    let ok = purify(&["verify", "--report", "report.txt"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert!(std::fs::read_to_string(dir.path().join("report.txt")).unwrap().contains("PASS"));
    let broken = purify(&["verify", "--inject-fault", "totient"], dir.path());
    assert_eq!(broken.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&broken.stdout).contains("FAIL"));
}

#[test]
fn cost_table_examples() {
    let rows = cost_table(&[2, 3, 8, 64]);
    for r in rows.iter().filter(|r| r.gadget == GadgetName::Esd) {
        assert_eq!((r.ancilla_qubits, r.cswap_count, r.output_count), (1, r.copies as u64 - 1, r.copies));
    }
    let anc = |g, m| rows.iter().find(|r| r.gadget == g && r.copies == m).unwrap().ancilla_qubits;
    assert_eq!((anc(GadgetName::Cgg, 8), anc(GadgetName::Sgg, 8)), (3, 16));
    // Power-of-two gadgets have no M=3 row.
    assert!(!rows.iter().any(|r| r.gadget == GadgetName::Gsg && r.copies == 3));

    let dir = tempfile::tempdir().unwrap();
    let out = purify(&["costs", "--m", "4,8", "--csv", "costs.csv"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("costs.csv")).unwrap();
    assert!(csv.starts_with("gadget,M,ancilla_qubits,cswap_count"));
    assert!(csv.lines().any(|l| l.starts_with("ESD,8,1,7,")));
}

#[test]
fn zeno_writes_deterministic_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        let o = purify(&["zeno", "--seed", "7", &format!("out={out}")], dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run("a");
    run("b");
    let mut finals = Vec::new();
    for m in [1, 2, 4] {
        let name = format!("zeno_M{m}.csv");
        let a = std::fs::read(dir.path().join("a").join(&name)).unwrap();
        assert_eq!(a, std::fs::read(dir.path().join("b").join(&name)).unwrap());
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().next(), Some("step,fidelity,cumulative_accept"));
        assert_eq!(text.lines().count(), 52);
        let last = text.lines().last().unwrap();
        finals.push(last.split(',').nth(1).unwrap().parse::<f64>().unwrap());
    }
    assert!(finals[2] >= finals[1] && finals[1] >= finals[0], "{finals:?}");
}

#[test]
fn noiseless_zeno_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let o = purify(&["zeno", "eta=0", "steps=5", "copies=2", "out=z"], dir.path());
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("z/zeno_M2.csv")).unwrap();
    for line in text.lines().skip(1) {
        let f: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }
}

#[test]
fn gadget_command_prints_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = purify(&["gadget", "--kind", "CGG", "--p", "0.2", "--d", "2", "--m", "4"], dir.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dense = v["dense"]["ptilde"].as_f64().unwrap();
    let analytic = v["analytic"]["ptilde"].as_f64().unwrap();
    assert!((dense - analytic).abs() < 1e-12);
    let bad = purify(&["gadget", "--kind", "GSG", "--p", "0.2", "--d", "2", "--m", "3"], dir.path());
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn dense_cap_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_purify"))
        .args(["sweep", "gadgets=CGG", "p=0.1", "d=2", "m=4"])
        .env("PURIFY_DENSE_CAP", "8")
        .current_dir(dir.path())
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("DENSE"));
    assert_eq!(text.lines().count(), 2);
}
