use fnls::harness::*;
use fnls::Error;
use std::path::Path;
use std::process::Command;

fn body(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    let (first, rest) = text.split_once('\n').unwrap();
    assert!(first.starts_with("# fnls "), "{first}");
    rest.to_string()
}

fn quick_resonance() -> Config {
    Config::default().set("resonance.boxes", "10,20")
}

#[test]
fn runs_are_byte_identical_apart_from_the_header() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = Config::default().set("fields.count", 20).set("params.eps", "1,1/4");
    let opts = RunOptions { seed: 7, plot: true };
    let ra = run_with("strichartz-sweep", &cfg, Some(a.path()), &opts).unwrap();
    let rb = run_with("strichartz-sweep", &cfg, Some(b.path()), &opts).unwrap();
    assert_eq!(ra.files.len(), 4);
    for (fa, fb) in ra.files.iter().zip(&rb.files) {
        if fa.extension().unwrap() == "csv" {
            assert_eq!(body(fa), body(fb));
        } else {
            assert_eq!(std::fs::read(fa).unwrap(), std::fs::read(fb).unwrap());
        }
    }
    assert_eq!(ra.outputs, rb.outputs);
    // a different seed draws different fields
    let rc = run_with("strichartz-sweep", &cfg, None, &RunOptions { seed: 8, plot: false }).unwrap();
    assert_ne!(ra.outputs, rc.outputs);
}

#[test]
fn record_snapshot_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Config::default().set("datum.kind", "pure-frequency").set("datum.n", 3).set("time.horizon", 0.2);
    let opts = RunOptions { seed: 11, plot: false };
    let r = run_with("simulate", &cfg, Some(dir.path()), &opts).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.config.len(), lookup("simulate").unwrap().keys.len());
    let again = run_with("simulate", &r.replay_config(), None, &opts).unwrap();
    assert_eq!(again.outputs, r.outputs);
    assert_eq!(again.table, r.table);
    // the written snapshot file parses back to the same config
    let written = run(
        "simulate",
        Some(&dir.path().join("simulate.config")),
        &dir.path().join("replay"),
    )
    .unwrap();
    assert_eq!(written.config, r.config);
}

#[test]
fn smooth_simulation_is_report_only() {
    let cfg = Config::default().set("time.horizon", 0.05).set("grid.num_points", 32);
    let r = run_with("simulate", &cfg, None, &RunOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::ReportOnly);
    assert!(r.outputs["mass_drift"] < 1e-10);
    assert!(!r.anchor.is_empty());
}

#[test]
fn errors() {
    let dir = tempfile::tempdir().unwrap();
    match run("no-such-thing", None, dir.path()) {
        Err(Error::UnknownExperiment { valid, .. }) => {
            assert_eq!(valid.len(), 15);
            assert!(valid.iter().any(|v| v == "holomorphy"));
        }
        other => panic!("{other:?}"),
    }
    let bad_key = Config::default().set("grid.nope", 3);
    assert!(matches!(run_with("simulate", &bad_key, None, &RunOptions::default()), Err(Error::Config(_))));
    let bad_value = Config::default().set("nonlinearity.kind", "N4");
    assert!(matches!(run_with("simulate", &bad_value, None, &RunOptions::default()), Err(Error::Config(_))));
    let file = dir.path().join("a-file");
    std::fs::write(&file, "x").unwrap();
    assert!(matches!(
        run_with("resonance-count", &quick_resonance(), Some(&file.join("sub")), &RunOptions::default()),
        Err(Error::Output { .. })
    ));
}

#[test]
fn sharpness_verdict_follows_its_tolerance() {
    let r = run_with("sharpness", &Config::default().set("sharpness.deltas", 4), None, &RunOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.outputs["max_relative_error"] <= 0.03);
    let tight = Config::default().set("sharpness.deltas", 4).set("check.slope", 3e-4);
    assert_eq!(run_with("sharpness", &tight, None, &RunOptions::default()).unwrap().verdict, Verdict::Fail);
}

#[test]
fn tightening_one_tolerance_fails_only_its_row() {
    let base = run_acceptance(&Tolerances::default(), Suite::Smoke, None, None);
    let tight = Tolerances { sharpness_slope: Tolerances::default().sharpness_slope / 100.0, ..Tolerances::default() };
    let changed = run_acceptance(&tight, Suite::Smoke, None, None);
    assert_eq!(base.rows.len(), 13);
    assert!(base.row(3).unwrap().passed());
    assert!(!changed.row(3).unwrap().passed());
    for (a, b) in base.rows.iter().zip(&changed.rows) {
        if a.id != 3 {
            assert_eq!(a.verdict, b.verdict, "criterion {}", a.id);
            assert_eq!(a.detail, b.detail, "criterion {}", a.id);
        }
    }
    // smoke runs the same checks, so the resonance claim fails there too
    assert!(!base.row(8).unwrap().passed());
    assert!(base.rows.iter().filter(|r| r.id != 8).all(|r| r.passed()), "{:#?}", base.rows);
}

#[test]
fn summary_has_one_row_per_criterion() {
    let s = run_acceptance_in(&Tolerances::default(), Suite::Smoke, Some(2), Some(&[9, 12]), None);
    assert_eq!(s.rows.iter().map(|r| r.id).collect::<Vec<_>>(), vec![9, 12]);
    let csv = s.to_csv().unwrap();
    assert!(csv.starts_with("criterion,title,anchor,experiments,verdict,detail\n"));
    assert_eq!(csv.lines().count(), 3);
    assert_eq!(criteria().len(), 13);
    let ids: Vec<u32> = criteria().iter().map(|c| c.id).collect();
    assert_eq!(ids, (1..=13).collect::<Vec<_>>());
}

#[test]
fn workers_do_not_change_results() {
    let cfg = Config::default().set("fields.count", 16);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = one.install(|| run_with("strichartz-sweep", &cfg, None, &RunOptions::default()).unwrap());
    let b = run_with("strichartz-sweep", &cfg, None, &RunOptions::default()).unwrap();
    assert_eq!(a.table, b.table);
}

#[test]
fn cli_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_fnls");
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "# only the cheap part\nillposed.multiples = 1,2\n").unwrap();
    let ok = Command::new(exe).args(["illposed", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(dir.path().join("illposed.csv").exists());

    std::fs::write(&cfg, "resonance.boxes = 10,20\n").unwrap();
    let fail = Command::new(exe).args(["resonance-count", "--plot", "--config"]).arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    assert!(dir.path().join("resonance-count.svg").exists());

    let unknown = Command::new(exe).args(["bogus", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("valid names"));

    std::fs::write(&cfg, "not a pair\n").unwrap();
    let malformed = Command::new(exe).args(["illposed", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(malformed.status.code(), Some(2));

    let usage = Command::new(exe).args(["illposed", "--seed", "x"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
