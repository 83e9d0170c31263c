use std::path::Path;
use std::process::{Command, Output};

fn eprsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eprsim")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

const SMALL: &str = "[source]\nlambda = 702e-9\nsigma_env = 28.08e-6\n[alice]\nn = 128\n\
                     [slits]\na = 30e-6\nd = 150e-6\n[screen]\nbins = 512\n[run]\ntrials = 2000\n";

#[test]
fn audit_reports_the_toy_numbers() {
    let v = json(&eprsim(&["audit"]));
    assert!((v["frobenius_delta_prime"].as_f64().unwrap() - 0.70711).abs() < 1e-5);
    assert!((v["linearity_residual"].as_f64().unwrap() - 0.76537).abs() < 1e-5);
    assert_eq!(v["factorized_form_hermitian"], false);
}

#[test]
fn spdc_signal_speed() {
    let v = json(&eprsim(&["spdc", "--f", "1.0", "--g", "10.0"]));
    assert_eq!(v["v_eff_over_c"].as_f64().unwrap(), 27.0);
    assert_eq!(v["v_eff_over_c_exact"], "27");
    assert_eq!(v["imaging"]["c_a_k"]["magnitude"].as_f64().unwrap(), 0.0);
}

#[test]
fn pattern_is_normalized_at_the_centre() {
    let dir = tempfile::tempdir().unwrap();
    json(&eprsim(&["pattern", "--out-dir", dir.path().to_str().unwrap()]));
    for name in ["pattern_double_slit.csv", "pattern_single_slit.csv"] {
        let text = read(dir.path(), name);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("y_m,intensity"));
        let centre = lines.find(|l| l.starts_with("0.00000000e0,")).expect("y = 0 row");
        assert_eq!(centre, "0.00000000e0,1.00000000e0");
    }
}

#[test]
fn experiment_is_deterministic_and_records_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("small.bench");
    std::fs::write(&bench, SMALL).unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let v = json(&eprsim(&[
            "experiment",
            "--bench",
            bench.to_str().unwrap(),
            "--seed",
            "5",
            "--out-dir",
            out.to_str().unwrap(),
        ]));
        (v, out)
    };
    let (v, a) = run("a");
    let (_, b) = run("b");
    assert_eq!(v["overrides"]["seed"], 5);
    assert_eq!(v["spec"]["run"]["seed"], 5);
    for name in ["singles_position.csv", "coincidence_momentum.csv", "sampled_position.csv", "sampled_momentum.csv"] {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    let strip = |s: String| s.replace(b.to_str().unwrap(), a.to_str().unwrap());
    assert_eq!(read(&a, "experiment.json"), strip(read(&b, "experiment.json")));
    assert!(v["singles_max_abs_difference"].as_f64().unwrap() < 1e-9);
}

#[test]
fn telegraph_in_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("small.bench");
    std::fs::write(&bench, SMALL).unwrap();
    let b = bench.to_str().unwrap();
    let v = json(&eprsim(&["telegraph", "--bench", b, "--mode", "paper-narrative", "--bits", "0110"]));
    assert_eq!(v["report"]["bits_decoded"], "0110");
    assert_eq!(v["overrides"]["mode"], "paper_narrative");
    let v = json(&eprsim(&["telegraph", "--bench", b, "--random", "8"]));
    assert_eq!(v["report"]["bit_error_rate"].as_f64().unwrap(), 0.5);
}

#[test]
fn exit_codes() {
    assert_eq!(eprsim(&[]).status.code(), Some(1));
    assert_eq!(eprsim(&["nonsense"]).status.code(), Some(1));
    assert_eq!(eprsim(&["spdc", "--f"]).status.code(), Some(1));
    assert_eq!(eprsim(&["--help"]).status.code(), Some(0));
    assert_eq!(eprsim(&["spdc", "--f", "0", "--g", "1"]).status.code(), Some(2));
    assert_eq!(eprsim(&["pattern", "--preset", "nope"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.bench");
    std::fs::write(&bad, "[source]\nlambda = 702e-9\n[slits]\na = 200e-6\nd = 150e-6\n").unwrap();
    let out = eprsim(&["experiment", "--bench", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5: slit separation must exceed slit width"), "{err}");
}

#[test]
fn library_entry_point_matches_binary() {
    assert_eq!(eprsim_cli::run(["eprsim", "audit"]), 0);
    assert_eq!(eprsim_cli::run(["eprsim", "frobnicate"]), 1);
}
