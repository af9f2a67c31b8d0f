//! End-to-end tests of the `qmixpar` binary: JSON schemas, CSV shape and
//! determinism, and the exit-code contract.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicU32, Ordering};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qmixpar"))
}

static COUNTER: AtomicU32 = AtomicU32::new(0);

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "qmixpar-cli-test-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_file(dir: &std::path::Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

fn run_ok(mut cmd: Command) -> Output {
    let out = cmd.output().unwrap();
    assert!(
        out.status.success(),
        "command failed: {}\n{}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json_stdout(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn build_default_is_the_bell_projector() {
    let dir = scratch_dir();
    let input = write_file(&dir, "bell.json", "{}");
    let out = run_ok({
        let mut c = bin();
        c.arg("build").arg("--input").arg(&input);
        c
    });
    let doc = json_stdout(&out);
    assert_eq!(doc["basis"], "computational");
    assert!((doc["trace"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(doc["route_delta"].as_f64().unwrap() < 1e-10);
    let m = &doc["matrix"];
    for (i, j, want) in [
        (0, 0, 0.5),
        (0, 3, 0.5),
        (3, 0, 0.5),
        (3, 3, 0.5),
        (1, 1, 0.0),
        (2, 2, 0.0),
    ] {
        let re = m[i][j][0].as_f64().unwrap();
        let im = m[i][j][1].as_f64().unwrap();
        assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12);
    }
}

#[test]
fn build_maximally_mixed_in_both_bases() {
    let dir = scratch_dir();
    let input = write_file(
        &dir,
        "iso.json",
        r#"{"nu1": 0.0, "theta": 1.1, "psi21": 2.0, "theta32": 0.7}"#,
    );
    for basis in ["computational", "bold"] {
        let out = run_ok({
            let mut c = bin();
            c.arg("build")
                .arg("--input")
                .arg(&input)
                .arg("--basis")
                .arg(basis);
            c
        });
        let doc = json_stdout(&out);
        let m = &doc["matrix"];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.25 } else { 0.0 };
                assert!((m[i][j][0].as_f64().unwrap() - want).abs() < 1e-12);
                assert!(m[i][j][1].as_f64().unwrap().abs() < 1e-12);
            }
        }
    }
}

#[test]
fn build_accepts_degrees() {
    let dir = scratch_dir();
    let input = write_file(&dir, "deg.json", r#"{"chi": 45.0}"#);
    let out = run_ok({
        let mut c = bin();
        c.arg("build").arg("--input").arg(&input).arg("--degrees");
        c
    });
    let doc = json_stdout(&out);
    assert!((doc["matrix"][0][3][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn measure_bell_is_maximally_entangled() {
    let dir = scratch_dir();
    let input = write_file(&dir, "bell.json", "{}");
    let out = run_ok({
        let mut c = bin();
        c.arg("measure").arg("--input").arg(&input);
        c
    });
    let doc = json_stdout(&out);
    let report = &doc["report"];
    assert_eq!(report["branch"], "general_oracle");
    assert_eq!(report["ppt_satisfied"], false);
    assert!((report["negativity"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((report["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((doc["parts"]["c_p"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    // pure Bell sits on both the s21 slice and the Werner line
    let branches: Vec<&str> = doc["slices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["branch"].as_str().unwrap())
        .collect();
    assert!(branches.contains(&"s21_zero"));
    assert!(branches.contains(&"werner_line"));
}

#[test]
fn measure_werner_boundary_point() {
    let dir = scratch_dir();
    // C_p = 1 at ν₁ = 1/3: exactly on the separability boundary
    let input = write_file(&dir, "wern.json", r#"{"nu1": 0.3333333333333333}"#);
    let out = run_ok({
        let mut c = bin();
        c.arg("measure").arg("--input").arg(&input);
        c
    });
    let doc = json_stdout(&out);
    assert_eq!(doc["report"]["ppt_satisfied"], true);
    assert!(doc["report"]["negativity"].as_f64().unwrap() <= 1e-10);
    let slices = doc["slices"].as_array().unwrap();
    let werner = slices
        .iter()
        .find(|s| s["branch"] == "werner_line")
        .expect("werner_line slice attached");
    assert!(werner["ppt_margin"].as_f64().unwrap().abs() < 1e-10);
    for s in slices {
        assert!(s["delta_negativity"].as_f64().unwrap().abs() < 1e-10);
        assert!(s["delta_concurrence"].as_f64().unwrap().abs() < 1e-10);
    }
}

#[test]
fn measure_s21_slice_delta_is_recorded() {
    let dir = scratch_dir();
    let input = write_file(
        &dir,
        "s21.json",
        r#"{"chi": 0.6, "theta32": 1.2, "psi32": 0.4, "theta0": 2.0, "nu1": 0.5, "nu2": 0.2, "nu3": 0.1}"#,
    );
    let out = run_ok({
        let mut c = bin();
        c.arg("measure").arg("--input").arg(&input);
        c
    });
    let doc = json_stdout(&out);
    let slices = doc["slices"].as_array().unwrap();
    let s21 = slices
        .iter()
        .find(|s| s["branch"] == "s21_zero")
        .expect("theta21 = 0 attaches the s21 slice");
    assert!(s21["delta_negativity"].as_f64().unwrap().abs() < 1e-10);
    assert!(s21["delta_concurrence"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn sweep_crosses_the_werner_threshold() {
    let dir = scratch_dir();
    let spec = write_file(
        &dir,
        "spec.json",
        r#"{"vary":[{"name":"nu1","start":0.0,"stop":1.0,"steps":101}],
            "fixed":{},"outputs":["negativity","concurrence","ppt"]}"#,
    );
    let out_path = dir.join("sweep.csv");
    run_ok({
        let mut c = bin();
        c.arg("sweep")
            .arg("--spec")
            .arg(&spec)
            .arg("--out")
            .arg(&out_path)
            .arg("--jobs")
            .arg("3");
        c
    });
    let csv = fs::read_to_string(&out_path).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "nu1,negativity,concurrence,ppt");
    assert_eq!(rows.len(), 102);
    // negativity switches on within one grid step of ν₁ = 1/3
    let neg_at = |row: &str| -> f64 { row.split(',').nth(1).unwrap().parse().unwrap() };
    assert!(neg_at(rows[34]) <= 1e-10); // ν₁ = 0.33
    assert!(neg_at(rows[35]) > 1e-4); // ν₁ = 0.34
                                      // beyond threshold the closed line is ((2C_p+1)ν₁ − 1)/2 at C_p = 1
    assert!((neg_at(rows[101]) - 1.0).abs() < 1e-10);
}

#[test]
fn sweep_bytes_do_not_depend_on_jobs() {
    let dir = scratch_dir();
    let spec = write_file(
        &dir,
        "spec.json",
        r#"{"vary":[{"name":"chi","start":0.0,"stop":0.7853981633974483,"steps":9},
                   {"name":"nu1","start":0.2,"stop":1.0,"steps":5}],
            "fixed":{"theta":0.3,"psi_p":1.0},
            "outputs":["negativity","c_p","d2_to_pure"]}"#,
    );
    let mut outputs = Vec::new();
    for jobs in ["1", "7"] {
        let out_path = dir.join(format!("sweep-{jobs}.csv"));
        run_ok({
            let mut c = bin();
            c.arg("sweep")
                .arg("--spec")
                .arg(&spec)
                .arg("--out")
                .arg(&out_path)
                .arg("--jobs")
                .arg(jobs);
            c
        });
        outputs.push(fs::read(&out_path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    // 9 × 5 grid plus header
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 46);
    assert!(text.ends_with('\n'));
}

#[test]
fn verify_single_suite_passes() {
    let out = run_ok({
        let mut c = bin();
        c.arg("verify")
            .arg("--suite")
            .arg("werner-thresholds")
            .arg("--samples")
            .arg("50");
        c
    });
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("werner-thresholds"));
    assert!(text.contains("PASS"));
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = scratch_dir();

    // schema violation: unknown key
    let bad = write_file(&dir, "bad.json", r#"{"bogus": 1.0}"#);
    let out = bin()
        .arg("build")
        .arg("--input")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // out-of-range coordinate
    let oob = write_file(&dir, "oob.json", r#"{"theta": 9.0}"#);
    let out = bin()
        .arg("build")
        .arg("--input")
        .arg(&oob)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // unknown suite name
    let out = bin()
        .arg("verify")
        .arg("--suite")
        .arg("nope")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // missing required argument (clap usage error)
    let out = bin().arg("build").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // nonexistent input file
    let out = bin()
        .arg("measure")
        .arg("--input")
        .arg(dir.join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
