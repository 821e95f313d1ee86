use std::process::{Command, Output};

use serde_json::Value;

fn mixport(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixport"))
        .args(args)
        .env_remove("MIXPORT_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn teleport_meps_is_exact() {
    let v = json(&mixport(&[
        "teleport",
        "--channel",
        "meps",
        "--input",
        "0.5,0.3,0",
    ]));
    for b in v["branches"].as_array().unwrap() {
        assert!(b["distortion"].as_f64().unwrap() < 1e-24);
    }
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 4);
    assert!((v["total_probability"].as_f64().unwrap() - 1.0).abs() < 1e-14);
}

/// Matrix serialized as rows of `[re, im]` pairs, flattened.
fn entries(m: &Value) -> Vec<f64> {
    m.as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter())
        .flat_map(|z| z.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()))
        .collect()
}

#[test]
fn teleport_rank4_outputs_coincide() {
    let v = json(&mixport(&[
        "teleport",
        "--channel",
        "mems4:p1=0.7",
        "--input",
        "0.5,0.3,0",
    ]));
    let states: Vec<Vec<f64>> = v["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| entries(&o["bob_corrected"]))
        .collect();
    assert_eq!(states[0].len(), 8);
    for s in &states[1..] {
        for (a, b) in states[0].iter().zip(s) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}

#[test]
fn teleport_general_xz_probabilities() {
    let v = json(&mixport(&[
        "teleport",
        "--channel",
        "xz:a=0.4,b=0.1,c=0,d=0.1,e=0.35",
        "--input",
        "1,0,0",
    ]));
    let total: f64 = v["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["probability"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-14);
}

#[test]
fn out_of_range_channel_warns_and_proceeds() {
    let out = mixport(&[
        "teleport",
        "--channel",
        "mems3:p1=0.8",
        "--input",
        "0.5,0.1,0",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn invalid_config_exits_2() {
    for args in [
        &[
            "teleport",
            "--channel",
            "mems2:p1=1.5",
            "--input",
            "0.5,0,0",
        ][..],
        &["teleport", "--channel", "meps", "--input", "0.5,0.6,0"],
        &["teleport", "--channel", "meps"],
        &["sweep", "--channel", "xz:a=0.4,b=0.1,c=0,d=0.1,e=0.35"],
        &["sweep", "--channel", "mems2:p1=0.6", "--params", "0.6,abc"],
    ] {
        assert_eq!(mixport(args).status.code(), Some(2), "{args:?}");
    }
    let bad_seed = Command::new(env!("CARGO_BIN_EXE_mixport"))
        .args(["verify", "--samples", "10"])
        .env("MIXPORT_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(bad_seed.status.code(), Some(2));
}

#[test]
fn io_error_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = mixport(&["figures", "--output", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("file"));
}

#[test]
fn sweep_csv_and_json() {
    let out = mixport(&[
        "sweep",
        "--channel",
        "mems3:p1=0.4",
        "--params",
        "0.35,0.45",
        "--abs-y",
        "0,0.25,0.5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "family,p1_or_r,abs_y,branch,D_pipeline,D_closed_form,abs_err"
    );
    assert_eq!(lines.len(), 1 + 2 * 3 * 4);
    for l in &lines[1..] {
        let err: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < 1e-12);
    }

    let v = json(&mixport(&[
        "sweep",
        "--channel",
        "werner:r=0",
        "--params",
        "0.5",
        "--format",
        "json",
    ]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 6 * 4);
}

#[test]
fn verify_report_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_mixport"))
        .args([
            "verify",
            "--samples",
            "200",
            "--seed",
            "1",
            "--output",
            path.to_str().unwrap(),
        ])
        .env("MIXPORT_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["seed"], 77);
    assert_eq!(v["passed"], true);
    assert!(v["p1_converse_witness"]["min_eigenvalue"].as_f64().unwrap() < 0.0);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("REFUTED P1_converse"));
    assert!(stderr.contains("PASS P3_trace_chain"));

    let v = json(&mixport(&["verify", "--samples", "50", "--seed", "5"]));
    assert_eq!(v["seed"], 5);
}

#[test]
fn figures_are_byte_stable() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(
            mixport(&["figures", "--output", d.path().to_str().unwrap()])
                .status
                .success()
        );
    }
    for n in 1..=5 {
        let name = format!("fig{n}.csv");
        let x = std::fs::read(a.path().join(&name)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(&name)).unwrap());
        assert!(x.starts_with(b"param,abs_y,series,value\n"));
    }
}
