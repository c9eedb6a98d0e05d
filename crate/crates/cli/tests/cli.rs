use std::path::PathBuf;
use std::process::{Command, Output};

use rklab::harness::ScenarioReport;

fn rklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rklab"))
        .args(args)
        .env_remove("RKLAB_MAX_N")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rklab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn failed_verdict_never_exits_zero() {
    let o = rklab(&["scenario", "fe-unstable"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).contains("FAIL"));
    let report = ScenarioReport::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(!report.pass());
    assert!(report.agrees());
}

#[test]
fn cfl_verdicts_map_to_exit_codes() {
    let ok = rklab(&["cfl", "--method", "rk4", "--op", "upwind", "--N", "64", "--a", "1", "--dx", "0.015625", "--dt", "0.02"]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let bad = rklab(&["cfl", "--method", "rk4", "--op", "upwind", "--N", "64", "--dt", "0.1"]);
    assert_eq!(code(&bad), 1, "{}", stderr(&bad));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["region", "--method", "rk9x"],
        vec!["cfl", "--method", "rk4", "--op", "upwind", "--dt", "0"],
        vec!["numrange", "--op", "upwind", "--N", "513"],
        vec!["scenario", "jordan-growth", "--set", "bogus=1"],
        vec!["frobnicate"],
    ] {
        let o = rklab(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn dimension_cap_follows_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_rklab"))
        .args(["numrange", "--op", "jordan", "--N", "20", "--angles", "16"])
        .env("RKLAB_MAX_N", "16")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--N"));
}

#[test]
fn numerical_errors_exit_three_without_output() {
    let out = scratch("degenerate.json");
    let o = rklab(&["crouzeix", "--method", "0,0,0,1", "--op", "jordan", "--N", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn unwritable_output_is_cleaned_up() {
    let out = scratch("missing-dir").join("x.json");
    let o = rklab(&["scenario", "fig1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(!out.exists());
}

#[test]
fn jordan_range_is_a_disc() {
    let o = rklab(&["numrange", "--op", "jordan", "--N", "8", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,support,re_z,im_z"));
    let supports: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(supports.len(), 720);
    let expected = (std::f64::consts::PI / 9.0).cos();
    for s in supports {
        assert!((s - expected).abs() < 1e-9, "{s}");
    }
}

#[test]
fn fig2_writes_two_grids() {
    let out = scratch("fig2.json");
    let o = rklab(&["scenario", "fig2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let report = ScenarioReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.pass());
    for grid in ["fig2_rk3.csv", "fig2_rk4.csv"] {
        let text = std::fs::read_to_string(out.with_file_name(grid)).unwrap();
        assert_eq!(text.lines().count(), 201 * 201 + 1, "{grid}");
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = scratch("sweep_a.json");
    let b = scratch("sweep_b.json");
    for p in [&a, &b] {
        let o = rklab(&["crouzeix", "--seed", "9", "--count", "40", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let args = ["powers", "--method", "rk1", "--op", "jordan", "--q", "0.5", "--N", "64", "--nmax", "128"];
    assert_eq!(rklab(&args).stdout, rklab(&args).stdout);
}

#[test]
fn reports_round_trip() {
    for (name, set) in [("jordan-growth", "n_max=64"), ("ssp-identity", "N=16"), ("crouzeix-sweep", "count=20")] {
        let o = rklab(&["scenario", name, "--set", set]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        let text = String::from_utf8(o.stdout).unwrap();
        let report = ScenarioReport::from_json(&text).unwrap();
        assert_eq!(report.scenario, name);
        assert_eq!(report.to_json().unwrap() + "\n", text);
    }
}

#[test]
fn powers_csv_follows_extension() {
    let out = scratch("powers.csv");
    let o = rklab(&["powers", "--method", "rk1", "--op", "jordan", "--q", "-0.5", "--N", "16", "--nmax", "32", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n,norm\n0,"));
    assert_eq!(text.lines().count(), 34);
}
