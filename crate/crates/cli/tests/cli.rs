//! The `wlc` binary end to end: exit codes, report contents and config files.

use std::process::{Command, Output};

use serde_json::Value;

fn wlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wlc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn check_most_special_passes() {
    let out = wlc(&[
        "check",
        "--group",
        "poincare-most-special",
        "--family",
        "poincare-most-special",
        "--param",
        "g=2",
        "--samples",
        "200",
        "--seed",
        "42",
        "--tol",
        "1e-9",
    ]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["pairs"].as_array().unwrap().len(), 28);
    assert_eq!(r["samples"], 200);
    assert_eq!(r["config"]["seed"], 42);
    assert!(r["wall_time_s"].is_number());
}

#[test]
fn check_linear_drag_fails_on_a_galilean_boost() {
    let out = wlc(&["check", "--group", "full-galilei", "--law", "A=(v1,v2,v3)"]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert_eq!(r["verdict"], "fail");
    let source = r["witness"]["source"].as_str().unwrap();
    assert!(source.contains('G'), "{source}");
    assert!(r["witness"]["value"].as_f64().unwrap() >= 1e-3);
}

#[test]
fn check_free_law_under_poincare() {
    assert_eq!(code(&wlc(&["check", "--group", "full-poincare", "--family", "free"])), 0);
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["check", "--group", "no-such-group", "--family", "free"],
        &["check", "--group", "galilei-very-special", "--family", "free"],
        &["check", "--group", "full-galilei", "--law", "A=(v1+,0,0)"],
        &["check", "--group", "full-galilei"],
        &["check", "--group", "full-galilei", "--family", "galilei-static"],
        &["check", "--group", "full-galilei", "--law", "A=(0,0,0)", "--law2", "A1=(0,0,0);A2=(0,0,0)"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = wlc(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn parse_errors_name_the_column() {
    let out = wlc(&["check", "--group", "full-galilei", "--law", "A=(v1+,0,0)"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column 7"), "{err}");
}

#[test]
fn conditions_of_the_free_law_vanish() {
    let out = wlc(&["conditions", "--law", "A=(0,0,0)"]);
    assert_eq!(code(&out), 0);
    let c = &json(&out)["conditions"];
    for k in ["I", "II", "IIIG", "IIIP"] {
        assert_eq!(c[k].as_f64().unwrap(), 0.0, "{k}");
    }
}

#[test]
fn conditions_of_linear_drag() {
    let out = wlc(&["conditions", "--law", "A=(v1,v2,v3)"]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert_eq!(r["conditions"]["I"].as_f64().unwrap(), 0.0);
    assert_eq!(r["conditions"]["II"].as_f64().unwrap(), 0.0);
    assert!((r["conditions"]["IIIG"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["witness"]["source"], "IIIG");
}

#[test]
fn conditions_of_a_two_particle_instance() {
    let out = wlc(&[
        "conditions",
        "--family",
        "galilei-two-particle",
        "--profile",
        "f1(u1,u2,u3)=u1+u3",
        "--profile",
        "f2(u1,u2,u3)=sin(u2)",
        "--profile",
        "g1(u1,u2,u3)=1",
        "--profile",
        "g2(u1,u2,u3)=u1*u3",
    ]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    for k in ["I", "II", "IIIG"] {
        assert!(r["conditions"][k].as_f64().unwrap() <= 1e-9, "{k}");
    }
    assert!(r["conditions"]["IIIP"].as_f64().unwrap() > 1e-3);
    assert_eq!(r["required_conditions"], serde_json::json!(["I", "II", "IIIG"]));
}

#[test]
fn covariance_examples() {
    let out = wlc(&["covariance", "--family", "free", "--element", "lorentz:axis=1,u=0.6"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["residual"].as_f64().unwrap() <= 1e-9);

    let out = wlc(&[
        "covariance",
        "--family",
        "galilei-two-particle",
        "--profile",
        "f1(u1,u2,u3)=-0.2",
        "--profile",
        "f2(u1,u2,u3)=0.1*u2",
        "--profile",
        "g1(u1,u2,u3)=-1",
        "--profile",
        "g2(u1,u2,u3)=1+0.1*u1",
        "--element",
        "galilean:u=0.3,0,0",
    ]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["residual"].as_f64().unwrap() <= 1e-4);

    let out =
        wlc(&["covariance", "--family", "galilei-static", "--profile", "f(u)=-1", "--element", "galilean:u=0.3,0,0"]);
    assert_eq!(code(&out), 1);
    let r = json(&out);
    assert!(r["residual"].as_f64().unwrap() >= 1e-2);
    assert_eq!(r["verdict"], "fail");
}

#[test]
fn covariance_bad_element() {
    let out = wlc(&["covariance", "--family", "free", "--element", "lorentz:axis=1,u=1.2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn catalog_lists_dimensions() {
    let out = wlc(&["catalog", "--json"]);
    assert_eq!(code(&out), 0);
    let entries = json(&out);
    let dim =
        |key: &str| entries.as_array().unwrap().iter().find(|e| e["key"] == key).unwrap()["dim"].as_u64().unwrap();
    assert_eq!(dim("full-poincare"), 10);
    assert_eq!(dim("poincare-most-special"), 8);
    assert_eq!(dim("galilei-very-special"), 7);
    let text = String::from_utf8(wlc(&["catalog"]).stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains("beta*G1+J2"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("wlc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "group = \"full-galilei\"\nlaw = \"A=(0,0,0)\"\nsamples = 30\nseed = 7\n").unwrap();
    let out = wlc(&["check", "--config", cfg.to_str().unwrap(), "--samples", "12"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["samples"], 12);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["config"]["law"], "A=(0,0,0)");

    std::fs::write(&cfg, "group = \"full-galilei\"\nbogus = 1\n").unwrap();
    assert_eq!(code(&wlc(&["check", "--config", cfg.to_str().unwrap(), "--family", "free"])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_file_and_no_timing() {
    let path = std::env::temp_dir().join(format!("wlc-out-{}.json", std::process::id()));
    let out = wlc(&[
        "check",
        "--group",
        "full-galilei",
        "--family",
        "free",
        "--no-timing",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(r["wall_time_s"].is_null());
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn integrate_writes_csv() {
    let out =
        wlc(&["integrate", "--law", "A=(0,0,-9.8)", "--x0", "0,0,0", "--v0", "1,0,0", "--t-end", "1", "--dt", "0.01"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x1@1,x2@1,x3@1,v1@1,v2@1,v3@1");
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[0] - 1.0).abs() < 1e-12);
    assert!((last[1] - 1.0).abs() < 1e-12);
    assert!((last[3] + 4.9).abs() < 1e-10);
}
