use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use motdeg_core::fan::{json as fan_json, LogFan};
use motdeg_core::random::{self, rng, ModelShape};
use motdeg_core::series::{json as series_json, TruncatedSeries};
use motdeg_core::snc::json as snc_json;
use serde_json::{json, Value};

fn motdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motdeg")).args(args).env_remove("MOTDEG_EXAMPLES").output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_motdeg"))
        .args(args)
        .env_remove("MOTDEG_EXAMPLES")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn point(n: i64) -> Value {
    json!([{"symbol": "POINT", "poly": [[0, n]]}])
}

#[test]
fn quartic_volume_feeds_verdict() {
    let vol = motdeg(&["snc", "vol", "examples/quartic_threefold.json"]);
    assert_eq!(vol.status.code(), Some(0));
    let out = ok_json(&with_stdin(&["ring", "verdict", "-"], std::str::from_utf8(&vol.stdout).unwrap()));
    assert_eq!(out["verdict"], "obstructed");
    assert_eq!(out["witness"], json!([{"symbol": "X0", "coeff": 1}]));
    let red = ok_json(&with_stdin(&["ring", "modl", "-"], std::str::from_utf8(&vol.stdout).unwrap()));
    assert_eq!(red["reduction"], json!([{"symbol": "X0", "coeff": 1}]));
}

#[test]
fn mu2_motivic_reduction_is_one() {
    let out = ok_json(&motdeg(&["snc", "mr", "mu2_point"]));
    assert_eq!(out["expr"], point(1));
    let v = ok_json(&motdeg(&["snc", "validate", "mu2_point"]));
    assert_eq!(v["valid"], true);
}

#[test]
fn artin_mumford_semistable_model() {
    let m = ok_json(&motdeg(&["snc", "odp-semistable", "artin_mumford"]));
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "am_model.json", &m);
    assert_eq!(ok_json(&motdeg(&["snc", "validate", &p]))["valid"], true);
    let vol = motdeg(&["snc", "vol", &p]);
    let out = ok_json(&with_stdin(&["ring", "verdict", "-"], std::str::from_utf8(&vol.stdout).unwrap()));
    assert_eq!(out["verdict"], "obstructed");
}

#[test]
fn ring_eval_canonicalizes() {
    let input = json!({"symbols": {}, "expr": {"add": [{"L": 1}, {"sub": [3, {"L": 1}]}]}});
    let out = ok_json(&with_stdin(&["ring", "eval", "-"], &input.to_string()));
    assert_eq!(out["expr"], point(3));
    let v = ok_json(&with_stdin(&["ring", "verdict", "-"], &input.to_string()));
    assert_eq!(v["verdict"], "stably_rational");
    assert_eq!(v["components"], 3);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["snc", "vol", "quartic_threefold"][..],
        &["snc", "dual", "quartic_threefold"],
        &["snc", "odp-semistable", "artin_mumford"],
        &["verify", "--seed", "7", "--iters", "3", "--json"],
    ] {
        let (a, b) = (motdeg(args), motdeg(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_passes_and_reports() {
    let out = ok_json(&motdeg(&["verify", "--seed", "42", "--iters", "5", "--json"]));
    assert_eq!(out["passed"], true);
    assert_eq!(out["suites"].as_array().unwrap().len(), 10);
    let one = ok_json(&motdeg(&["verify", "--suite", "larsen_lunts", "--iters", "20", "--json"]));
    assert_eq!(one["suites"][0]["cases"], 20);
    let text = motdeg(&["verify", "--iters", "2"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("all suites pass"));
    assert_eq!(motdeg(&["verify", "--suite", "nonsense"]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_one() {
    let bad = with_stdin(&["snc", "vol", "-"], "{not json");
    assert_eq!(bad.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(err["error"], "input");
    assert_eq!(motdeg(&["snc", "vol", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(with_stdin(&["series", "morse", "-", "--d", "0"], "{}").status.code(), Some(1));
    assert_eq!(motdeg(&["examples", "nonsense"]).status.code(), Some(1));
}

#[test]
fn invalid_model_exits_one_with_report() {
    let mut m: Value = serde_json::from_str(motdeg_core::datasets::MU2_POINT).unwrap();
    m["pieces"] = json!([]);
    let o = with_stdin(&["snc", "validate", "-"], &m.to_string());
    assert_eq!(o.status.code(), Some(1));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["valid"], false);
    assert!(!rep["violations"].as_array().unwrap().is_empty());
    assert_eq!(with_stdin(&["snc", "vol", "-"], &m.to_string()).status.code(), Some(1));
}

#[test]
fn failed_check_exits_two() {
    // the single cone does not cover gamma
    let p = json!({"gamma": [[1, 0], [0, 1]], "delta": [0], "cones": [[[1, 0], [1, 1]]]});
    let o = with_stdin(&["fan", "check-euler", "-"], &p.to_string());
    assert_eq!(o.status.code(), Some(2));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["covers"], false);
    let q = json!({"gamma": [[1, 0], [0, 1]], "delta": [0], "cones": [[[1, 0], [1, 1]], [[1, 1], [0, 1]]]});
    assert_eq!(ok_json(&with_stdin(&["fan", "check-euler", "-"], &q.to_string()))["holds"], true);
    let quiet = with_stdin(&["--quiet", "fan", "check-euler", "-"], &p.to_string());
    assert_eq!(quiet.status.code(), Some(2));
    assert!(quiet.stdout.is_empty());
}

#[test]
fn fan_commands_on_a_random_model() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(11);
    let (f, plan) = loop {
        let m = random::snc_model(&mut r, ModelShape::default());
        let f = LogFan::from_snc(&m).unwrap();
        if let Some((plan, _)) = random::plan(&mut r, &f, 2) {
            break (f, plan);
        }
    };
    let mut doc = fan_json::fan_to_json(&f);
    doc["plan"] = fan_json::plan_to_json(&plan);
    let p = write(dir.path(), "fan.json", &doc);
    let vol = ok_json(&motdeg(&["fan", "vol", &p]));
    assert_eq!(vol["expr"], motdeg_core::ring::json::element_to_json(&f.vol().unwrap()));
    assert!(ok_json(&motdeg(&["fan", "info", &p])).is_object());
    assert_eq!(ok_json(&motdeg(&["fan", "check-invariance", &p]))["invariant"], true);
    let sub = ok_json(&motdeg(&["fan", "subdivide", &p]));
    let q = write(dir.path(), "sub.json", &sub);
    assert_eq!(ok_json(&motdeg(&["fan", "vol", &q]))["expr"], vol["expr"]);
}

#[test]
fn morse_and_certificate() {
    let z = |i| TruncatedSeries::var(3, 6, i);
    let f = z(0).pow(2).add(&z(1).pow(2)).unwrap().add(&z(0).mul(&z(1)).unwrap().mul(&z(2)).unwrap()).unwrap();
    let s = series_json::series_to_json(&f).to_string();
    let m = ok_json(&with_stdin(&["series", "morse", "-", "--d", "1"], &s));
    assert_eq!(m["residual_zero"], true);
    assert_eq!(m["normal_form"], series_json::series_to_json(&z(0).pow(2).add(&z(1).pow(2)).unwrap()));
    let c = ok_json(&with_stdin(&["series", "certify", "-", "--d", "1"], &s));
    assert_eq!(c["rank"], 2);
    assert_eq!(c["certified"], false);
    // x² + y² - w² + z² in four variables has an isotropic vector
    let w = |i| TruncatedSeries::var(4, 4, i);
    let g = w(0).pow(2).add(&w(1).pow(2)).unwrap().sub(&w(2).pow(2)).unwrap().add(&w(3).pow(2)).unwrap();
    let c = ok_json(&with_stdin(&["series", "certify", "-", "--d", "3"], &series_json::series_to_json(&g).to_string()));
    assert_eq!(c["rank"], 4);
    assert_eq!(c["isotropy"]["found"], true);
}

#[test]
fn datasets_round_trip() {
    for name in motdeg_core::datasets::NAMES {
        let v = ok_json(&motdeg(&["examples", name]));
        let expect: Value = serde_json::from_str(motdeg_core::datasets::bundled(name).unwrap()).unwrap();
        assert_eq!(v, expect);
    }
    let m: Value = serde_json::from_str(motdeg_core::datasets::QUARTIC_THREEFOLD).unwrap();
    let model = snc_json::model_from_json(&m).unwrap();
    let again = snc_json::model_from_json(&snc_json::model_to_json(&model)).unwrap();
    assert_eq!(again, model);
}

#[test]
fn examples_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    let mut m: Value = serde_json::from_str(motdeg_core::datasets::MU2_POINT).unwrap();
    m["metadata"]["name"] = json!("overridden");
    write(dir.path(), "mu2_point.json", &m);
    let o = Command::new(env!("CARGO_BIN_EXE_motdeg")).args(["examples", "mu2_point"]).env("MOTDEG_EXAMPLES", dir.path()).output().unwrap();
    assert_eq!(ok_json(&o)["metadata"]["name"], "overridden");
    let o = Command::new(env!("CARGO_BIN_EXE_motdeg")).args(["examples", "artin_mumford"]).env("MOTDEG_EXAMPLES", dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
