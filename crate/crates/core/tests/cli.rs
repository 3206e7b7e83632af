use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn holext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holext")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn put(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn read_json(p: impl Into<PathBuf>) -> Value {
    serde_json::from_slice(&fs::read(p.into()).unwrap()).unwrap()
}

const DISK: &str = r#"{"shape":"disk","center":[0,0],"radius":1}"#;
const SEGMENT: &str = r#"{"shape":"segment","a":[-1,0],"b":[1,0]}"#;
const GEOMETRIC: &str = r#"{"family":"geometric","lambda":[1,0],"n_max":60}"#;

fn circle_json() -> String {
    let pts: Vec<[f64; 2]> = (0..200)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / 200.0;
            [t.cos(), t.sin()]
        })
        .collect();
    serde_json::to_string(&pts).unwrap()
}

#[test]
fn cap_writes_estimate_manifest_and_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let set = put(dir.path(), "disk.json", DISK);
    let out = path(dir.path(), "cap.json");
    let run = holext(&["cap", "--set", &set, "--n", "64", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let v = read_json(&out);
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 0.1);
    assert_eq!(v["result"]["polar"], false);
    assert_eq!(v["manifest"]["command"], "cap");
    assert_eq!(v["manifest"]["thresholds"]["n"], 64);
    assert_eq!(v["manifest"]["input_digest"].as_str().unwrap().len(), 64);
    let csv = fs::read_to_string(dir.path().join("cap.dn.csv")).unwrap();
    assert!(csv.starts_with("n,d_n\n2,"));
}

#[test]
fn cap_of_a_point_is_polar_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let set = put(dir.path(), "pt.json", r#"{"shape":"cloud","points":[[0.25,0]]}"#);
    let out = path(dir.path(), "cap.json");
    assert_eq!(code(&holext(&["cap", "--set", &set, "--out", &out])), 0);
    let v = read_json(&out);
    assert_eq!(v["result"]["value"], 0.0);
    assert_eq!(v["result"]["polar"], true);
}

#[test]
fn green_values() {
    let dir = tempfile::tempdir().unwrap();
    let disk = put(dir.path(), "disk.json", DISK);
    let seg = put(dir.path(), "seg.json", SEGMENT);
    let pts = put(dir.path(), "pts.csv", "re,im\n2,0\n0.3,0\n");
    let out = path(dir.path(), "g.csv");
    assert_eq!(code(&holext(&["green", "--set", &disk, "--samples", &pts, "--out", &out])), 0);
    let rows: Vec<Vec<f64>> = fs::read_to_string(&out)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!((rows[0][2] - 2f64.ln()).abs() < 1e-12);
    assert_eq!(rows[1][2], 0.0);
    assert!(dir.path().join("g.manifest.json").exists());

    assert_eq!(code(&holext(&["green", "--set", &seg, "--samples", &pts, "--out", &out])), 0);
    let first = fs::read_to_string(&out).unwrap().lines().nth(1).unwrap().to_string();
    let g: f64 = first.split(',').nth(2).unwrap().parse().unwrap();
    assert!((g - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-12);
}

#[test]
fn bernstein_report() {
    let dir = tempfile::tempdir().unwrap();
    let poly = put(dir.path(), "p.json", r#"{"coefficients":[[0,0],[0,0],[0,0],[1,0]]}"#);
    let disk = put(dir.path(), "disk.json", DISK);
    let pts = put(dir.path(), "pts.json", "[[2,0],[0,-3]]");
    let out = path(dir.path(), "b.json");
    let run = holext(&["bernstein", "--poly", &poly, "--set", &disk, "--samples", &pts, "--out", &out]);
    assert_eq!(code(&run), 0);
    let v = read_json(&out);
    assert_eq!(v["result"]["violations"], 0);
    let ratio = v["result"]["checks"][0]["ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 1e-9);
}

#[test]
fn gammacap_line_is_polar_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let region = put(
        dir.path(),
        "line.json",
        r#"{"shape":"product","factors":[{"shape":"disk","center":[0,0],"radius":1},{"shape":"cloud","points":[[0,0]]}]}"#,
    );
    let grid = put(dir.path(), "grid.json", r#"{"fiber_resolution":24,"projected_resolution":16}"#);
    let out = path(dir.path(), "g.json");
    let run = holext(&["gammacap", "--set", &region, "--unitaries", "3", "--seed", "5", "--config", &grid, "--out", &out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let v = read_json(&out);
    assert!(v["result"]["value"].as_f64().unwrap() < 1e-3);
    assert_eq!(v["manifest"]["seed"], 5);
    assert_eq!(v["manifest"]["thresholds"]["grid"]["fiber_resolution"], 24);
}

#[test]
fn extend_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let seq = put(dir.path(), "geo.json", GEOMETRIC);
    let circ = put(dir.path(), "circle.json", &circle_json());
    let cfg = put(dir.path(), "cfg.json", r#"{"theta":0.5,"capacity_n":64}"#);
    let cert = path(dir.path(), "cert.json");
    let run = holext(&["extend", "--seq", &seq, "--samples", &circ, "--config", &cfg, "--z2-max", "500", "--out", &cert]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let v = read_json(&cert);
    assert_eq!(v["result"]["C1"], 1.0);
    assert_eq!(v["result"]["thresholds"]["z2_max"], 500.0);
    assert_eq!(v["result"]["thresholds"]["capacity_n"], 64);
    let boundary = fs::read_to_string(dir.path().join("cert.boundary.csv")).unwrap();
    assert_eq!(boundary.lines().count(), 202);

    let out = path(dir.path(), "e.json");
    let run = holext(&["eval", "--cert", &cert, "--seq", &seq, "--z1", "0.1", "--z2", "2", "--tol", "1e-10", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let e = read_json(&out);
    let re = e["result"]["value"][0].as_f64().unwrap();
    assert!((re - 1.25).abs() < 1e-10);

    let zero = holext(&["eval", "--cert", &cert, "--seq", &seq, "--z1", "0", "--z2", "-1-2i"]);
    assert_eq!(code(&zero), 0);
}

#[test]
fn uniform_flag_and_not_sublinear() {
    let dir = tempfile::tempdir().unwrap();
    let seq = put(dir.path(), "geo.json", GEOMETRIC);
    let sq = put(dir.path(), "sq.json", r#"{"family":"sqrt_degree","n_max":400}"#);
    let circ = put(dir.path(), "circle.json", &circle_json());
    let out = path(dir.path(), "u.json");
    assert_eq!(code(&holext(&["extend", "--uniform", "--seq", &sq, "--samples", &circ, "--out", &out])), 0);
    let v = read_json(&out);
    assert_eq!(v["result"]["exponent"], 0.0);
    assert_eq!(v["result"]["variant"], "uniform");
    assert_eq!(v["manifest"]["thresholds"]["uniform"], true);
    let bad = holext(&["extend", "--uniform", "--seq", &seq, "--samples", &circ]);
    assert_eq!(code(&bad), 3);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("NotSublinear"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = put(dir.path(), "broken.json", "{\"shape\": \"disk\", ");
    let negative = put(dir.path(), "neg.json", r#"{"shape":"disk","center":[0,0],"radius":-1}"#);
    let seq = put(dir.path(), "geo.json", GEOMETRIC);
    let circ = put(dir.path(), "circle.json", &circle_json());
    let bad_cfg = put(dir.path(), "cfg.json", r#"{"theta": 1.5}"#);
    for args in [
        vec!["cap", "--set", &broken],
        vec!["cap", "--set", &negative],
        vec!["cap", "--set", "/nonexistent/set.json"],
        vec!["cap", "--set", &circ, "--n", "3"],
        vec!["extend", "--seq", &seq, "--samples", &circ, "--config", &bad_cfg],
        vec!["extend", "--seq", &circ, "--samples", &circ],
        vec!["cap"],
        vec!["frobnicate"],
    ] {
        let out = holext(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&holext(&["--help"])), 0);
    assert_eq!(code(&holext(&["--version"])), 0);
}
