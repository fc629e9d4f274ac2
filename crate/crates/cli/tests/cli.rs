use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

const SHEAR: &str = "[[1, 1], [0, 1]]";

struct Run {
    code: i32,
    report: Value,
    stdout: String,
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sphere-distal"));
    c.env_remove("SPHERE_DISTAL_CONFIG");
    c
}

fn run_with(mut cmd: Command, args: &[&str]) -> Run {
    let out = cmd.args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().expect("exit code"), report, stdout }
}

fn run(args: &[&str]) -> Run {
    run_with(bin(), args)
}

fn file(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rotation(theta: f64) -> String {
    let (sn, c) = theta.sin_cos();
    json!({"dim": 2, "rows": [[c, -sn], [sn, c]]}).to_string()
}

#[test]
fn classify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let r = run(&["classify", s(&file(&dir, "shear.json", SHEAR))]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["payload"]["verdict"], "NotDistal");
    assert_eq!(r.report["payload"]["certificate"]["kind"], "ProximalPair");

    let r = run(&["classify", s(&file(&dir, "rot.json", &rotation(1.0)))]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["payload"]["verdict"], "Distal");

    let near = file(&dir, "near.json", "[[1.000000001, 0], [0, 0.999999999]]");
    let r = run(&["classify", s(&near)]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["payload"]["verdict"], "Inconclusive");

    let r = run(&["classify", s(&file(&dir, "sing.json", "[[1, 2], [2, 4]]"))]);
    assert_eq!(r.code, 65);
    assert_eq!(r.report["payload"]["error"]["kind"], "SingularMatrix");

    assert_eq!(run(&["classify", s(&file(&dir, "bad.json", "[[1, 2], [3"))]).code, 64);
    assert_eq!(run(&["classify", s(&file(&dir, "ragged.json", "[[1, 2], [3]]"))]).code, 64);
    assert_eq!(run(&["classify", s(&dir.path().join("missing.json"))]).code, 74);
}

#[test]
fn fixed_point_examples() {
    let dir = TempDir::new().unwrap();
    let diag = file(&dir, "diag.json", "[[2, 0], [0, 0.5]]");
    let r = run(&["fixed-point", s(&diag), "--a", "0,0.2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["payload"]["type"], "Fixed");
    assert_eq!(r.report["payload"]["point"], json!([0.0, 1.0]));

    let rot = file(&dir, "rot.json", &rotation(std::f64::consts::FRAC_PI_3));
    let r = run(&["fixed-point", s(&rot), "--a", "0.5,0"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report["payload"]["error"]["kind"], "HypothesisNotMet");

    // |T^-1 a| = 1
    let r = run(&["fixed-point", s(&diag), "--a", "0,0.5"]);
    assert_eq!(r.code, 66);

    let minus = file(&dir, "minus.json", "[[-1, 0], [0, -1]]");
    let r = run(&["fixed-point", s(&minus), "--a", "-0.3,0.4"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["payload"]["type"], "Periodic");
    assert_eq!(r.report["payload"]["partners"], json!([1, 0, 3, 2]));

    let r = run(&["fixed-point", s(&diag), "--a", "30deg,0"]);
    assert_eq!(r.code, 64);
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("step,x1,x2"));
    lines.map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn orbit_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let shear = file(&dir, "shear.json", SHEAR);
    let csv = dir.path().join("orbit.csv");
    let svg = dir.path().join("orbit.svg");
    let r = run(&["orbit", s(&shear), "--x", "0,1", "--steps", "50", "--csv", s(&csv), "--svg", s(&svg)]);
    assert_eq!(r.code, 0);
    let rows = csv_rows(&fs::read_to_string(&csv).unwrap());
    assert_eq!(rows.len(), 51);
    for (n, row) in rows.iter().enumerate() {
        let n = n as f64;
        let h = (n * n + 1.0).sqrt();
        assert!((row[0] - n / h).abs() < 1e-12 && (row[1] - 1.0 / h).abs() < 1e-12);
    }
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0] && w[1][1] < w[0][1]));
    let picture = fs::read_to_string(&svg).unwrap();
    assert!(picture.starts_with("<svg") && picture.contains("<polyline"));

    let rot = file(&dir, "rot8.json", &rotation(std::f64::consts::PI / 4.0));
    let r = run(&["orbit", s(&rot), "--x", "0.6,0.8", "--steps", "8"]);
    let rows = csv_rows(r.report["payload"]["csv"].as_str().unwrap());
    assert_eq!(rows.len(), 9);
    assert!((rows[8][0] - rows[0][0]).abs() < 1e-9 && (rows[8][1] - rows[0][1]).abs() < 1e-9);

    let r = run(&["orbit", s(&rot), "--x", "1,0", "--steps", "0"]);
    assert_eq!(r.report["payload"]["csv"].as_str().unwrap().lines().count(), 2);

    let three = file(&dir, "rot3.json", "[[0, -1, 0], [1, 0, 0], [0, 0, 1]]");
    let svg3 = dir.path().join("orbit3.svg");
    let r = run(&[
        "orbit",
        s(&three),
        "--a",
        "0,0,0.5",
        "--x",
        "1,0,-1",
        "--steps",
        "20",
        "--svg",
        s(&svg3),
        "--axis",
        "y",
    ]);
    assert_eq!(r.code, 0);
    assert!(fs::read_to_string(&svg3).unwrap().contains("<polyline"));

    let r = run(&["orbit", s(&shear), "--a", "3,0", "--x", "1,0"]);
    assert_eq!(r.code, 66);
}

#[test]
fn semigroup_examples() {
    let dir = TempDir::new().unwrap();
    let rots = json!({"generators": [serde_json::from_str::<Value>(&rotation(1.0)).unwrap(),
                                     serde_json::from_str::<Value>(&rotation(2f64.sqrt())).unwrap()]});
    let r = run(&["semigroup", s(&file(&dir, "rots.json", &rots.to_string()))]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["payload"]["certificate"]["kind"], "BudgetExhausted");

    let mixed = json!({"generators": [serde_json::from_str::<Value>(&rotation(0.7)).unwrap(),
                                      {"dim": 2, "rows": [[1.0, 1.0], [0.0, 1.0]]}]});
    let r = run(&["semigroup", s(&file(&dir, "mixed.json", &mixed.to_string()))]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["payload"]["certificate"]["kind"], "ProximalPair");
    assert_eq!(r.report["payload"]["certificate"]["word"], json!([1]));

    let r = run(&["semigroup", s(&file(&dir, "empty.json", r#"{"generators": []}"#))]);
    assert_eq!(r.code, 64);
    let r = run(&["semigroup", s(&file(&dir, "extra.json", r#"{"generators": [], "colour": 1}"#))]);
    assert_eq!(r.code, 64);
}

#[test]
fn witnesses_and_inverse_images() {
    let dir = TempDir::new().unwrap();
    let r = run(&["witness", s(&file(&dir, "rot.json", &rotation(0.5)))]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["payload"]["witness"]["case"], "ComplexIsometry");

    let three = file(&dir, "rot3.json", "[[0.6, -0.8, 0], [0.8, 0.6, 0], [0, 0, 1]]");
    let r = run(&["witness", s(&three)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["payload"]["dimension"], 3);
    assert!(r.report["payload"]["witness"]["min_separation"].as_f64().unwrap() < 1e-3);

    let r = run(&["witness", s(&file(&dir, "skew.json", "[[2, 0, 0], [0, 1, 0], [0, 0, 1]]"))]);
    assert_eq!(r.code, 3);
    let r = run(&["witness", s(&file(&dir, "four.json", "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]"))]);
    assert_eq!(r.code, 3);

    let t = file(&dir, "t.json", "[[2, 1], [0, 1]]");
    let r = run(&["inverse-image", s(&t), "--a", "0.3,-0.2", "--y", "0,1"]);
    assert_eq!(r.code, 0);
    assert!(r.report["payload"]["forward_residual"].as_f64().unwrap() < 1e-12);
    let r = run(&["inverse-image", s(&t), "--a", "5,0", "--y", "0,1"]);
    assert_eq!(r.code, 66);
}

#[test]
fn reports_replay_bit_identically() {
    let dir = TempDir::new().unwrap();
    let shear = file(&dir, "shear.json", SHEAR);
    let first = run(&["--seed", "7", "--tol-spectral", "1e-8", "classify", s(&shear)]);
    let second = run(&["--seed", "7", "--tol-spectral", "1e-8", "classify", s(&shear)]);
    assert_eq!(first.report["config"]["seed"], 7);
    assert_eq!(first.report["config"]["tolerances"]["spectral"], 1e-8);
    assert_eq!(first.report["command"], json!(["--seed", "7", "--tol-spectral", "1e-8", "classify", s(&shear)]));
    let payload = |r: &Run| serde_json::to_string(&r.report["payload"]).unwrap();
    assert_eq!(payload(&first), payload(&second));

    // the echoed configuration alone reproduces the run
    let cfg = file(&dir, "cfg.json", &first.report["config"].to_string());
    let third = run(&["--config", s(&cfg), "classify", s(&shear)]);
    assert_eq!(payload(&third), payload(&first));
    let mut env = bin();
    env.env("SPHERE_DISTAL_CONFIG", &cfg);
    let fourth = run_with(env, &["classify", s(&shear)]);
    assert_eq!(fourth.report["config"], first.report["config"]);
    assert_eq!(payload(&fourth), payload(&first));

    let spec =
        file(&dir, "spec.json", &json!({"generators": [{"dim": 2, "rows": [[1.5, 0.3], [0.2, 0.7]]}]}).to_string());
    let a = run(&["semigroup", s(&spec)]);
    let b = run(&["semigroup", s(&spec)]);
    assert_eq!(payload(&a), payload(&b));
}

#[test]
fn configuration_errors() {
    let dir = TempDir::new().unwrap();
    let shear = file(&dir, "shear.json", SHEAR);
    let bad = file(&dir, "cfg.json", r#"{"oracle": {"eps": 0.5, "delta": 0.3}}"#);
    assert_eq!(run(&["--config", s(&bad), "classify", s(&shear)]).code, 64);
    let unknown = file(&dir, "cfg2.json", r#"{"tolerance": {}}"#);
    assert_eq!(run(&["--config", s(&unknown), "classify", s(&shear)]).code, 64);
    assert_eq!(run(&["--tol-rank", "-1", "classify", s(&shear)]).code, 64);
    assert_eq!(run(&["frobnicate"]).code, 64);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("classify"));
}
