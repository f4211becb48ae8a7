use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sectorial")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const DIAG: &str = r#"{"n":2,"re":[[1,0],[0,1]],"im":[[1,0],[0,-1]]}"#;
const PSD: &str = r#"{"n":2,"re":[[2,1],[1,2]],"im":[[0,0],[0,0]]}"#;

#[test]
fn angle_of_diagonal_is_quarter_turn() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "d.json", DIAG);
    let o = run(&["angle", "--method", "all", &f]);
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!((v["alpha"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-8, "{line}");
    }
}

#[test]
fn verify_reports_margin_and_exit_code() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "d.json", DIAG);
    let o = run(&["verify", "--kind", "m2", "--s", "1", "--norm", "trace", "--split", "1", &f]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["rhs"].as_f64().unwrap(), 4.0);
    assert!((v["lhs"].as_f64().unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);

    let o = run(&["verify", "--kind", "main", "--split", "1", &f]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 2, "one line per Ky Fan norm");
}

#[test]
fn input_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "d.json", DIAG);
    let bad = write(dir.path(), "bad.json", r#"{"n":2,"re":[[1,0],[0,1]],"im":[[0,0]]}"#);
    let p = write(dir.path(), "p.json", PSD);
    assert_eq!(code(&run(&["verify", "--kind", "bogus", "--split", "1", &d])), 3);
    assert_eq!(code(&run(&["verify", "--split", "1", &d])), 3);
    assert_eq!(code(&run(&["verify", "--kind", "main", "--split", "2", &d])), 3);
    assert_eq!(code(&run(&["angle", &bad])), 3);
    assert_eq!(code(&run(&["angle", "/nonexistent/file.json"])), 3);
    assert_eq!(code(&run(&["verify", "--kind", "lee", "--split", "1", &d])), 3, "lee needs psd input");
    assert_eq!(code(&run(&["verify", "--kind", "lee", "--split", "1", &p])), 0);
    let o = run(&["verify", "--kind", "m2", "--alpha", "0.3", "--split", "1", &d]);
    assert_eq!(code(&o), 3, "angle below the sector angle is refused");
}

#[test]
fn witness_subcommand() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", PSD);
    let d = write(dir.path(), "d.json", DIAG);
    let o = run(&["witness", "--ineq", "block", &p]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 2);
    for ineq in ["im-part", "modulus"] {
        let o = run(&["witness", "--ineq", ineq, "--s", "0.5", &d]);
        assert_eq!(code(&o), 0, "{ineq}");
        assert!(stdout(&o).contains("\"holds\":true"));
    }
    let indefinite = write(dir.path(), "i.json", r#"{"n":2,"re":[[1,2],[2,1]],"im":[[0,0],[0,0]]}"#);
    assert_eq!(code(&run(&["witness", "--ineq", "block", &indefinite])), 3);
}

#[test]
fn curve_has_row_contract_and_reruns_identically() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "d.json", DIAG);
    let out1 = dir.path().join("c1.csv");
    let out2 = dir.path().join("c2.csv");
    for out in [&out1, &out2] {
        let o = run(&["curve", "--split", "1", "--points", "65", "--out", out.to_str().unwrap(), &d]);
        assert_eq!(code(&o), 0);
    }
    let text = fs::read_to_string(&out1).unwrap();
    assert_eq!(text, fs::read_to_string(&out2).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,kind,norm,lhs,rhs,margin"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 65 * 2 + 2);
    assert_eq!(rows.iter().filter(|r| r[0] == "—").count(), 2);

    // With f the identity the main curve is smallest at s = 1.
    let main: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r[1] == "main")
        .map(|r| (r[0].parse().unwrap(), r[4].parse().unwrap()))
        .collect();
    assert!(main.windows(2).all(|w| w[0].0 < w[1].0), "sorted by s");
    let best = main.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert!((best.0 - 1.0).abs() < 1e-12, "{best:?}");
}

#[test]
fn sweep_and_hunt_via_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"trials": 12, "master_seed": 42}"#);
    let outs: Vec<String> = ["1", "3"]
        .iter()
        .map(|w| {
            let out = dir.path().join(format!("s{w}.jsonl"));
            let o = run(&["sweep", "--config", &cfg, "--workers", w, "--out", out.to_str().unwrap()]);
            assert_eq!(code(&o), 0);
            fs::read_to_string(out).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0].lines().count(), 13);

    let o = run(&["hunt", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);

    let unseeded = write(dir.path(), "u.json", r#"{"trials": 12}"#);
    assert_eq!(code(&run(&["sweep", "--config", &unseeded])), 3);
}
