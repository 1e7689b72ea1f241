use std::path::PathBuf;
use std::process::{Command, Output};

use lqg_ri::disclosure::region_classify_raster;
use lqg_ri::WelfareCoeffs;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lqg-ri"))
}

fn scenario(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn solve_lists_three_equilibria() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "inv.toml",
        "preset = \"investment:0.75\"\nlambda = 0.0625\ntau_theta = 0.01\n",
    );
    let o = run(&[
        "solve",
        "--scenario",
        s.to_str().unwrap(),
        "--tau",
        "2.5",
        "--json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 3);
    assert_eq!(v["case"], "(ii-c)");
    let gammas: Vec<f64> = v["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["gamma"].as_f64().unwrap())
        .collect();
    assert_eq!(gammas.len(), 3);
    assert!((gammas[1] - 4.0 / 9.0).abs() < 1e-12 && (gammas[2] - 0.8).abs() < 1e-12);

    let o = run(&["solve", "--scenario", s.to_str().unwrap(), "--tau", "10"]);
    let text = stdout(&o);
    assert!(text.contains("count: 1") && text.contains("NO_ACQUISITION"));
}

#[test]
fn malformed_scenario_exits_two_without_output() {
    let dir = TempDir::new().unwrap();
    let s = scenario(&dir, "bad.toml", "alpha = 0.5\nbeta = 1\nfoo = 2\n");
    let o = run(&["solve", "--scenario", s.to_str().unwrap(), "--tau", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());

    let o = run(&["solve", "--scenario", "/nonexistent/file", "--tau", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let good = scenario(
        &dir,
        "ok.toml",
        "alpha = 0.5\nbeta = 1\nlambda = 1\ntau_theta = 0.1\nzeta = 1\neta = 1\n",
    );
    let o = run(&[
        "welfare",
        "--scenario",
        good.to_str().unwrap(),
        "--from",
        "2",
        "--to",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "welfare",
        "--scenario",
        good.to_str().unwrap(),
        "--from",
        "0",
        "--to",
        "1",
        "--log",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cournot_welfare_increasing() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "c.toml",
        "preset = \"cournot:1\"\nlambda = 1\ntau_theta = 0.01\n",
    );
    let o = run(&[
        "welfare",
        "--scenario",
        s.to_str().unwrap(),
        "--from",
        "0.01",
        "--to",
        "8",
        "--steps",
        "300",
    ]);
    assert!(o.status.success());
    let (h, rows) = csv(&o);
    let w: Vec<f64> = rows
        .iter()
        .map(|r| r[col(&h, "welfare")].parse().unwrap())
        .collect();
    assert!(w.windows(2).all(|x| x[1] > x[0]));
}

#[test]
fn investment_welfare_rises_falls_rises() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "i.toml",
        "preset = \"investment:0.75\"\nlambda = 1\ntau_theta = 0.001\n",
    );
    let o = run(&[
        "sweep",
        "--scenario",
        s.to_str().unwrap(),
        "--report",
        "welfare",
        "--steps",
        "400",
    ]);
    assert!(o.status.success());
    let (h, rows) = csv(&o);
    let (f0, tbar) = (0.125, 1.0 / 6.0);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| {
            (
                r[0].parse().unwrap(),
                r[col(&h, "welfare")].parse().unwrap(),
            )
        })
        .collect();
    for pair in pts.windows(2) {
        let ((t0, w0), (t1, w1)) = (pair[0], pair[1]);
        if t0 == t1 {
            assert!(w1 < w0, "jump at {t0}");
            continue;
        }
        if t1 <= f0 || t0 >= tbar {
            assert!(w1 > w0, "[{t0}, {t1}]");
        } else if t0 >= f0 && t1 < tbar {
            assert!(w1 < w0, "[{t0}, {t1}]");
        }
    }
    // Both one-sided values at the maximum acquisition precision.
    let at_tbar = rows
        .iter()
        .filter(|r| (r[0].parse::<f64>().unwrap() - tbar).abs() < 1e-15)
        .count();
    assert_eq!(at_tbar, 2);
}

#[test]
fn regions_raster_matches_classifier() {
    let o = run(&["regions", "--alpha", "0.25"]);
    assert!(o.status.success());
    let (h, rows) = csv(&o);
    assert_eq!(h, ["zeta", "eta", "harm_possible", "optimal_tag"]);
    assert_eq!(rows.len(), 61 * 61);
    for r in &rows {
        let w = WelfareCoeffs::new(r[0].parse().unwrap(), r[1].parse().unwrap());
        let tags = region_classify_raster(&w, 0.25, 1e-9);
        assert_eq!(r[2], tags.harm_possible.as_str());
        assert_eq!(r[3], tags.optimal.as_str());
    }
}

#[test]
fn optimal_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (
            "preset = \"beauty:0.6\"\nlambda = 1\ntau_theta = 0.01\n",
            "FULL",
        ),
        (
            "preset = \"cournot:1\"\nlambda = 1\ntau_theta = 0.01\n",
            "FULL",
        ),
        (
            "alpha = 0.25\nbeta = 1\nlambda = 1\ntau_theta = 0.01\nzeta = 0.5\neta = 0\n",
            "KNIFE_EDGE",
        ),
    ];
    for (i, (text, tag)) in cases.iter().enumerate() {
        let s = scenario(&dir, &format!("s{i}.toml"), text);
        let o = run(&["optimal", "--scenario", s.to_str().unwrap(), "--json"]);
        assert!(o.status.success());
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["tag"], *tag);
        if *tag == "KNIFE_EDGE" {
            assert_eq!(v["optimum"]["kind"], "interval");
        }
    }
}

#[test]
fn csv_is_deterministic_and_json_agrees() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "b.toml",
        "preset = \"beauty:0.45\"\nlambda = 1\ntau_theta = 0.01\n",
    );
    let args = [
        "info",
        "--scenario",
        s.to_str().unwrap(),
        "--steps",
        "50",
        "--log",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let mut json_args = args.to_vec();
    json_args.push("--json");
    let v: Value = serde_json::from_str(&stdout(&run(&json_args))).unwrap();
    let (_, rows) = csv(&a);
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), jrows.len());
    for (r, j) in rows.iter().zip(jrows) {
        for (cell, jv) in r.iter().zip(j.as_array().unwrap()) {
            match jv {
                Value::Number(n) => assert_eq!(cell.parse::<f64>().unwrap(), n.as_f64().unwrap()),
                Value::String(s) => assert_eq!(cell, s),
                Value::Null => assert_eq!(cell, "NA"),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "c.toml",
        "preset = \"cournot:0.5\"\nlambda = 1\ntau_theta = 0.01\n",
    );
    let out = dir.path().join("w.csv");
    let o = run(&[
        "welfare",
        "--scenario",
        s.to_str().unwrap(),
        "--steps",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(out)
        .unwrap()
        .starts_with("tau,regime,gamma"));
}

#[test]
fn variants_run() {
    let dir = TempDir::new().unwrap();
    let s = scenario(
        &dir,
        "i.toml",
        "preset = \"investment:0.5\"\nlambda = 1\ntau_theta = 0.01\n",
    );
    let p = s.to_str().unwrap();
    let o = run(&["variant", "fisher", "--scenario", p, "--c", "4", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lambda_equiv"], 2.0);

    let o = run(&[
        "variant",
        "rigid",
        "--scenario",
        p,
        "--tau",
        "0.1",
        "--report",
        "gap",
        "--json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["gap"].as_f64().unwrap() < 0.0);

    let o = run(&["variant", "rigid", "--scenario", p, "--report", "gap"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_scopes() {
    let o = run(&["verify", "--scope", "ri"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("36 of 36 checks passed"));

    let args = [
        "verify",
        "--scope",
        "mc",
        "--seed",
        "42",
        "--mc-samples",
        "100000",
        "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["seed"] == 42));

    let o = run(&["verify", "--scope", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
