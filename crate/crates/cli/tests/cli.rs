use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn g2geom(args: &[&str], env: &[(&str, &Path)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_g2geom"));
    cmd.args(args).env_remove("G2GEOM_CONFIG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn poly(terms: &[(&[u32], &str)]) -> String {
    let t: Vec<String> = terms
        .iter()
        .map(|(pow, c)| format!(r#"{{"pow": {pow:?}, "coeff": "{c}"}}"#))
        .collect();
    format!(r#"{{"poly": {{"terms": [{}]}}}}"#, t.join(", "))
}

fn coassoc_semiflat(b0: &str, b3: &str) -> String {
    let z = poly(&[]);
    format!(
        r#"{{"kind": "coassoc-semiflat", "graph": [{b0}, {b3}], "base_connection": [{z}, {z}], "fiber_connection": [{z}, {z}]}}"#
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_selected_suite_passes() {
    let r = g2geom(&["verify", "--suite", "g2-identities,decompositions", "--samples", "3"], &[]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("PASS  g2-identities/hodge-omega"));
    assert!(!r.stdout.contains("FAIL"));
}

#[test]
fn verify_fault_from_env_config_fails_hodge_check() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"suites": ["g2-identities"], "samples": 2, "fault": {"flip_omega_term": 4}}"#);
    let r = g2geom(&["verify", "--json"], &[("G2GEOM_CONFIG", &cfg)]);
    assert_eq!(r.code, 1);
    let rep = r.json();
    assert_eq!(rep["passed"], false);
    let hodge = rep["checks"].as_array().unwrap().iter().find(|c| c["id"] == "g2-identities/hodge-omega").unwrap();
    assert_eq!(hodge["status"], "fail");
}

#[test]
fn verify_empty_suite_list_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"suites": []}"#);
    let r = g2geom(&["verify", "--config", s(&cfg), "--json"], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["summary"]["total"], 0);
}

#[test]
fn verify_rejects_bad_configuration() {
    for args in [
        &["verify", "--suite", "nope"][..],
        &["verify", "--tol-abs", "-1"],
        &["verify", "--grid", "4"],
        &["verify", "--samples", "0"],
        &["verify", "--bogus"],
    ] {
        let r = g2geom(args, &[]);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
    }
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"suites": ["fourier"], "tolerance": 1}"#);
    assert_eq!(g2geom(&["verify", "--config", s(&cfg)], &[]).code, 2);
}

#[test]
fn verify_report_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let r = g2geom(&["verify", "--suite", "fourier,yukawa", "--seed", "5", "--samples", "4", "--report", s(p)], &[]);
        assert_eq!(r.code, 0, "{}", r.stdout);
    }
    // identical apart from the echoed output path
    let load = |p: &Path| {
        let text = fs::read_to_string(p).unwrap();
        let mut v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["config"]["report"], s(p));
        v["config"]["report"] = Value::Null;
        (text.replace(s(p), ""), v)
    };
    let ((ta, va), (tb, vb)) = (load(&a), load(&b));
    assert_eq!(ta, tb);
    assert_eq!(va, vb);
    assert_eq!(va["config"]["seed"], 5);
}

#[test]
fn transform_semiflat_example() {
    let dir = TempDir::new().unwrap();
    let b0 = poly(&[(&[1], "1")]);
    let b3 = poly(&[(&[0, 1], "1")]);
    let input = write(&dir, "in.json", &coassoc_semiflat(&b0, &b3));
    let out = dir.path().join("out.json");
    let r = g2geom(&["transform", "--fibration", "coassociative-t4", "--input", s(&input), "--output", s(&out)], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let o = &v["output"];
    assert_eq!(o["kind"], "coassoc-semiflat");
    assert_eq!(o["layout"], "dual");
    // the graph is now the old fiber connection (zero) and vice versa
    assert_eq!(o["graph"][0]["poly"]["terms"].as_array().unwrap().len(), 0);
    let expected: Value = serde_json::from_str(&b0).unwrap();
    assert_eq!(o["fiber_connection"][0], expected);
    for side in ["input", "output"] {
        for (k, x) in v["residuals"][side].as_object().unwrap() {
            assert_eq!(x.as_f64().unwrap(), 0.0, "{side} {k}");
        }
    }
    // transforming the output returns the input
    let back_in = write(&dir, "back.json", &serde_json::to_string(o).unwrap());
    let r = g2geom(&["transform", "--fibration", "coassociative-t4", "--input", s(&back_in)], &[]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["output"]["layout"], "primal");
    assert_eq!(r.json()["output"]["fiber_connection"][0]["poly"]["terms"].as_array().unwrap().len(), 0);
}

#[test]
fn transform_torus_point_gives_dual_connection() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "p.json",
        r#"{"kind": "torus-point", "coords": ["1/2", "1/3", "0", "5/4"], "lattice": ["1", "2", "1", "1"]}"#,
    );
    let r = g2geom(&["transform", "--fibration", "coassociative-t4", "--input", s(&input)], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let o = &r.json()["output"];
    assert_eq!(o["kind"], "flat-connection");
    assert_eq!(o["angles"], serde_json::json!(["1/2", "1/6", "0", "1/4"]));
    assert_eq!(o["lattice"], serde_json::json!(["1", "1/2", "1", "1"]));
}

#[test]
fn transform_section_gives_connection_on_w() {
    let dir = TempDir::new().unwrap();
    let z = poly(&[]);
    // f = t(x1 i + x2 j + x3 k) is not a solution for t = 1
    let (x1, x2, x3) = (poly(&[(&[1], "1")]), poly(&[(&[0, 1], "1")]), poly(&[(&[0, 0, 1], "1")]));
    let text = format!(
        r#"{{"kind": "assoc-section", "components": [{z}, {x1}, {x2}, {x3}], "connection": [{z}, {z}, {z}]}}"#
    );
    let input = write(&dir, "s.json", &text);
    let r = g2geom(&["transform", "--fibration", "coassociative-t4", "--input", s(&input)], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["output"]["kind"], "connection-on-w");
    assert_eq!(v["output"]["coefficients"].as_array().unwrap().len(), 7);
    assert!(v["residuals"]["input"]["section"].as_f64().unwrap() > 0.0);
    assert!(v["residuals"]["output"]["deformed-dt"].as_f64().unwrap() > 0.0);
    // wrong fibration for this kind
    let r = g2geom(&["transform", "--fibration", "associative-t3", "--input", s(&input)], &[]);
    assert_eq!(r.code, 2);
}

#[test]
fn transform_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{ not json");
    let r = g2geom(&["transform", "--fibration", "coassociative-t4", "--input", s(&bad)], &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("error"));
    // depends on the fiber coordinate y0, so not semi-flat
    let fiber = coassoc_semiflat(&poly(&[(&[0, 0, 0, 1], "1")]), &poly(&[]));
    let nsf = write(&dir, "nsf.json", &fiber);
    assert_eq!(g2geom(&["transform", "--fibration", "coassociative-t4", "--input", s(&nsf)], &[]).code, 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(g2geom(&["transform", "--fibration", "coassociative-t4", "--input", s(&missing)], &[]).code, 2);
}

#[test]
fn residual_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "g.json", &coassoc_semiflat(&poly(&[(&[1], "1")]), &poly(&[(&[0, 1], "1")])));
    let r = g2geom(&["residual", "--kind", "coassoc-semiflat", "--input", s(&good)], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["vanishes"], true);

    let bad = write(&dir, "b.json", &coassoc_semiflat(&poly(&[(&[0, 1], "1")]), &poly(&[])));
    let r = g2geom(&["residual", "--kind", "coassoc-semiflat", "--input", s(&bad)], &[]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["residuals"]["coassociativity"], 1.0);

    let r = g2geom(&["residual", "--kind", "assoc-section", "--input", s(&good)], &[]);
    assert_eq!(r.code, 2);
}

#[test]
fn residual_fills_in_missing_kind() {
    let dir = TempDir::new().unwrap();
    let z = poly(&[]);
    let text = format!(r#"{{"components": [{z}, {z}, {z}], "connection": [{z}, {z}, {z}, {z}]}}"#);
    let p = write(&dir, "c.json", &text);
    let r = g2geom(&["residual", "--kind", "coassoc-section", "--input", s(&p)], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn decompose_dx123() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "f.json", r#"{"frame": "g2", "degree": 3, "terms": [{"idx": [0, 1, 2], "coeff": "1"}]}"#);
    let r = g2geom(&["decompose", "--space", "g2", "--degree", "3", "--input", s(&p)], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["dims"], serde_json::json!([1, 7, 27]));
    let one = &v["components"][0];
    assert_eq!(one["label"], "1");
    let terms = one["form"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 7);
    assert!(terms.iter().any(|t| t["idx"] == serde_json::json!([0, 1, 2]) && t["coeff"] == "1/7"));

    assert_eq!(g2geom(&["decompose", "--space", "g2", "--degree", "2", "--input", s(&p)], &[]).code, 2);
    assert_eq!(g2geom(&["decompose", "--space", "spin7", "--degree", "3", "--input", s(&p)], &[]).code, 2);
}

#[test]
fn decompose_spin7_theta() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "f.json", r#"{"frame": "spin7", "degree": 2, "terms": [{"idx": [0, 1], "coeff": "1"}]}"#);
    let r = g2geom(&["decompose", "--space", "spin7", "--degree", "2", "--input", s(&p)], &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["dims"], serde_json::json!([7, 21]));
}
