use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ellcot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellcot"))
        .args(args)
        .env_remove("ELLCOT_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const KEYS: [&str; 10] = [
    "identity_id",
    "params",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "tolerance",
    "pass",
    "terms_used",
    "elapsed_ms",
];

#[test]
fn berndt_golden_ratio_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = ellcot(&[
        "verify", "berndt", "--alpha", "1,1,5,2", "--l", "3", "--terms", "100000", "--tol", "1e-8", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("PASS berndt"));

    let text = std::fs::read_to_string(&out).unwrap();
    let pos: Vec<usize> = KEYS.iter().map(|k| text.find(&format!("\"{k}\":")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_object().unwrap().len(), KEYS.len());
    assert_eq!(v["identity_id"], "berndt");
    assert_eq!(v["pass"], 1);
    assert_eq!(v["terms_used"], 100000);
    assert_eq!(v["tolerance"], 1e-8);
    assert_eq!(v["params"]["eps"], "-1");
    assert_eq!(v["lhs"].as_array().unwrap().len(), 2);
    assert!(v["abs_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn wrong_sign_fails_with_exit_one() {
    let o = ellcot(&["verify", "berndt", "--c", "5", "--eps", "1", "--l", "3"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("FAIL"));
}

#[test]
fn domain_and_usage_errors_exit_two() {
    for args in [
        &["verify", "transform", "--matrix", "2,1,1,2"][..],
        &["verify", "cocycle", "--matrix", "0,-1,1,0"],
        &["verify", "reciprocity", "--r", "2/0"],
        &["verify", "hat", "--matrix", "0,1,-1,0"],
        &["verify", "transform", "--charmat", "0.3,0.7,1,0"],
        &["verify", "berndt", "--alpha", "1,2,3"],
        &["verify", "berndt", "--criterion", "loose"],
        &["verify", "suite", "nosuch"],
        &["verify", "suite"],
        &["verify", "bogus"],
        &["--precision", "quad", "verify", "hat"],
    ] {
        let o = ellcot(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn each_identity_passes_at_defaults() {
    for id in ["transform", "cocycle", "reciprocity", "hat", "degeneration"] {
        let o = ellcot(&["verify", id]);
        assert_eq!(code(&o), 0, "{id}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let o = ellcot(&["verify", "degeneration", "--part", "ii", "--mn", "1,1", "--r", "1/2", "--charmat", "0.3,0.5,0.45,0"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn hyphenated_values_parse() {
    let o = ellcot(&["verify", "cocycle", "--matrix", "-1,0,0,-1", "--matrix", "2,1,1,1", "--z", "-0.4,0.5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn extended_precision_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let o = ellcot(&["--precision", "extended", "verify", "reciprocity", "--tol", "1e-20", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = read_json(&out);
    assert_eq!(v["params"]["precision"], "extended");
}

#[test]
fn config_file_sets_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("policy.json");
    let out = dir.path().join("t.json");
    std::fs::write(&cfg, r#"{"max_index": 60}"#).unwrap();
    let o = ellcot(&["--config", cfg.to_str().unwrap(), "verify", "transform", "--out", out.to_str().unwrap()]);
    assert!(code(&o) <= 1);
    assert_eq!(read_json(&out)["params"]["max_index"], "60");

    std::fs::write(&cfg, r#"{"max_index": 0}"#).unwrap();
    assert_eq!(code(&ellcot(&["--config", cfg.to_str().unwrap(), "verify", "hat"])), 2);
    std::fs::write(&cfg, "not json").unwrap();
    assert_eq!(code(&ellcot(&["--config", cfg.to_str().unwrap(), "verify", "hat"])), 2);
}

#[test]
fn suites_write_report_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = ellcot(&["verify", "suite", "reciprocity", "hat", "--count", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = read_json(&out);
    let reps = v.as_array().unwrap();
    assert_eq!(reps.len(), 8);
    assert!(reps.iter().all(|r| r["pass"] == 1));

    let o = ellcot(&["verify", "suite", "negative"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("12/12"));
}

#[test]
fn suite_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = ellcot(&["verify", "suite", "cocycle", "--count", "5", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert!(code(&o) <= 1);
        let mut v = read_json(&p);
        for r in v.as_array_mut().unwrap() {
            r["elapsed_ms"] = Value::from(0);
        }
        v
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn berndt_table_formats() {
    let o = ellcot(&["table", "berndt", "--terms", "20000"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rows.headers().unwrap().iter().collect::<Vec<_>>(),
        ["c", "l", "s", "alpha", "eps", "closed_form", "series", "abs_difference"]
    );
    let recs: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 9);
    for r in &recs {
        let l: u32 = r[1].parse().unwrap();
        let diff: f64 = r[7].parse().unwrap();
        assert!(diff < if l == 2 { 1e-7 } else { 1e-12 }, "{r:?}");
    }

    let o = ellcot(&["table", "berndt", "--c", "13", "--l", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["c"], 13);
    assert_eq!(v[0]["s"], 5);
}
