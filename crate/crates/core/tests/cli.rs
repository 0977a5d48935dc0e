use std::path::{Path, PathBuf};

use opradius::cli::{run, EXIT_COMPUTE, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn opradius(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("opradius").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

struct Files {
    _dir: tempfile::TempDir,
    id2: String,
    nilp2: String,
    one: String,
}

fn files() -> Files {
    let dir = tempfile::tempdir().unwrap();
    let s = |p: PathBuf| p.to_str().unwrap().to_string();
    Files {
        id2: s(write(dir.path(), "id2.json", r#"{"n": 2, "re": [[1, 0], [0, 1]]}"#)),
        nilp2: s(write(dir.path(), "nilp2.json", r#"{"n": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0, 0]]}"#)),
        one: s(write(dir.path(), "one.json", r#"{"n": 1, "re": [[1]]}"#)),
        _dir: dir,
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}", r.out))
}

#[test]
fn compute_encloses_the_identity() {
    let f = files();
    let r = opradius(&["compute", "--input", &f.id2, "--quantity", "w"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r);
    let (lo, hi) = (v["lower"].as_f64().unwrap(), v["upper"].as_f64().unwrap());
    assert!(lo <= 1.0 && 1.0 <= hi && hi - lo <= 1e-8);
    assert!(v["witness"]["vector"].is_array());

    let r = opradius(&["compute", "--input", &f.id2, "--quantity", "we", "--input2", &f.id2, "--tol", "1e-9"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r);
    assert!((v["lower"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-8);
}

#[test]
fn bounds_reproduce_the_shift_values() {
    let f = files();
    let r = opradius(&["bounds", "--input", &f.nilp2, "--set", "w_lower_th214,w_upper_aluthge_half"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r);
    let rows = v["bounds"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!((row["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
    assert!(v["references"]["w"]["lower"].as_f64().unwrap() <= 0.5);

    let r = opradius(&["bounds", "--input", &f.nilp2, "--set", "w_lower_th214", "--format", "csv"]);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("w_lower_th214,lower,w,0.5,"));
}

#[test]
fn bounds_over_every_input_kind() {
    let f = files();
    let r = opradius(&["bounds", "--input", &f.id2, "--input2", &f.id2]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r);
    assert_eq!(v["bounds"].as_array().unwrap().len(), 33);
    for key in ["w", "we", "w_offdiag"] {
        assert!(v["references"][key]["upper"].is_f64(), "{key}");
    }

    let r = opradius(&["bounds", "--x", &f.one, "--y", &f.one, "--set", "offdiag_lower_31i,offdiag_upper_psk"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    for row in json(&r)["bounds"].as_array().unwrap() {
        assert!((row["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    // single-matrix input: pair ids are skipped under `all`, refused by name
    let r = opradius(&["bounds", "--input", &f.id2]);
    assert_eq!(r.code, EXIT_OK);
    assert!(!json(&r)["skipped"].as_array().unwrap().is_empty());
    let r = opradius(&["bounds", "--input", &f.id2, "--set", "we_lower_21i"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn usage_errors_exit_two_without_output() {
    let f = files();
    let dir = tempfile::tempdir().unwrap();
    let ragged = write(dir.path(), "ragged.json", r#"{"n": 2, "re": [[1, 0], [0]]}"#);
    let short = write(dir.path(), "short.json", r#"{"n": 2, "re": [[1, 0]]}"#);
    let nan = write(dir.path(), "nan.json", r#"{"n": 1, "re": [[NaN]]}"#);
    let huge = write(dir.path(), "huge.json", r#"{"n": 1, "re": [[1e999]]}"#);
    for bad in [&ragged, &short, &nan, &huge] {
        let r = opradius(&["compute", "--input", bad.to_str().unwrap()]);
        assert_eq!(r.code, EXIT_USAGE, "{}", bad.display());
        assert!(r.out.is_empty());
        assert!(r.err.contains("--input"));
    }
    let cases: &[&[&str]] = &[
        &["compute", "--input", "/nonexistent/m.json"],
        &["compute", "--input", &f.id2, "--tol", "-1"],
        &["compute", "--input", &f.id2, "--quantity", "we"],
        &["compute", "--input", &f.id2, "--input2", &f.one, "--quantity", "we"],
        &["bounds", "--input", &f.id2, "--t", "1.5"],
        &["bounds", "--input", &f.id2, "--r", "0.5"],
        &["bounds", "--input", &f.id2, "--set", "no_such_bound"],
        &["bounds", "--input", &f.id2, "--input2", &f.id2, "--x", &f.id2, "--y", &f.id2],
        &["aluthge", "--input", &f.id2, "--t", "-0.1"],
        &["verify", "--ensemble", "wishart"],
        &["verify", "--trials", "0"],
        &["verify", "--properties", "soundnes"],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let r = opradius(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}: {}", r.err);
        assert!(r.out.is_empty(), "{args:?}");
    }
    let r = opradius(&["bounds", "--input", &f.id2, "--t", "1.5"]);
    assert!(r.err.contains("--t") && r.err.contains("[0, 1]"));
}

#[test]
fn version_and_registry_listing() {
    let r = opradius(&["--version"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains(env!("CARGO_PKG_VERSION")));
    let r = opradius(&["--list-bounds"]);
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 33);
    assert!(rows.iter().all(|e| e["anchor"].is_string() && e["signature"].is_string()));
}

#[test]
fn aluthge_and_offdiag_emit_matrix_json() {
    let f = files();
    let r = opradius(&["aluthge", "--input", &f.nilp2, "--t", "0.5", "--radius"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v = json(&r);
    assert_eq!(v["norm"].as_f64().unwrap(), 0.0);
    assert_eq!(v["matrix"]["n"], 2);
    assert!(v["numerical_radius"]["upper"].as_f64().unwrap() < 1e-12);

    let r = opradius(&["offdiag", "--x", &f.one, "--y", &f.one]);
    assert_eq!(r.code, EXIT_OK);
    let m = opradius::matcore::parse_matrix_json(&r.out).unwrap();
    assert_eq!(m, opradius::CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
    let r = opradius(&["offdiag", "--x", &f.one, "--y", &f.id2]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn verify_is_clean_and_rerun_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = ["verify", "--ensemble", "ginibre", "--dim", "3", "--trials", "50", "--seed", "7"];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    let r = opradius(&with_out);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(json(&r)["violation_count"], 0);
    let report = opradius::harness::parse_report(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.records.len(), 50);

    let small = ["verify", "--ensemble", "nilpotent_shift", "--dim", "2", "--trials", "3", "--threads", "1"];
    let a = opradius(&small);
    let b = opradius(&small);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
}

#[test]
fn computation_errors_exit_one() {
    // a non-normal pair asks for a bound that only applies to normal pairs
    let f = files();
    let r = opradius(&["bounds", "--input", &f.nilp2, "--input2", &f.nilp2, "--set", "we_lower_normal"]);
    assert_eq!(r.code, EXIT_COMPUTE, "{}", r.err);
    assert!(r.out.is_empty());
}
