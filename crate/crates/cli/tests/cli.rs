use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(format!("{name}.json"))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn manin(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_manin")).args(args).output().expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().expect("exit code"),
    }
}

fn json(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).expect("JSON output")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("manin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Compares against a checked-in rendering; `MANIN_BLESS=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("MANIN_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn validate_golden() {
    let su2 = data("su2");
    let run = manin(&["validate", su2.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    check_golden("validate_su2.txt", &run.stdout);
    let run = manin(&["validate", su2.to_str().unwrap(), "--format", "json"]);
    check_golden("validate_su2.json", &run.stdout);
}

#[test]
fn double_golden() {
    let run = manin(&["double", data("su2").to_str().unwrap(), "--complement", "e1^e2:1/2", "--format", "json"]);
    assert_eq!(run.code, 0);
    check_golden("double_su2_twisted.json", &run.stdout);
}

#[test]
fn all_bundled_models_validate() {
    for name in ["su2", "sl2", "nonabelian2", "u1", "t2"] {
        let run = manin(&["validate", data(name).to_str().unwrap(), "--format", "json"]);
        assert_eq!(run.code, 0, "{name}: {}", run.stdout);
        assert_eq!(json(&run)["summary"]["pass"], Value::Bool(true));
    }
}

#[test]
fn corrupted_bracket_reports_a_jacobi_witness() {
    let text = std::fs::read_to_string(data("su2")).unwrap();
    let bad = text.replace(r#"{"i": 1, "j": 2, "k": 3, "value": "1"}"#, r#"{"i": 1, "j": 2, "k": 1, "value": "1"}"#);
    assert_ne!(bad, text);
    let path = scratch("corrupt.json");
    std::fs::write(&path, bad).unwrap();
    let run = manin(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(run.code, 1);
    let doc = json(&run);
    let jacobi = doc["checks"].as_array().unwrap().iter().find(|c| c["id"] == "jacobi").unwrap();
    assert_eq!(jacobi["status"], "fail");
    assert!(jacobi["witness"].as_str().unwrap().contains("(e1,e2,e3)"));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let text = std::fs::read_to_string(data("su2")).unwrap();
    let path = scratch("zero_den.json");
    std::fs::write(&path, text.replacen(r#""value": "1"}"#, r#""value": "1/0"}"#, 1)).unwrap();
    let run = manin(&["validate", path.to_str().unwrap()]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 7, column"), "{}", run.stderr);
    assert!(run.stderr.contains("1/0"));

    let path = scratch("truncated.json");
    std::fs::write(&path, &text[..60]).unwrap();
    let run = manin(&["validate", path.to_str().unwrap()]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("line 5, column"), "{}", run.stderr);

    let run = manin(&["validate", "/nonexistent/file.json"]);
    assert_eq!(run.code, 2);
}

#[test]
fn usage_errors_exit_two() {
    let su2 = data("su2");
    assert_eq!(manin(&["verify", su2.to_str().unwrap(), "--suite", "bogus"]).code, 2);
    assert_eq!(manin(&["verify", su2.to_str().unwrap()]).code, 2);
    assert_eq!(manin(&["eval", su2.to_str().unwrap(), "--at", "exp(0)", "--object", "nonsense"]).code, 2);
    assert_eq!(manin(&["eval", su2.to_str().unwrap(), "--at", "exp(e9)", "--object", "PS"]).code, 2);
    assert_eq!(manin(&["double", su2.to_str().unwrap(), "--complement", "e1^e2"]).code, 2);
    assert_eq!(manin(&["verify", data("nonabelian2").to_str().unwrap(), "--suite", "algebra", "--tol", "0"]).code, 2);
}

#[test]
fn double_needs_a_form() {
    let run = manin(&["double", data("nonabelian2").to_str().unwrap()]);
    assert_eq!(run.code, 1, "{}", run.stderr);
}

#[test]
fn double_round_trips_through_validate() {
    for name in ["su2", "sl2", "u1", "t2"] {
        let out = scratch(&format!("double_{name}.json"));
        let run = manin(&["double", data(name).to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "json"]);
        assert_eq!(run.code, 0, "{name}");
        assert!(json(&run).get("double").is_none());
        let run = manin(&["validate", out.to_str().unwrap(), "--format", "json"]);
        assert_eq!(run.code, 0, "{name}: {}", run.stdout);
        let doc = json(&run);
        assert!(doc["checks"].as_array().unwrap().iter().any(|c| c["id"] == "manin.maximal"));
    }
}

#[test]
fn double_of_circle_is_abelian() {
    let run = manin(&["double", data("u1").to_str().unwrap(), "--format", "json"]);
    let doc = json(&run);
    assert_eq!(doc["derived"]["phi"], "0");
    assert_eq!(doc["derived"]["cobracket"]["e1"], "0");
    assert!(doc["double"]["structure_constants"].as_array().unwrap().is_empty());
}

#[test]
fn verify_suites_are_deterministic() {
    let su2 = data("su2");
    let su2 = su2.to_str().unwrap();
    for args in [
        vec!["verify", su2, "--suite", "algebra", "--format", "json"],
        vec!["verify", su2, "--suite", "group", "--samples", "100", "--seed", "7", "--format", "json"],
        vec!["verify", su2, "--suite", "moment", "--samples", "50", "--format", "json"],
        vec!["eval", su2, "--at", "exp(0.3*e1+0.2*e2)", "--object", "hat:e3", "--format", "json"],
    ] {
        let (a, b) = (manin(&args), manin(&args));
        assert_eq!(a.code, 0, "{args:?}: {}", a.stdout);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        if args[0] == "verify" {
            let doc = json(&a);
            let ids: Vec<String> = doc["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap().to_string()).collect();
            let mut sorted = ids.clone();
            sorted.sort();
            assert_eq!(ids, sorted);
            assert_eq!(doc["input_sha256"].as_str().unwrap().len(), 64);
        }
    }
}

#[test]
fn algebra_suite_residuals_are_exact_zeros() {
    let run = manin(&["verify", data("su2").to_str().unwrap(), "--suite", "algebra", "--format", "json"]);
    for c in json(&run)["checks"].as_array().unwrap() {
        assert_eq!(c["residual"], "0", "{c}");
    }
}

#[test]
fn seeds_change_the_numeric_report() {
    let su2 = data("su2");
    let a = manin(&["verify", su2.to_str().unwrap(), "--suite", "group", "--seed", "1", "--samples", "10", "--format", "json"]);
    let b = manin(&["verify", su2.to_str().unwrap(), "--suite", "group", "--seed", "2", "--samples", "10", "--format", "json"]);
    assert_eq!((a.code, b.code), (0, 0));
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn group_suite_needs_a_representation() {
    let text = std::fs::read_to_string(data("su2")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc.as_object_mut().unwrap().remove("representation");
    let path = scratch("norep.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    assert_eq!(manin(&["verify", path.to_str().unwrap(), "--suite", "group"]).code, 2);
    assert_eq!(manin(&["verify", path.to_str().unwrap(), "--suite", "algebra"]).code, 0);
}

fn eval_value(at: &str, object: &str) -> Run {
    manin(&["eval", data("su2").to_str().unwrap(), "--at", at, "--object", object, "--format", "json"])
}

fn max_abs(v: &Value) -> f64 {
    match v {
        Value::Number(x) => x.as_f64().unwrap().abs(),
        Value::Array(a) => a.iter().map(max_abs).fold(0.0, f64::max),
        Value::Object(o) => o.values().map(max_abs).fold(0.0, f64::max),
        _ => panic!("unexpected value {v}"),
    }
}

#[test]
fn eval_examples() {
    let run = eval_value("exp(0)", "PS");
    assert_eq!(run.code, 0);
    let doc = json(&run);
    assert_eq!(doc["value"].as_array().unwrap().len(), 3);
    assert!(max_abs(&doc["value"]) < 1e-15);

    let run = eval_value("exp(1.5708*e1)", "phiS");
    assert_eq!(run.code, 0);
    assert!(max_abs(&json(&run)["value"]) < 1e-9);

    let run = eval_value("diag-torus(pi/2)", "tau");
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("not admissible"), "{}", run.stderr);

    let run = manin(&[
        "eval", data("su2").to_str().unwrap(), "--at", "exp(0.7*e1)", "--object", "PG", "--complement", "e1^e2:1/2", "--format", "json",
    ]);
    assert_eq!(run.code, 0);
    assert!(max_abs(&json(&run)["value"]) > 1e-3);
}

#[test]
fn eval_accepts_matrices_and_matches_exp() {
    let via_exp = json(&eval_value("exp(pi/2*e3)", "dressing:e1"));
    // exp(θ e3) = diag(e^{−iθ/2}, e^{iθ/2}) in this representation
    let (c, s) = (std::f64::consts::FRAC_PI_4.cos(), std::f64::consts::FRAC_PI_4.sin());
    let m = format!("[[[{c}, {}], 0], [0, [{c}, {s}]]]", -s);
    let via_matrix = json(&eval_value(&m, "dressing:e1"));
    let (a, b) = (via_exp["value"].as_array().unwrap(), via_matrix["value"].as_array().unwrap());
    for (x, y) in a.iter().zip(b) {
        assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-12);
    }
}
