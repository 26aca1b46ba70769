use std::fs;
use std::path::PathBuf;

use dquint_cli::run_with;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dquint").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dquint-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    dir
}

#[test]
fn verify_fermat_quadruple() {
    let v = run_json(&["verify", "--d", "-2", "--json", "--", "1", "3", "8", "120"]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 6);
    assert_eq!(v["pairs"][5]["root"], "31");
}

#[test]
fn verify_negative_elements_and_failure() {
    let v = run_json(&["verify", "--d", "-2", "--json", "--", "1", "3", "-1"]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["pairs"][0]["root"], "2");
    assert_eq!(v["pairs"][1]["root"], "0");
    let v = run_json(&["verify", "--d", "-2", "--json", "--", "1", "3", "9"]);
    assert_eq!(v["valid"], false);
    assert!(!v["reasons"].as_array().unwrap().is_empty());
    assert_eq!(run(&["verify", "--d", "2", "--", "1", "3"]).0, 1);
    assert_eq!(run(&["verify", "--d", "-2", "--", "1", "x"]).0, 2);
}

#[test]
fn pell_without_classes() {
    let v = run_json(&["pell", "--D", "6", "--N", "5", "--json"]);
    assert_eq!(v["classes"], Value::Array(vec![]));
    assert_eq!(v["unit"]["u"], "5");
    let (code, out, _) = run(&["pell", "--D", "6", "--N", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("classes: none"));
}

#[test]
fn pell_solutions_match_brute_force() {
    let v = run_json(&["pell", "--D", "6", "--N", "4", "--zmax", "1000", "--json"]);
    let zs: Vec<_> = v["solutions"].as_array().unwrap().iter().map(|s| s["z"].clone()).collect();
    assert_eq!(zs, ["2", "10", "98", "970"].map(Value::from));
    assert_eq!(v["bruteForceAgrees"], true);
    let v = run_json(&["pell", "--D", "6", "--N", "4", "--zmax", "1000", "--classes", "--json"]);
    assert!(v.get("solutions").is_none());
    let v = run_json(&["pell", "--D", "2", "--N", "-1", "--zmax", "100000", "--json"]);
    assert_eq!(v["bruteForceAgrees"], true);
}

#[test]
fn pell_domain_errors() {
    assert_eq!(run(&["pell", "--D", "4", "--N", "5"]).0, 1);
    assert_eq!(run(&["pell", "--D", "6", "--N", "0"]).0, 1);
    assert_eq!(run(&["pell", "--D", "6"]).0, 2);
}

#[test]
fn seq_values() {
    let v = run_json(&["seq", "--family", "d", "--count", "6", "--json"]);
    let vals: Vec<_> = v["values"].as_array().unwrap().iter().map(|e| e["value"].clone()).collect();
    assert_eq!(vals, ["-1", "-3", "-33", "-451", "-6273", "-87363"].map(Value::from));
    let (code, out, _) = run(&["seq", "--family", "c", "--count", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0 0\n1 8\n2 120\n");
    assert_eq!(run(&["seq", "--family", "q", "--count", "3"]).0, 2);
}

#[test]
fn sieve_summary() {
    let v = run_json(&["sieve", "--k", "6", "--max-m", "4", "--json"]);
    assert_eq!(v["patterns"].as_array().unwrap().len(), 8);
    assert_eq!(v["patterns"][0]["residues"].as_array().unwrap().len(), 4);
    assert_eq!(v["elimination"]["survivors"], Value::Array(vec![]));
    assert_eq!(run(&["sieve", "--k", "0"]).0, 1);
}

#[test]
fn bounds_probe() {
    let v = run_json(&["bounds", "--k", "6", "--json"]);
    assert_eq!(v["kMax"], 5);
    assert_eq!(v["gamma"], "36/5");
    assert_eq!(v["lambdaBelowTwo"], true);
    assert_eq!(v["contradiction"], true);
    let five = run_json(&["bounds", "--k", "5", "--json"]);
    assert_eq!(five["contradiction"], false);
}

#[test]
fn bw_constant() {
    let v = run_json(&[
        "bw",
        "--alphas",
        "2+sqrt(3), 5+2*sqrt(6), sqrt(2)",
        "--degree",
        "4",
        "--json",
    ]);
    let c: f64 = v["bakerWustholz"]["C"]["value"].as_str().unwrap().parse().unwrap();
    assert!((1e14..=4e14).contains(&c));
    assert_eq!(v["indexBound"]["rounded"], "10000000000000000");
    let (code, _, err) = run(&["bw", "--alphas", "2+sqrt(3", "--degree", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("byte 8"));
    assert_eq!(run(&["bw", "--alphas", "log(2)", "--degree", "4"]).0, 2);
    assert_eq!(run(&["bw", "--alphas", "2", "--degree", "4"]).0, 1);
}

#[test]
fn reduce_text_problem() {
    let v = run_json(&[
        "reduce",
        "--theta",
        "log(2+1*sqrt(3))/log(5+2*sqrt(6))",
        "--beta",
        "log(sqrt(2))/log(5+2*sqrt(6))",
        "--alpha",
        "1/log(5+2*sqrt(6))",
        "--base",
        "e",
        "--M",
        "10000000000000000",
        "--precision",
        "384",
        "--json",
    ]);
    let traj = v["reduction"]["trajectory"].as_array().unwrap();
    assert_eq!(traj[..3], ["10000000000000000", "38", "7"].map(Value::from));
    assert_eq!(v["reduction"]["rounds"][0]["precision"], 384);
    let (code, _, err) = run(&["reduce", "--theta", "log(", "--beta", "0", "--alpha", "1", "--M", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("--theta"));
    let bad_base = ["reduce", "--theta", "1/3", "--beta", "0", "--alpha", "1", "--base", "1/2", "--M", "10"];
    assert_eq!(run(&bad_base).0, 1);
}

#[test]
fn case_five() {
    let v = run_json(&["case", "--k", "5", "--json"]);
    let labels: Vec<_> = v["hits"].as_array().unwrap().iter().map(|h| h["label"].clone()).collect();
    assert_eq!(
        labels,
        ["y_0^+ = y'_4 = 97", "y_1^- = y'_6 = 1351"].map(Value::from)
    );
    assert_eq!(v["extensions"], v["expected"]);
    assert_eq!(v["extensions"][1], "-6273");
    assert_eq!(v["certified"], true);
    assert_eq!(run(&["case", "--k", "6"]).0, 2);
    assert_eq!(run(&["case", "--k", "1", "--index-bound", "5"]).0, 1);
}

#[test]
fn reproduce_is_deterministic() {
    let (c1, a, _) = run(&["reproduce", "--json"]);
    let (c2, b, _) = run(&["reproduce", "--json"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["kMax"], 5);
    assert_eq!(v["cases"].as_array().unwrap().len(), 6);
    assert_eq!(v["complete"], true);
}

#[test]
fn reproduce_writes_both_reports() {
    let dir = scratch("ok");
    let arg = dir.to_str().unwrap();
    let (code, out, _) = run(&["reproduce", "--out", arg]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# "));
    assert_eq!(fs::read_to_string(dir.join("report.md")).unwrap(), out);
    let json: Value = serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["kMax"], 5);
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn failed_reproduce_writes_nothing() {
    let dir = scratch("fail");
    let arg = dir.to_str().unwrap();
    let (code, out, err) = run(&["reproduce", "--out", arg, "--index-bound", "5"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(!err.is_empty());
    assert!(!dir.exists());
    let (code, _, _) = run(&["reproduce", "--out", arg, "--precision", "8"]);
    assert_eq!(code, 2);
    assert!(!dir.exists());
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

    #[test]
    fn pell_exit_codes(d in -5i64..80, n in -40i64..40) {
        let (ds, ns) = (d.to_string(), n.to_string());
        let (code, out, err) = run(&["pell", "--D", &ds, "--N", &ns, "--zmax", "5000", "--json"]);
        proptest::prop_assert!(code == 0 || code == 1);
        if code == 0 {
            let v: Value = serde_json::from_str(&out).unwrap();
            proptest::prop_assert_eq!(&v["bruteForceAgrees"], &Value::Bool(true));
        } else {
            proptest::prop_assert!(out.is_empty() && !err.is_empty());
        }
    }
}
