use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    root().join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_analogy"))
        .args(args)
        .current_dir(root())
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn ap_check_and_solve() {
    let o = run(&["ap", "check", "0", "0", "1", "1"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));
    let o = run(&["ap", "check", "0", "1", "1", "0"]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = run(&["ap", "check", "--ip", "0", "1", "1", "0"]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = run(&["ap", "solve", "0", "1", "1"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(3), "NO-SOLUTION"));
    let o = run(&["ap", "solve", "g", "g", "h"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "h"));
}

#[test]
fn ap_tuples_and_json() {
    let v = json(&["ap", "solve", "sit_1,yes,coffee", "sit_1,no,coffee", "sit_2,yes,coffee"]);
    assert_eq!(v["solution"], "sit_2,no,coffee");
    let o = run(&["--format", "json", "ap", "solve", "a", "b", "c"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["solution"].is_null());
}

#[test]
fn ap_usage_errors() {
    assert_eq!(run(&["ap", "check", "0", "0", "1"]).status.code(), Some(1));
    assert_eq!(run(&["ap", "solve", "0,1", "0", "1"]).status.code(), Some(1));
    assert_eq!(run(&["ap", "check", "--ip", "a", "a", "b", "b"]).status.code(), Some(1));
    assert_eq!(
        run(&["ap", "solve", "--domain", "g,h", "g", "g", "k"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn knn_on_its_own_training_set_is_perfect() {
    let m = data("monks-2.csv");
    let v = json(&["evaluate", "--data", &m, "--strategy", "knn", "--k", "1", "--test", &m]);
    assert_eq!(v["split"]["accuracy"], 1.0);
    assert_eq!(v["split"]["predictions"].as_array().unwrap().len(), 432);
    assert!(v.get("cross_validation").is_none());
}

#[test]
fn evaluate_reports_folds_and_counts() {
    let m = data("monks-1.csv");
    let v = json(&[
        "evaluate",
        "--data",
        &m,
        "--strategy",
        "constant",
        "--folds",
        "4",
        "--seed",
        "3",
    ]);
    assert_eq!(v["data"]["instances"], 432);
    let counts: u64 = v["data"]["class_counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["count"].as_u64().unwrap())
        .sum();
    assert_eq!(counts, 432);
    let folds = v["cross_validation"]["per_fold"].as_array().unwrap();
    assert_eq!(folds.len(), 4);
    let mut rows: Vec<u64> = folds
        .iter()
        .flat_map(|f| f["test_rows"].as_array().unwrap().iter().map(|r| r.as_u64().unwrap()))
        .collect();
    rows.sort_unstable();
    assert_eq!(rows, (0..432).collect::<Vec<_>>());
    assert!(v["cross_validation"].get("elapsed").is_none());
}

#[test]
fn evaluate_config_errors_listed_together() {
    let m = data("monks-1.csv");
    let o = run(&[
        "evaluate",
        "--data",
        &m,
        "--strategy",
        "knn",
        "--radius",
        "2",
        "--folds",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains("--radius") && err.contains("--folds") && err.contains("--seed"),
        "{err}"
    );
    let o = run(&[
        "evaluate",
        "--data",
        &m,
        "--profile",
        "table2",
        "--strategy",
        "knn",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "evaluate",
        "--data",
        &m,
        "--strategy",
        "selected",
        "--min-confidence",
        "1.5",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn data_errors_exit_two() {
    let o = run(&[
        "evaluate",
        "--data",
        "no/such/file.csv",
        "--strategy",
        "knn",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let ragged = scratch("ragged.csv", "a,b,c\nx,y\n");
    let o = run(&[
        "evaluate",
        "--data",
        ragged.to_str().unwrap(),
        "--strategy",
        "knn",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["explain", "--data", &data("coffee.csv"), "--row", "0"]);
    assert_eq!(o.status.code(), Some(2), "single-valued column without a sidecar");
}

#[test]
fn profile_table3_runs_the_grid() {
    let m = data("monks-1.csv");
    let v = json(&[
        "evaluate",
        "--data",
        &m,
        "--profile",
        "table3",
        "--strategy",
        "knn",
        "--seed",
        "42",
    ]);
    assert_eq!(v["grid"]["grid"], serde_json::json!([1, 3, 5, 7, 9, 11]));
    assert_eq!(v["grid"]["runs"].as_array().unwrap().len(), 6);
}

fn coffee(result: &str, extra: &[&str]) -> Vec<String> {
    let mut args: Vec<String> = [
        "explain",
        "--data",
        &data("coffee.csv"),
        "--schema",
        &data("coffee.schema.json"),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    args.extend(["--class-column".to_string(), result.to_string()]);
    args.extend(extra.iter().map(|s| s.to_string()));
    args
}

#[test]
fn coffee_explanations_match_golden_files() {
    for (result, golden) in [
        ("with milk", "coffee_why_milk.json"),
        ("with sugar", "coffee_why_sugar.json"),
    ] {
        let args = coffee(result, &["--row", "3"]);
        let mut full = vec!["--format", "json"];
        full.extend(args.iter().map(String::as_str));
        let o = run(&full);
        assert_eq!(o.status.code(), Some(0));
        let expected = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden)).unwrap();
        assert_eq!(
            String::from_utf8(o.stdout).unwrap(),
            String::from_utf8(expected).unwrap()
        );
    }
}

#[test]
fn coffee_query_by_symbols() {
    let args = coffee(
        "with milk",
        &["--query", "sit_1,no,coffee,yes", "--result", "no", "--target", "yes"],
    );
    let v = json(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(v["row"], 1);
    assert_eq!(v["best"]["adverse_row"], 3);
    assert_eq!(
        v["sentence"],
        "with milk is no and not yes because situation is sit_1 and not sit_2"
    );
}

#[test]
fn vacuous_and_unsupported_questions() {
    let args = coffee("with milk", &["--row", "3", "--target", "yes"]);
    let o = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(o.status.code(), Some(1));

    let lonely = scratch("lonely.csv", "a,b,r\nx,u,p\ny,v,p\n");
    let schema = scratch(
        "lonely.json",
        r#"{"attributes":[{"name":"a","domain":["x","y"]},{"name":"b","domain":["u","v"]},{"name":"r","domain":["p","q"]}]}"#,
    );
    let o = run(&[
        "explain",
        "--data",
        lonely.to_str().unwrap(),
        "--schema",
        schema.to_str().unwrap(),
        "--row",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).trim(), "no adverse example exists");
}

#[test]
fn planted_strength_reported() {
    let spec = scratch(
        "planted.json",
        r#"{"domain_sizes":[3,3,3,3],"classes":["p","q"],
            "rules":[{"change":[{"attribute":1,"from":0,"to":2}],"tilt":[0,1],"instances":4,"exceptions":1}],
            "background":0,"seed":5}"#,
    );
    let o = run(&["generate", "planted", "--config", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = scratch("planted.csv", &stdout(&o));
    // rows come in pairs: instance 0 is rows 0 -> 1
    let v = json(&["explain", "--data", csv.to_str().unwrap(), "--row", "1"]);
    assert_eq!(v["best"]["adverse_row"], 0);
    assert_eq!(v["best"]["supporting_pairs"], 3);
    assert_eq!(v["best"]["exception_pairs"], 1);
    assert_eq!(v["best"]["strength"], 0.75);
}

#[test]
fn deps_on_courses() {
    let v = json(&["deps", "--data", &data("courses.csv")]);
    let nontrivial: Vec<(String, String)> = v["mvds"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|m| m["trivial"] == false)
        .map(|m| (m["x"].to_string(), m["y"].to_string()))
        .collect();
    assert!(nontrivial.contains(&(r#"["course"]"#.into(), r#"["teacher"]"#.into())));
    assert!(nontrivial.contains(&(r#"["course"]"#.into(), r#"["time"]"#.into())));
    assert_eq!(v["lossless_agreement"], true);
    assert_eq!(v["ap_agreement"], true);
    assert_eq!(v["inference"]["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn deps_witness_for_missing_row() {
    let text = std::fs::read_to_string(data("courses.csv")).unwrap();
    let smaller: String = text
        .lines()
        .filter(|l| *l != "Maths,Paul,2 pm")
        .map(|l| format!("{l}\n"))
        .collect();
    let path = scratch("courses_minus.csv", &smaller);
    let v = json(&[
        "deps",
        "--data",
        path.to_str().unwrap(),
        "--mode",
        "single",
        "--x",
        "course",
        "--y",
        "teacher",
    ]);
    assert_eq!(v["mvd"], false);
    assert_eq!(v["lossless_join"], false);
    assert_eq!(v["witness"]["missing"], serde_json::json!(["Maths", "Paul", "2 pm"]));
}

#[test]
fn deps_single_tuple_everything_holds() {
    let path = scratch("one.csv", "A,B,C\n0,1,0\n");
    let schema = scratch(
        "one.json",
        r#"{"attributes":[{"name":"A","domain":["0","1"]},{"name":"B","domain":["0","1"]},{"name":"C","domain":["0","1"]}]}"#,
    );
    let v = json(&[
        "deps",
        "--data",
        path.to_str().unwrap(),
        "--schema",
        schema.to_str().unwrap(),
    ]);
    // 3^3 - 2^3 disjoint (X, Y) pairs with Y non-empty
    assert_eq!(v["mvds"].as_array().unwrap().len(), 19);
    assert_eq!(v["weak_mvds"].as_array().unwrap().len(), 19);
    // every single-attribute Y: 3 attributes, each with 4 choices of X
    assert_eq!(v["fds"].as_array().unwrap().len(), 12);
}

#[test]
fn deps_exhaustive_rejects_wide_schemas() {
    let header: Vec<String> = (0..7).map(|i| format!("A{i}")).collect();
    let text = format!("{}\n{}\n{}\n", header.join(","), ["0"; 7].join(","), ["1"; 7].join(","));
    let path = scratch("wide.csv", &text);
    assert_eq!(run(&["deps", "--data", path.to_str().unwrap()]).status.code(), Some(1));
    let o = run(&[
        "deps",
        "--data",
        path.to_str().unwrap(),
        "--mode",
        "single",
        "--x",
        "A0",
        "--y",
        "A1",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn generate_outputs() {
    let o = run(&["generate", "affine", "--n", "2", "--coefficients", "0,1,1"]);
    assert_eq!(stdout(&o), "x1,x2,class\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n");
    assert_eq!(run(&["generate", "affine", "--n", "3"]).status.code(), Some(1));
    let a = run(&[
        "generate",
        "random-relation",
        "--arity",
        "3",
        "--count",
        "5",
        "--seed",
        "9",
    ]);
    let b = run(&[
        "generate",
        "random-relation",
        "--arity",
        "3",
        "--count",
        "5",
        "--seed",
        "9",
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 6);
    let o = run(&[
        "generate",
        "random-relation",
        "--arity",
        "3",
        "--count",
        "9",
        "--seed",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["generate", "monk", "--problem", "3"]);
    assert_eq!(o.stdout, std::fs::read(data("monks-3.csv")).unwrap());
}

#[test]
fn json_is_independent_of_thread_count() {
    let m = data("monks-3.csv");
    let base = [
        "evaluate",
        "--data",
        &m,
        "--profile",
        "table2",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let one = run(&[&base[..], &["--threads", "1"]].concat());
    let four = run(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
