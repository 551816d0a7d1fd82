use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gorulab"))
        .args(args)
        .env_remove("GORULAB_TRUNCATION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_stated_gammas_violated() {
    let o = run(&["check", &data("paper_gammas.json"), "--r", "auto", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["r"], 1);
    assert_eq!(v["violation"]["m"], 2);
    assert_eq!(v["violation"]["residual"], "-1/18");
    assert_eq!(v["violation"]["certificate"], "γ_1 − 3γ_2 + 2γ_3 = −1/18");
}

#[test]
fn check_consistent_inputs() {
    let o = run(&["check", &data("trivial_gammas.json"), "--r", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["check", &data("geometric_gammas.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["r"], 1);
}

#[test]
fn check_auto_needs_integer_degree() {
    let dir = std::env::temp_dir().join("gorulab-cli-auto");
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("g.json");
    std::fs::write(&f, r#"["1","1/3"]"#).unwrap();
    let o = run(&["check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "InvalidInput");
}

#[test]
fn molien_screen_on_example_group() {
    let o = run(&["molien", &data("paper_group.json"), "-K", "3", "--screen", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["group"]["order"], 12);
    assert_eq!(v["group"]["strata_sizes"], serde_json::json!([4, 5, 1, 1, 1]));
    assert_eq!(v["laurent"]["gammas"], serde_json::json!(["1/12", "1/24", "1/24", "-1/72"]));
    assert_eq!(v["screen"]["verdict"]["status"], "not_gorenstein");
    assert_eq!(v["screen"]["r"], 1);
}

#[test]
fn molien_small_groups() {
    let o = run(&["molien", &data("trivial_dim1.json"), "-K", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["hilbert"], serde_json::json!({"num": ["1"], "den": ["1", "-1"]}));
    let o = run(&["molien", &data("plus_minus_dim1.json"), "-K", "2", "--format", "json"]);
    assert_eq!(json(&o)["laurent"]["gammas"], serde_json::json!(["1/2", "1/4", "1/8"]));
    let o = run(&["molien", &data("rotation_dim2.json"), "--screen"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: consistent"));
}

#[test]
fn molien_order_bound() {
    let o = run(&["molien", &data("paper_group.json"), "--max-order", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "OrderExceeded");
}

#[test]
fn truncation_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_gorulab"))
        .args(["molien", &data("paper_group.json"), "--screen", "--format", "json"])
        .env("GORULAB_TRUNCATION", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_gorulab"))
        .args(["molien", &data("plus_minus_dim1.json"), "--format", "json"])
        .env("GORULAB_TRUNCATION", "5")
        .output()
        .unwrap();
    assert_eq!(json(&o)["laurent"]["gammas"].as_array().unwrap().len(), 6);
}

#[test]
fn transform_round_trip_and_free_slot() {
    let dir = std::env::temp_dir().join("gorulab-cli-transform");
    std::fs::create_dir_all(&dir).unwrap();
    let even = dir.join("even.json");
    std::fs::write(&even, r#"["1/2","1/8","1/32","1/128"]"#).unwrap();
    let o = run(&["transform", even.to_str().unwrap(), "--direction", "odd-from-even", "--r", "1", "--truncation", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let expect: Vec<String> = (1..=8).map(|i| format!("1/{}", 1u64 << i)).collect();
    assert_eq!(json(&o)["gammas"], serde_json::json!(expect));

    let odd = dir.join("odd.json");
    std::fs::write(&odd, r#"["0","0","0","0"]"#).unwrap();
    let o = run(&["transform", odd.to_str().unwrap(), "--direction", "even-from-odd", "--r", "-2", "--truncation", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["transform", odd.to_str().unwrap(), "--direction", "even-from-odd", "--r", "-2", "--free-gamma", "3", "--truncation", "6", "--format", "json"]);
    assert_eq!(json(&o)["gammas"][2], "3");

    std::fs::write(&odd, r#"["0","5","0","0"]"#).unwrap();
    let o = run(&["transform", odd.to_str().unwrap(), "--direction", "even-from-odd", "--r", "-2", "--free-gamma", "3", "--truncation", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "ConstraintViolation");
    assert_eq!(err["detail"]["index"], 3);
}

#[test]
fn triangle_outputs() {
    let o = run(&["triangle", "--r", "1", "--rows", "2"]);
    assert_eq!(stdout(&o), "0:  1 -2\n1:  3 -9  6\n");
    let o = run(&["triangle", "--r", "9", "--rows", "1", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["rows"][0]["coefficients"], serde_json::json!(["9", "-2"]));
    let o = run(&["triangle", "--r", "8", "--presentation", "rescaled"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["triangle", "--lucas", "--rows", "4"]);
    assert_eq!(stdout(&o), "0: 2\n1: 1 2\n2: 1 3 2\n3: 1 4 5 2\n");
}

#[test]
fn identity_suites() {
    for suite in ["lemma45", "moll", "cubic", "quadratic", "proof-support"] {
        let o = run(&["identity", "--suite", suite, "--n-max", "5", "--r-min", "-3", "--r-max", "3", "--j-max", "5"]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
    }
    let o = run(&["identity", "--suite", "gould", "--triangle", "pascal"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["identity", "--suite", "gould", "--triangle", "random:7"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["identity", "--suite", "gould", "--triangle", "lucas"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn coeff_tables() {
    let o = run(&["coeffs", "--table", "bracket", "--n-max", "3", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v[3]["values"], serde_json::json!(["0", "3", "-5", "3"]));
    let o = run(&["coeffs", "--table", "bracket-r", "--r", "-2", "--n-max", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().iter().map(|r| r["n"].as_i64().unwrap()).collect::<Vec<_>>(), vec![0, 2]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["check", &data("paper_gammas.json"), "--m-max", "0"]).status.code(), Some(2));
    let o = run(&["check", "/does/not/exist.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["molien", &data("paper_group.json"), "--screen", "--format", "json"]);
    let b = run(&["molien", &data("paper_group.json"), "--screen", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}
