use std::process::Command;

use serde_json::Value;

const SOMOS5: [&str; 6] = ["--recurrence", "somos5", "--params", "1,1", "--seeds", "1,1,1,1,1"];

fn somos(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_somos")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn with(cmd: &str, extra: &[&str]) -> Vec<String> {
    let mut v = vec![cmd.to_string()];
    v.extend(SOMOS5.iter().map(|s| s.to_string()));
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run(cmd: &str, extra: &[&str]) -> (i32, Value) {
    let args = with(cmd, extra);
    let (code, out) = somos(&args.iter().map(String::as_str).collect::<Vec<_>>());
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn iterate_reaches_22833() {
    let (code, v) = run("iterate", &["--range", "0:14"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"].as_array().unwrap().last().unwrap(), "22833");
}

#[test]
fn solve_reports_starred_curve() {
    let (code, v) = run("solve", &[]);
    assert_eq!(code, 0);
    assert_eq!(v["g2_star"]["exact"], "121/12");
    assert_eq!(v["g3_star"]["exact"], "-845/216");
    assert_eq!(v["j"]["exact"], "1771561/612");
    assert!(v["convention"]["kappa_sign"].is_i64());
}

#[test]
fn solve_is_byte_identical() {
    let args = with("solve", &[]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(somos(&args), somos(&args));
}

#[test]
fn verify_all_passes() {
    let (code, v) = run("verify", &["--suite", "all"]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["passed"], true);
    let suites: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["suite"].as_str().unwrap())
        .collect();
    for s in [
        "recurrence",
        "hankel5",
        "invariants",
        "subsequence",
        "identities",
        "reconstruction",
        "asymptotics",
    ] {
        assert!(suites.contains(&s), "{s}");
    }
}

#[test]
fn solve_output_feeds_eval() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sol.json");
    let p = path.to_str().unwrap();
    let (code, _) = somos(
        &with("solve", &["--output", p])
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    assert_eq!(code, 0);
    let (code, out) = somos(&["eval", "--input", p, "--range", "-5:20"]);
    assert_eq!(code, 0);
    let eval: Value = serde_json::from_str(&out).unwrap();
    let (_, it) = run("iterate", &["--range", "-5:20"]);
    let exact = it["values"].as_array().unwrap();
    for (k, e) in eval["values"].as_array().unwrap().iter().enumerate() {
        let t: f64 = exact[k].as_str().unwrap().parse().unwrap();
        let got = e["value"]["re"].as_f64().unwrap();
        assert!(
            (got - t).abs() / t.abs().max(1.0) < 1e-8,
            "n = {}: {got} vs {t}",
            e["n"]
        );
    }
}

#[test]
fn eval_single_index() {
    let (code, v) = run("eval", &["--n", "14"]);
    assert_eq!(code, 0);
    assert!((v["value"]["re"].as_f64().unwrap() - 22833.0).abs() < 22833.0 * 1e-7);
    let (_, v) = run("eval", &["--n", "-1"]);
    assert!((v["value"]["re"].as_f64().unwrap() - 2.0).abs() < 2e-7);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(
        &path,
        r#"{"recurrence": "somos4", "params": ["1", "1"], "seeds": ["1", "1", "1", "1"], "range": "0:10"}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (code, out) = somos(&["iterate", "--config", p]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"].as_array().unwrap().last().unwrap(), "1529");
    let (_, out) = somos(&["iterate", "--config", p, "--range", "0:4"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 5);
    std::fs::write(&path, r#"{"recurrence": "somos4", "bogus": 1}"#).unwrap();
    assert_eq!(somos(&["iterate", "--config", p]).0, 1);
}

#[test]
fn exit_codes() {
    assert_eq!(
        somos(&[
            "solve",
            "--recurrence",
            "somos4",
            "--params",
            "1,0",
            "--seeds",
            "1,1,1,1"
        ])
        .0,
        2
    );
    assert_eq!(
        somos(&["solve", "--recurrence", "somos4", "--params", "1,1", "--seeds", "1,1,1"]).0,
        1
    );
    assert_eq!(
        somos(&["solve", "--recurrence", "somos7", "--params", "1,1", "--seeds", "1,1,1"]).0,
        1
    );
    assert_eq!(
        somos(&[
            "iterate",
            "--recurrence",
            "somos4",
            "--params",
            "1,x",
            "--seeds",
            "1,1,1,1"
        ])
        .0,
        1
    );
    assert_eq!(run("solve", &["--precision", "17"]).0, 1);
    assert_eq!(run("verify", &["--suite", "nonsense"]).0, 1);
    assert_eq!(somos(&["frobnicate"]).0, 1);
    assert_eq!(run("asymptotics", &[]).0, 0);
    assert_eq!(
        somos(&[
            "asymptotics",
            "--recurrence",
            "somos4",
            "--params",
            "1,1",
            "--seeds",
            "1,1,1,1"
        ])
        .0,
        2
    );
}

#[test]
fn negative_parameters_parse() {
    let (code, out) = somos(&[
        "iterate",
        "--recurrence",
        "somos5",
        "--params",
        "-1,5",
        "--seeds",
        "1,1,1,1,2",
        "--range",
        "-2:6",
    ]);
    assert_eq!(code, 0, "{out}");
}
