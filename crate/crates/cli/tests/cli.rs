use std::path::PathBuf;
use std::process::{Command, Output};

fn ptower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptower")).args(args).output().expect("ptower runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn list_plain_and_json() {
    let o = ptower(&["list"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() >= 6);
    let o = ptower(&["list", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let items = v.as_array().unwrap();
    assert!(items.len() >= 6);
    assert!(items.iter().any(|i| i["name"] == "q3-two-uniformizers"));
}

#[test]
fn unknown_flag_is_a_config_error() {
    assert_eq!(ptower(&["list", "--no-such-flag"]).status.code(), Some(4));
    assert_eq!(ptower(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(ptower(&["builtin", "no-such-scenario"]).status.code(), Some(4));
}

#[test]
fn q3_pair_text_and_json() {
    let o = ptower(&["builtin", "q3-two-uniformizers"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("C2 x C2"));
    let o = ptower(&["builtin", "q3-two-uniformizers", "--format", "json"]);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["results"]["compositum"]["compositum_degree"], 4);
    assert_eq!(padic_tower::scenario::canonical_json(&v), text);
}

#[test]
fn run_from_file() {
    let path = write_config(
        "q3-division.json",
        r#"{"schema": 1, "kind": "division-field", "p": 3, "f": 1, "groups": [{"h": 1, "multiplier": -1}]}"#,
    );
    let o = ptower(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bad_configs_exit_4() {
    let path = write_config("h-not-dividing-f.json", r#"{"schema": 1, "kind": "lt-build", "p": 3, "f": 3, "groups": [{"h": 2}]}"#);
    assert_eq!(ptower(&["run", path.to_str().unwrap()]).status.code(), Some(4));
    let path = write_config("malformed.json", r#"{"schema": 1, "kind": "#);
    assert_eq!(ptower(&["run", path.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(ptower(&["run", "/nonexistent/config.json"]).status.code(), Some(4));
}

#[test]
fn low_precision_exits_3() {
    let o = ptower(&["builtin", "q9-order-eight", "--precision", "4"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn failing_scenario_names_its_check() {
    let o = ptower(&["builtin", "q9-swapped-heights"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("first failing check: divisibility"));
    let o = ptower(&["builtin", "q9-swapped-heights", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["first_failure"], "divisibility");
}

#[test]
fn reports_identical_across_runs_and_jobs() {
    for b in padic_tower::scenario::builtins() {
        let run = |jobs: &str| {
            let o = ptower(&["builtin", b.name, "--format", "json", "--jobs", jobs]);
            assert!(o.status.code().is_some());
            o.stdout
        };
        let one = run("1");
        assert_eq!(one, run("4"), "{}", b.name);
        assert_eq!(one, run("4"), "{}", b.name);
    }
}
