use std::process::{Command, Output};

use serde_json::Value;

fn conical(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conical")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quartic_table() {
    let o = conical(&["compute", "--case", "quartic-p2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("projectivized polynomial: 1 + t^3 + t^5 + t^6 + t^8 + t^9 + t^11 + t^14"), "{out}");
    assert!(out.contains("factored: (1+t)(1+t^3)(1+t^5)(1+t^6)"));
    assert!(out.contains(" q/p    1  2  3  4  5  6  7  8  9 10 11 12 13"));
}

#[test]
fn quadric_over_the_integers() {
    let o = conical(&["compute", "--case", "quadric-p2", "--coefficients", "integral", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["mode"], "integral");
    let cells = v["e_infinity"]["cells"].as_array().unwrap();
    let z2: Vec<(i64, i64)> = cells
        .iter()
        .filter(|c| c.get("torsion").is_some())
        .map(|c| (c["p"].as_i64().unwrap(), c["q"].as_i64().unwrap()))
        .collect();
    assert_eq!(z2, vec![(1, 7), (2, 5)]);
    let table = stdout(&conical(&["compute", "--case", "quadric-p2", "--coefficients", "integral"]));
    assert!(table.contains("H*(complement): {0:Z, 1:Z, 3:Z2, 4:Z2, 5:Z, 6:Z}"), "{table}");
}

#[test]
fn usage_errors_exit_with_two() {
    let o = conical(&["compute", "--case", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nosuch"));
    assert_eq!(conical(&["compute"]).status.code(), Some(2));
    assert_eq!(conical(&["compute", "--case", "cubic-p2", "--coefficients", "integral"]).status.code(), Some(2));
    assert_eq!(conical(&["census", "--q", "6"]).status.code(), Some(2));
    assert_eq!(conical(&["census", "--q", "5", "--vf"]).status.code(), Some(2));
    assert_eq!(conical(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(conical(&["spaces", "--expr", "{\"type\":\"Nope\"}"]).status.code(), Some(2));
}

#[test]
fn spec_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cubic.json");
    let spec = conical_core::strata::builtin_spec("cubic-p2").unwrap();
    conical_core::strata::save_spec(&spec, &path).unwrap();
    let p = path.to_str().unwrap();
    let o = conical(&["compute", "--spec", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("projectivized polynomial: 1 + t^3 + t^5 + t^8"));
    assert_eq!(conical(&["compute", "--spec", p, "--case", "quartic-p2"]).status.code(), Some(2));

    let mut wrong = spec.clone();
    wrong.strata.last_mut().unwrap().l_dim = 1;
    let bad = dir.path().join("wrong.json");
    conical_core::strata::save_spec(&wrong, &bad).unwrap();
    let o = conical(&["compute", "--spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("L_dim"));

    std::fs::write(&bad, "{\"case_id\": ").unwrap();
    assert_eq!(conical(&["compute", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn space_and_link_expressions() {
    let o = conical(&["spaces", "--expr", r#"{"type":"Config","space":{"type":"Proj","n":2},"k":2}"#, "--twist", "sign"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{2:Q, 4:Q, 6:Q}"));
    let o = conical(&[
        "spaces",
        "--expr",
        r#"{"type":"SelfJoin","space":{"type":"Proj","n":1},"k":4}"#,
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "link");
    assert_eq!(v["homology"]["entries"], Value::Array(vec![]));
    let o = conical(&["spaces", "--expr", r#"{"type":"Grassmann","k":2,"m":4}"#, "--coefficients", "integral"]);
    assert!(stdout(&o).contains("{0:Z, 2:Z, 4:Z^2, 6:Z, 8:Z}"));
}

#[test]
fn census_json() {
    let o = conical(&["census", "--d", "3", "--n", "2", "--q", "2", "--strategy", "enumerate", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 336);
    assert_eq!(v["predicted"], 336);
    assert_eq!(v["match"], true);
    assert_eq!(v["kmax_used"], 4);
    assert!(v["elapsed_ms"].is_u64());
    let v: Value = serde_json::from_str(&stdout(&conical(&["census", "--vf", "--q", "2"]))).unwrap();
    assert_eq!(v["count"], 86016);
    let v: Value = serde_json::from_str(&stdout(&conical(&["census", "--d", "4", "--n", "2", "--q", "2", "--kmax", "9"]))).unwrap();
    assert_eq!(v["exploratory"], true);
    assert_eq!(v["match"], Value::Null);
}

#[test]
fn check_single_criterion() {
    let o = conical(&["check", "--criterion", "2", "--criterion", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().count() == 2 && out.lines().all(|l| l.starts_with("PASS")), "{out}");
    assert_eq!(conical(&["check", "--criterion", "42"]).status.code(), Some(2));
}
