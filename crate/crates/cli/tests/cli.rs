use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use cover_cone::{read_body, read_vector};
use serde_json::Value;

fn btcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btcone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// A fresh scratch directory per test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("btcone-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn file(dir: &PathBuf, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const WITNESS: &str = r#"{"n":4,"entries":{"2,4":"2","1,3":"2","1,2,3":"1","2,3,4":"1","1":"1","2":"1","3":"1","4":"1"}}"#;
const GUESS: &str =
    r#"{"n":4,"lhs":{"1,2":"1","2,3":"1","3,4":"1"},"rhs":{"1,2,3":"1","2,3,4":"1"}}"#;

#[test]
fn irreducible_covers_of_three_elements() {
    let out = btcone(&["covers", "--ground", "1,2,3", "--irreducible"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 6);
}

#[test]
fn all_covers_of_a_pair() {
    let out = btcone(&["covers", "--ground", "1,2", "--kmax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 2);
}

#[test]
fn witness_vector_is_a_member() {
    let dir = scratch("member");
    let v = file(&dir, "w.json", WITNESS);
    let out = btcone(&["member", "--vector", &v]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["inside"], true);
    let tight: Vec<&str> = report["tight"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_str().unwrap())
        .collect();
    assert!(tight.contains(&"1*{1,2} + 1*{1,3} + 1*{2,3} >= 2*{1,2,3}"));
    assert!(tight.contains(&"1*{2,3} + 1*{2,4} + 1*{3,4} >= 2*{2,3,4}"));
}

#[test]
fn superadditive_vector_is_rejected_with_status_one() {
    let dir = scratch("outside");
    let v = file(&dir, "v.json", r#"{"n":2,"entries":{"1,2":"1"}}"#);
    let out = btcone(&["member", "--vector", &v, "--hrep"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["inside"], false);
    assert_eq!(report["violated"][0], "1*{1} + 1*{2} >= 1*{1,2}");
    assert_eq!(report["hrep"].as_array().unwrap().len(), 1);
}

#[test]
fn embedding_keeps_membership() {
    let dir = scratch("embed");
    let v = file(
        &dir,
        "v.json",
        r#"{"n":2,"entries":{"1":"1","2":"1","1,2":"1"}}"#,
    );
    let out = btcone(&["member", "--vector", &v, "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["generators"], 8);
}

#[test]
fn guess_is_refuted_by_a_body() {
    let dir = scratch("imply");
    let ineq = file(&dir, "guess.json", GUESS);
    let body_path = dir.join("body.json");
    let out = btcone(&[
        "imply",
        "--inequality",
        &ineq,
        "--emit-body",
        body_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["implied"], false);
    assert_eq!(report["witness"]["n"], 4);
    assert!(report["body"]["log_margin"].as_f64().unwrap() > 0.0);
    let body = read_body(&fs::read_to_string(&body_path).unwrap()).unwrap();
    assert_eq!(body.n(), 4);
}

#[test]
fn generator_is_implied_by_itself() {
    let dir = scratch("certificate");
    let ineq = file(
        &dir,
        "g.json",
        r#"{"n":2,"lhs":{"1":"1","2":"1"},"rhs":{"1,2":"1"}}"#,
    );
    let out = btcone(&["imply", "--inequality", &ineq]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["implied"], true);
    assert_eq!(report["certificate"][0]["weight"], "1");
    assert_eq!(report["certificate"][0]["ground"], "1,2");
}

#[test]
fn realize_then_project() {
    let dir = scratch("realize");
    let v = file(
        &dir,
        "v.json",
        r#"{"n":2,"entries":{"1":"1","2":"1","1,2":"1"}}"#,
    );
    let body = dir.join("body.json");
    let report = dir.join("report.json");
    let out = btcone(&[
        "realize",
        "--vector",
        &v,
        "--out",
        body.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["lambda"], "2");
    let details: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(details["max_gap"].as_f64().unwrap() <= 1e-6);

    let projected = dir.join("projected.json");
    let out = btcone(&[
        "project",
        "--body",
        body.to_str().unwrap(),
        "--out",
        projected.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let w = read_vector(&fs::read_to_string(&projected).unwrap()).unwrap();
    for (_, x) in w.iter() {
        let x = x.numer().to_string().parse::<f64>().unwrap()
            / x.denom().to_string().parse::<f64>().unwrap();
        assert!((x - 2.0).abs() < 1e-6);
    }
}

#[test]
fn realize_beyond_cap_is_a_verdict() {
    let dir = scratch("cap");
    let v = file(
        &dir,
        "v.json",
        r#"{"n":2,"entries":{"1":"1","2":"1","1,2":"1"}}"#,
    );
    let body = dir.join("body.json");
    let out = btcone(&[
        "realize",
        "--vector",
        &v,
        "--lambda-cap",
        "1",
        "--out",
        body.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!body.exists());
}

#[test]
fn zero_projection_is_a_verdict() {
    let dir = scratch("project");
    let body = file(
        &dir,
        "b.json",
        r#"{"n":2,"boxes":[{"intervals":[["0","1"],["0","0"]]}]}"#,
    );
    let out = btcone(&[
        "project",
        "--body",
        &body,
        "--out",
        dir.join("v.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["zero_subsets"][0], "2");
}

#[test]
fn witness_report() {
    let out = btcone(&["witness", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["in_cone"], true);
    assert_eq!(report["obstruction_lhs"], "1");
    assert_eq!(report["obstruction_rhs"], "-1");
    assert_eq!(report["obstruction_holds"], false);
}

#[test]
fn sampling_depends_only_on_the_seed() {
    let a = btcone(&["--seed", "11", "witness", "--samples", "10"]);
    let b = btcone(&["witness", "--samples", "10", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn shearer_power_set() {
    let dir = scratch("shearer");
    let family = file(
        &dir,
        "f.json",
        r#"{"n":3,"members":["","1","2","3","1,2","1,3","2,3","1,2,3"]}"#,
    );
    let cover = file(&dir, "c.json", r#"{"n":3,"sets":["1,2","1,3","2,3"]}"#);
    let out = btcone(&[
        "shearer", "--family", &family, "--cover", &cover, "--k", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["lhs_product"], "64");
    assert_eq!(report["rhs_power"], "64");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = scratch("errors");
    assert_eq!(btcone(&["member"]).status.code(), Some(2));
    assert_eq!(btcone(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        btcone(&["covers", "--ground", "2,x"]).status.code(),
        Some(2)
    );
    let missing = dir.join("missing.json");
    assert_eq!(
        btcone(&["member", "--vector", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let dup = file(
        &dir,
        "dup.json",
        r#"{"n":2,"entries":{"1,2":"1","2,1":"1"}}"#,
    );
    assert_eq!(btcone(&["member", "--vector", &dup]).status.code(), Some(2));
    let v = file(&dir, "v.json", r#"{"n":2,"entries":{}}"#);
    let out = btcone(&[
        "realize",
        "--vector",
        &v,
        "--epsilon",
        "0.1",
        "--out",
        "x.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--epsilon"));
    let family = file(&dir, "f.json", r#"{"n":3,"members":["1"]}"#);
    let cover = file(&dir, "c.json", r#"{"n":3,"sets":["1,2"]}"#);
    let out = btcone(&[
        "shearer", "--family", &family, "--cover", &cover, "--k", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
