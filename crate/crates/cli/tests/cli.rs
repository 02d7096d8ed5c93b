use std::process::{Command, Output};

use circulant_genus::embed::EmbeddingExport;
use circulant_genus::CirculantGraph;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circgenus")).args(args).output().expect("spawn circgenus")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn classify_quad_family_member() {
    let v = json(&["classify", "32:8,2,3"]);
    assert_eq!(v["exact"], 9);
    let rules: Vec<&str> = v["provenance"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
    assert!(rules.contains(&"EXACT_QUADFAMILY"), "{rules:?}");
}

#[test]
fn classify_torus_member() {
    let v = json(&["classify", "13:1,6"]);
    assert_eq!((v["lower"].as_u64(), v["exact"].as_u64()), (Some(1), Some(1)));
}

#[test]
fn embed_check_round_trips() {
    let v = json(&["embed", "7:1,2,3", "--check"]);
    assert_eq!(v["verified"], true);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["faces"].as_array().unwrap().len(), 14);
    let dot = run(&["embed", "7:1,2,3", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph \"C_7(1,2,3)\""));
}

#[test]
fn embed_json_matches_the_export_schema() {
    let out = run(&["embed", "13:1,5,6"]);
    let export: EmbeddingExport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(export.recheck().unwrap());
    assert_eq!(export.genus, 1);
    let bounds: Value = json(&["classify", "13:1,5,6"]);
    let g: CirculantGraph = serde_json::from_value(bounds["graph"].clone()).unwrap();
    assert_eq!(g, export.graph);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "12:1,5"]).status.code(), Some(0));
    assert_eq!(run(&["classify", "not-a-graph"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "10:0,3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["adam-eq", "13:1,5", "13:2,3", "--format", "dot"]).status.code(), Some(2));
    // disconnected input is a domain error
    assert_eq!(run(&["classify", "12:2,4"]).status.code(), Some(1));
    // over budget still prints the outcome
    let out = run(&["oracle-genus", "12:1,2,3,4,5"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["genus"]["outcome"], "overBudget");
}

#[test]
fn oracles() {
    assert_eq!(json(&["oracle-genus", "9:1,3"])["genus"]["value"], 1);
    assert_eq!(json(&["oracle-iso", "11:1,3", "11:2,5"])["isomorphic"]["value"], true);
    assert_eq!(json(&["oracle-iso", "8:1,3", "8:1,2"])["isomorphic"]["value"], false);
    assert_eq!(json(&["girth", "13:1,6"])["girth"], 3);
    assert_eq!(json(&["adam-eq", "13:1,5", "13:2,3"])["equivalent"], true);
}

#[test]
fn decomposition_and_components() {
    let v = json(&["decompose", "30:6,10,15", "--prefix", "2"]);
    assert_eq!(v["verified"], true);
    assert_eq!(v["decompositions"].as_array().unwrap().len(), 30);
    assert_eq!(json(&["components", "12:2,4"])["d"], 2);
}

#[test]
fn spectra_and_table() {
    let v = json(&["spectra", "256:1,15,16"]);
    assert_eq!(v["diameter"], 10);
    assert!((v["algebraicConnectivity"].as_f64().unwrap() - 0.286858).abs() < 1e-5);
    let rows = json(&["remark-table", "--j", "8..10"]);
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert_eq!(rows[1]["twoJumpDiameter"], 19);
    let table = json(&["table", "32"]);
    let k4 = table.as_array().unwrap().last().unwrap();
    assert_eq!((k4["genus"].as_u64(), k4["allQuad"].as_u64()), (Some(17), Some(48)));
}

#[test]
fn output_is_deterministic() {
    for args in [&["table", "32", "--threads", "3"][..], &["classify", "--table", "18", "--threads", "4"]] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let one = run(&["classify", "--table", "18", "--threads", "1"]).stdout;
    assert_eq!(one, run(&["classify", "--table", "18", "--threads", "5"]).stdout);
}
