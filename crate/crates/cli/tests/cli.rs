use std::path::Path;
use std::process::{Command, Output};

use coxcoh::complex::MirroredComplex;
use coxcoh::corpus;
use coxcoh::coxeter::CoxeterMatrix;
use serde_json::Value;

fn coxcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxcoh")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn spherical_subsets_of_infinite_dihedral() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dinf.json", r#"{"generators":["s","t"],"m":[[1,0],[0,1]]}"#);
    let out = coxcoh(&["spherical", &f]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["spherical"], serde_json::json!([[], ["s"], ["t"]]));
    assert_eq!(v["version"], 1);
}

#[test]
fn bad_inputs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "broken.json", r#"{"generators":["s","t"],"m":[[1,3"#);
    assert_eq!(coxcoh(&["spherical", &f]).status.code(), Some(2));
    let f = write(dir.path(), "asym.json", r#"{"generators":["s","t"],"m":[[1,3],[4,1]]}"#);
    assert_eq!(coxcoh(&["spherical", &f]).status.code(), Some(3));
    assert_eq!(coxcoh(&["spherical", "/nonexistent/w.json"]).status.code(), Some(2));
    let f = write(dir.path(), "tripod.json", &corpus::tripod().matrix().to_json());
    let out = Command::new(env!("CARGO_BIN_EXE_coxcoh"))
        .args(["ball", &f, "--radius", "8"])
        .env("COXCOH_MAX_ELEMENTS", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn corpus_round_trips() {
    let all = corpus::all_systems();
    assert!(all.len() >= 7);
    let dir = tempfile::tempdir().unwrap();
    for (name, w) in all {
        let text = w.matrix().to_json();
        assert_eq!(&CoxeterMatrix::from_json(&text).unwrap(), w.matrix(), "{name}");
        let f = write(dir.path(), "w.json", &text);
        let v = json(&coxcoh(&["spherical", &f]));
        assert_eq!(v["spherical"].as_array().unwrap().len(), w.spherical_poset().unwrap().sets().count(), "{name}");
        // K comes back as a complex document that reads in again
        let k = json(&coxcoh(&["chamber", &f]));
        let k = MirroredComplex::from_json(&k.to_string(), w.generators()).unwrap();
        assert_eq!(k.len(), corpus::chamber(&w).len());
    }
    let tripod = corpus::tripod();
    let singletons = tripod.spherical_poset().unwrap().sets().filter(|t| t.len() == 1).count();
    assert_eq!(singletons, 3);
}

#[test]
fn sign_action_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s3.json", &corpus::s3().matrix().to_json());
    let out = coxcoh(&["graded-action", &f, "-T", "", "-s", "t", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["trace"], "-1");
    let out = coxcoh(&["basis", &f, "--radius", "3", "--side", "right"]);
    let v = json(&out);
    assert_eq!(v["unitriangular"], true);
    assert_eq!(v["slices"].as_array().unwrap().len(), 4);
    let out = coxcoh(&["homology", &f, "--variant", "hc"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["equal"], true);
}

#[test]
fn buildings_and_hecke() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dinf.json", &corpus::infinite_dihedral().matrix().to_json());
    let out = coxcoh(&["building", &f, "--thickness", "s=2,t=2", "--radius", "3", "--basis", "s"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["chambers"], 29);
    assert_eq!(v["basis"]["determinant"], "1");
    let out = coxcoh(&["hecke", &f, "--q", "s=2,t=1/3", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["graded"].as_array().unwrap().iter().all(|g| g["ok"] == true));
    // conjugate generators need equal parameters
    let f = write(dir.path(), "s3.json", &corpus::s3().matrix().to_json());
    assert_eq!(coxcoh(&["hecke", &f, "--q", "s=2,t=3"]).status.code(), Some(3));
}

#[test]
fn demo_and_verify() {
    let out = coxcoh(&["demo", "tripod", "--radius", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["x_on_line"].clone(), v["xs_on_line"].clone()), (1.into(), 0.into()));
    let out = coxcoh(&["verify", "--suite", "9", "--corpus", "builtin"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_passed"], true);
    assert_ne!(coxcoh(&["verify", "--corpus", "elsewhere"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a3.json", &corpus::a3().matrix().to_json());
    let a = coxcoh(&["graded", &f, "-p", "1", "--radius", "2"]);
    let b = coxcoh(&["graded", &f, "-p", "1", "--radius", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
